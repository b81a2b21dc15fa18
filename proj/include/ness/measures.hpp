#pragma once

// Entropies, mutual informations and negativities of fermionic Gaussian states
// evaluated from restricted correlation matrices C_ij = <c_i^dagger c_j>.

#include <Eigen/Dense>

#include <string>

namespace ness {

struct SpectralOptions {
  double clip = 1e-12;      // Petz-Renyi powers clip eigenvalues to [clip, 1 - clip]
  double imag_tol = 1e-8;   // allowed relative imaginary residue
};

enum class MeasureKind {
  VonNeumann,
  Renyi,
  MutualInformation,
  RenyiMutualInformation,
  PetzRenyiMutualInformation,
  Negativity,
  RenyiNegativity,
};

const char* to_string(MeasureKind kind);

struct MeasureDiagnostics {
  double spectrum_excursion = 0.0;  // how far eigenvalues left [0, 1] before clipping
  double imag_residue = 0.0;        // largest discarded imaginary part (relative)
};

struct MeasureValue {
  double value = 0.0;
  MeasureKind kind = MeasureKind::VonNeumann;
  double n = 1.0;
  std::string pipeline = "numeric";
  MeasureDiagnostics diagnostics;
};

/// Eigenvalues of a Hermitian correlation matrix, clipped. `excursion`
/// receives the distance by which the raw spectrum left [0, 1].
Eigen::VectorXd correlation_spectrum(const Eigen::MatrixXcd& C, double clip, double* excursion = nullptr);

MeasureValue renyi_entropy(const Eigen::MatrixXcd& C, double n, const SpectralOptions& opt = {});
MeasureValue von_neumann_entropy(const Eigen::MatrixXcd& C, const SpectralOptions& opt = {});

/// C12 is the correlation matrix of the union, X1 sites first.
MeasureValue mutual_information(const Eigen::MatrixXcd& C1, const Eigen::MatrixXcd& C2,
                                const Eigen::MatrixXcd& C12, const SpectralOptions& opt = {});
MeasureValue renyi_mutual_information(const Eigen::MatrixXcd& C1, const Eigen::MatrixXcd& C2,
                                      const Eigen::MatrixXcd& C12, double n,
                                      const SpectralOptions& opt = {});

/// C_Xi = (1/2)[I - (I + G+ G-)^{-1}(G+ + G-)] with G+- = D+-(I - 2C)D+-,
/// D+- = diag(+-i on the first n1 modes, 1 on the rest). Not Hermitian in
/// general but similar to a Hermitian matrix with spectrum in [0, 1].
Eigen::MatrixXcd negativity_transform(const Eigen::MatrixXcd& C12, long n1);

/// Spectrum of C_Xi, sorted, computed through a Hermitian matrix similar to it.
Eigen::VectorXd negativity_spectrum(const Eigen::MatrixXcd& C12, long n1, const SpectralOptions& opt,
                                    MeasureDiagnostics* diag = nullptr);

MeasureValue fermionic_negativity(const Eigen::MatrixXcd& C12, long n1, const SpectralOptions& opt = {});
MeasureValue renyi_negativity(const Eigen::MatrixXcd& C12, long n1, int n, const SpectralOptions& opt = {});

/// Petz-Renyi mutual information (1/(n-1)) Tr ln[C^n D^{1-n} + (I-C)^n (I-D)^{1-n}],
/// D = C1 (+) C2.
MeasureValue petz_renyi_mi(const Eigen::MatrixXcd& C1, const Eigen::MatrixXcd& C2,
                           const Eigen::MatrixXcd& C12, double n, const SpectralOptions& opt = {});

/// Hermitian matrix power U diag(clip(nu)^p) U^dagger.
Eigen::MatrixXcd hermitian_power(const Eigen::MatrixXcd& C, double p, double clip);

}  // namespace ness
