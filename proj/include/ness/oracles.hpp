#pragma once

// Independent checks on the asymptotic machinery: correlation-matrix moments,
// their decomposition over mirror-image subsystems, the Szego-Widom density of
// block-Toeplitz determinants, a product generalization of it, and the
// algebraic identity between the gamma-product X_n and the closed form Y_n.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ness/asymptotics.hpp"
#include "ness/correlation.hpp"

namespace ness {

/// Sum of nu^p over the eigenvalues of a Hermitian C.
double moment_trace(const Eigen::MatrixXcd& C, int p);

/// Leading-order Tr[(C_{A_side})^p] for an interval of length ell.
double single_interval_moment_asymptotic(const BiasContext& ctx, Side side, int p, long ell);

struct MomentReport {
  int p = 1;
  double numeric = 0.0;      // Tr[(C_A)^p]
  double prediction = 0.0;   // weighted interval moments + mirror moment
  double relative_error = 0.0;
  SubsystemPair geom;
};

/// Compares Tr[(C_A)^p] with (dL/lL) Tr[C_L^p] + (dR/lR) Tr[C_R^p] + Tr[C_mirror^p],
/// all evaluated numerically.
MomentReport moment_decomposition_check(const BiasContext& ctx, const SubsystemPair& geom, int p,
                                        CorrelationMode mode = CorrelationMode::LongRange);

using SymbolTransform = std::function<Eigen::Matrix2cd(const Eigen::Matrix2cd&)>;

/// int dk/2pi ln det transform(symbol(k)), the log taken eigenvalue by
/// eigenvalue on the principal branch. Throws NumericalError when an
/// eigenvalue of the transformed symbol comes within 1e-12 of zero.
std::complex<double> szego_widom_density(const BlockSymbol& symbol, const SymbolTransform& transform,
                                         const QuadratureSpec& quad);

/// Sum of principal logarithms of the eigenvalues of a square matrix.
std::complex<double> log_det_eigen(const Eigen::MatrixXcd& M);

struct SymbolPair {
  BlockSymbol psi;
  BlockSymbol upsilon;
};

struct GeneralizedSWPoint {
  long ell = 0;
  std::complex<double> exact;       // ln det[I + prod T[psi] T[upsilon]^{-1}]
  std::complex<double> prediction;  // ell * int dk/2pi ln det[I + prod psi upsilon^{-1}]
  double relative_error = 0.0;
  double min_rcond = 0.0;
};

struct GeneralizedSWReport {
  std::vector<GeneralizedSWPoint> points;
  bool decreasing() const;
};

/// Finite-ell log-determinants against the symbol integral. Throws
/// NumericalError when some T[upsilon] has reciprocal condition below 1e-12.
GeneralizedSWReport generalized_sw_check(const std::vector<SymbolPair>& pairs,
                                         const std::vector<long>& ell_list, const QuadratureSpec& quad);

/// X_n as the direct product over gamma in complex arithmetic.
std::complex<double> negativity_product_x(int n, double fL, double fR, double T);

/// Y_n at complex T, with a complex square root (branch-free for even n).
std::complex<double> negativity_polynomial_complex(int n, double fL, double fR, std::complex<double> T);

/// Roots T_gamma of X_n in T; factors whose T coefficient vanishes are skipped.
std::vector<std::complex<double>> negativity_roots(int n, double fL, double fR);

struct IdentityReport {
  int n = 2;
  long samples = 0;
  double max_difference = 0.0;   // max |X_n - Y_n|
  double max_root_residual = 0.0;  // max |Y_n(T_gamma)| / max(1, largest term)
  double max_imag_y = 0.0;       // imaginary residue of the real sqrt form
};

/// Single-point identity check.
IdentityReport xn_yn_identity(int n, double fL, double fR, double T);

/// Random triples in (0, 1)^3 from a seeded generator.
IdentityReport xn_yn_fuzz(int n, long samples, std::uint64_t seed);

}  // namespace ness
