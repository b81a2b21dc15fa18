#include "ness/measures.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>

#include "ness/error.hpp"

namespace ness {

using cdouble = std::complex<double>;

const char* to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::VonNeumann: return "entropy";
    case MeasureKind::Renyi: return "renyi_entropy";
    case MeasureKind::MutualInformation: return "mi";
    case MeasureKind::RenyiMutualInformation: return "rmi";
    case MeasureKind::PetzRenyiMutualInformation: return "prmi";
    case MeasureKind::Negativity: return "negativity";
    case MeasureKind::RenyiNegativity: return "renyi_negativity";
  }
  return "?";
}

namespace {

void require_square(const Eigen::MatrixXcd& C, const char* what) {
  if (C.rows() != C.cols()) throw InvalidArgument(std::string(what) + " must be square");
}

void require_index(double n) {
  if (!(n > 0.0) || n == 1.0 || !std::isfinite(n))
    throw InvalidArgument("Renyi index must be positive and different from 1");
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

double renyi_sum(const Eigen::VectorXd& nu, double n) {
  double s = 0.0;
  for (double x : nu) s += std::log(std::pow(x, n) + std::pow(1.0 - x, n));
  return s / (1.0 - n);
}

double entropy_sum(const Eigen::VectorXd& nu) {
  double s = 0.0;
  for (double x : nu) s += binary_entropy(x);
  return s;
}

struct Spectra {
  Eigen::VectorXd s1, s2, s12;
  double excursion = 0.0;
};

Spectra three_spectra(const Eigen::MatrixXcd& C1, const Eigen::MatrixXcd& C2,
                      const Eigen::MatrixXcd& C12, double clip) {
  require_square(C1, "C1");
  require_square(C2, "C2");
  require_square(C12, "C12");
  if (C12.rows() != C1.rows() + C2.rows()) throw InvalidArgument("dimension mismatch between C1, C2, C12");
  Spectra s;
  double e1 = 0, e2 = 0, e3 = 0;
  s.s1 = correlation_spectrum(C1, clip, &e1);
  s.s2 = correlation_spectrum(C2, clip, &e2);
  s.s12 = correlation_spectrum(C12, clip, &e3);
  s.excursion = std::max({e1, e2, e3});
  return s;
}

}  // namespace

Eigen::VectorXd correlation_spectrum(const Eigen::MatrixXcd& C, double clip, double* excursion) {
  require_square(C, "correlation matrix");
  if (C.rows() == 0) {
    if (excursion) *excursion = 0.0;
    return Eigen::VectorXd();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  Eigen::VectorXd nu = es.eigenvalues();
  double exc = 0.0;
  for (auto& x : nu) {
    exc = std::max({exc, -x, x - 1.0});
    x = std::clamp(x, clip, 1.0 - clip);
  }
  if (excursion) *excursion = exc;
  return nu;
}

MeasureValue renyi_entropy(const Eigen::MatrixXcd& C, double n, const SpectralOptions& /*opt*/) {
  require_index(n);
  MeasureValue v;
  v.kind = MeasureKind::Renyi;
  v.n = n;
  v.value = renyi_sum(correlation_spectrum(C, 0.0, &v.diagnostics.spectrum_excursion), n);
  return v;
}

MeasureValue von_neumann_entropy(const Eigen::MatrixXcd& C, const SpectralOptions& /*opt*/) {
  MeasureValue v;
  v.kind = MeasureKind::VonNeumann;
  v.value = entropy_sum(correlation_spectrum(C, 0.0, &v.diagnostics.spectrum_excursion));
  return v;
}

MeasureValue mutual_information(const Eigen::MatrixXcd& C1, const Eigen::MatrixXcd& C2,
                                const Eigen::MatrixXcd& C12, const SpectralOptions& /*opt*/) {
  const auto s = three_spectra(C1, C2, C12, 0.0);
  MeasureValue v;
  v.kind = MeasureKind::MutualInformation;
  v.value = entropy_sum(s.s1) + entropy_sum(s.s2) - entropy_sum(s.s12);
  v.diagnostics.spectrum_excursion = s.excursion;
  return v;
}

MeasureValue renyi_mutual_information(const Eigen::MatrixXcd& C1, const Eigen::MatrixXcd& C2,
                                      const Eigen::MatrixXcd& C12, double n,
                                      const SpectralOptions& /*opt*/) {
  require_index(n);
  const auto s = three_spectra(C1, C2, C12, 0.0);
  MeasureValue v;
  v.kind = MeasureKind::RenyiMutualInformation;
  v.n = n;
  v.value = renyi_sum(s.s1, n) + renyi_sum(s.s2, n) - renyi_sum(s.s12, n);
  v.diagnostics.spectrum_excursion = s.excursion;
  return v;
}

Eigen::MatrixXcd negativity_transform(const Eigen::MatrixXcd& C12, long n1) {
  require_square(C12, "C12");
  const long N = C12.rows();
  if (n1 < 0 || n1 > N) throw InvalidArgument("X1 block size out of range");
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N, N);
  const Eigen::MatrixXcd G = I - 2.0 * C12;
  Eigen::VectorXcd dp = Eigen::VectorXcd::Ones(N);
  dp.head(n1).setConstant(cdouble(0.0, 1.0));
  const Eigen::VectorXcd dm = dp.conjugate();
  const Eigen::MatrixXcd Gp = dp.asDiagonal() * G * dp.asDiagonal();
  const Eigen::MatrixXcd Gm = dm.asDiagonal() * G * dm.asDiagonal();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(I + Gp * Gm);
  if (!(lu.rcond() > 1e-14)) throw NumericalError("I + G+ G- is singular");
  return 0.5 * (I - lu.solve(Gp + Gm));
}

namespace {

struct NegativitySpectra {
  Eigen::VectorXd xi, nu;
};

// With G = I - 2C and Z = diag(-1 on X1, 1 on X2), Gamma(+-) = D(+-) G D(+-) and
// D(-) = D(+)^{-1}, so C_Xi is similar to (I - A K) / 2 where A = (I + G^2)^{-1}
// and K = G Z + Z G = 2 (-G_11 (+) G_22). A is positive definite, hence the
// spectrum equals that of the Hermitian matrix (I - A^{1/2} K A^{1/2}) / 2.
NegativitySpectra negativity_spectra(const Eigen::MatrixXcd& C12, long n1, MeasureDiagnostics* diag) {
  require_square(C12, "C12");
  const long N = C12.rows();
  if (n1 < 0 || n1 > N) throw InvalidArgument("X1 block size out of range");
  NegativitySpectra r;
  if (N == 0) return r;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C12);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  r.nu = es.eigenvalues();
  Eigen::VectorXd w(N);
  double exc = 0.0;
  for (long i = 0; i < N; ++i) {
    exc = std::max({exc, -r.nu[i], r.nu[i] - 1.0});
    const double g = 1.0 - 2.0 * r.nu[i];
    w[i] = 1.0 / std::sqrt(1.0 + g * g);
    r.nu[i] = std::clamp(r.nu[i], 0.0, 1.0);
  }
  const auto& U = es.eigenvectors();
  const Eigen::MatrixXcd S = U * w.asDiagonal() * U.adjoint();
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(N, N);
  K.topLeftCorner(n1, n1) = 4.0 * C12.topLeftCorner(n1, n1) - 2.0 * Eigen::MatrixXcd::Identity(n1, n1);
  K.bottomRightCorner(N - n1, N - n1) =
      2.0 * Eigen::MatrixXcd::Identity(N - n1, N - n1) - 4.0 * C12.bottomRightCorner(N - n1, N - n1);
  const Eigen::MatrixXcd H = S * K * S;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eh(H, Eigen::EigenvaluesOnly);
  if (eh.info() != Eigen::Success) throw NumericalError("eigensolver failed on C_Xi");
  r.xi.resize(N);
  for (long i = 0; i < N; ++i) {
    const double x = 0.5 * (1.0 - eh.eigenvalues()[i]);
    exc = std::max({exc, -x, x - 1.0});
    // sqrt(x) + sqrt(1 - x) stays finite at the ends, no clipping needed
    r.xi[N - 1 - i] = std::clamp(x, 0.0, 1.0);  // ascending
  }
  if (diag) diag->spectrum_excursion = std::max(diag->spectrum_excursion, exc);
  return r;
}

}  // namespace

Eigen::VectorXd negativity_spectrum(const Eigen::MatrixXcd& C12, long n1, const SpectralOptions& /*opt*/,
                                    MeasureDiagnostics* diag) {
  return negativity_spectra(C12, n1, diag).xi;
}

MeasureValue fermionic_negativity(const Eigen::MatrixXcd& C12, long n1, const SpectralOptions& /*opt*/) {
  MeasureValue v;
  v.kind = MeasureKind::Negativity;
  const auto sp = negativity_spectra(C12, n1, &v.diagnostics);
  double s = 0.0;
  for (double x : sp.xi) s += std::log(std::sqrt(x) + std::sqrt(1.0 - x));
  for (double x : sp.nu) s += 0.5 * std::log(x * x + (1.0 - x) * (1.0 - x));
  v.value = s;
  return v;
}

MeasureValue renyi_negativity(const Eigen::MatrixXcd& C12, long n1, int n, const SpectralOptions& /*opt*/) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("Renyi negativity needs an even index n >= 2");
  MeasureValue v;
  v.kind = MeasureKind::RenyiNegativity;
  v.n = n;
  const auto sp = negativity_spectra(C12, n1, &v.diagnostics);
  const double h = 0.5 * n;
  double s = 0.0;
  for (double x : sp.xi) s += std::log(std::pow(x, h) + std::pow(1.0 - x, h));
  for (double x : sp.nu) s += h * std::log(x * x + (1.0 - x) * (1.0 - x));
  v.value = s;
  return v;
}

Eigen::MatrixXcd hermitian_power(const Eigen::MatrixXcd& C, double p, double clip) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  Eigen::VectorXd w = es.eigenvalues();
  for (auto& x : w) x = std::pow(std::clamp(x, clip, 1.0 - clip), p);
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

// C^p and (I - C)^p from a single eigendecomposition.
struct PowerPair {
  Eigen::MatrixXcd c, comp;
  double excursion = 0.0;
};

PowerPair power_pair(const Eigen::MatrixXcd& C, double p, double clip) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  PowerPair r;
  Eigen::VectorXd w = es.eigenvalues(), wc(w.size());
  for (long i = 0; i < w.size(); ++i) {
    r.excursion = std::max({r.excursion, -w[i], w[i] - 1.0});
    const double x = std::clamp(w[i], clip, 1.0 - clip);
    w[i] = std::pow(x, p);
    wc[i] = std::pow(1.0 - x, p);
  }
  const auto& U = es.eigenvectors();
  r.c = U * w.asDiagonal() * U.adjoint();
  r.comp = U * wc.asDiagonal() * U.adjoint();
  return r;
}

}  // namespace

MeasureValue petz_renyi_mi(const Eigen::MatrixXcd& C1, const Eigen::MatrixXcd& C2,
                           const Eigen::MatrixXcd& C12, double n, const SpectralOptions& opt) {
  require_index(n);
  require_square(C1, "C1");
  require_square(C2, "C2");
  require_square(C12, "C12");
  const long n1 = C1.rows(), n2 = C2.rows(), N = C12.rows();
  if (N != n1 + n2) throw InvalidArgument("dimension mismatch between C1, C2, C12");
  const auto P = power_pair(C12, n, opt.clip);
  const auto Q1 = power_pair(C1, 1.0 - n, opt.clip);
  const auto Q2 = power_pair(C2, 1.0 - n, opt.clip);
  // D = C1 (+) C2 is block diagonal, so the products split by column blocks
  Eigen::MatrixXcd M(N, N);
  M.leftCols(n1).noalias() = P.c.leftCols(n1) * Q1.c;
  M.leftCols(n1).noalias() += P.comp.leftCols(n1) * Q1.comp;
  M.rightCols(n2).noalias() = P.c.rightCols(n2) * Q2.c;
  M.rightCols(n2).noalias() += P.comp.rightCols(n2) * Q2.comp;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed on the PRMI operator");
  cdouble tr = 0.0;
  for (const cdouble& lam : es.eigenvalues()) {
    if (lam.real() <= 0.0 && std::abs(lam.imag()) <= 1e-12 * std::max(1.0, std::abs(lam)))
      throw NumericalError("PRMI operator has a non-positive real eigenvalue");
    tr += std::log(lam);
  }
  const double residue = std::abs(tr.imag()) / std::max(1.0, std::abs(tr.real()));
  if (residue > opt.imag_tol)
    throw NumericalError("PRMI trace has imaginary residue " + std::to_string(residue));
  MeasureValue v;
  v.kind = MeasureKind::PetzRenyiMutualInformation;
  v.n = n;
  v.value = tr.real() / (n - 1.0);
  v.diagnostics.imag_residue = residue;
  v.diagnostics.spectrum_excursion = std::max({P.excursion, Q1.excursion, Q2.excursion});
  return v;
}

}  // namespace ness
