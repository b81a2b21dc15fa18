#include "ness/oracles.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

#include "ness/error.hpp"

namespace ness {

double moment_trace(const Eigen::MatrixXcd& C, int p) {
  if (p < 1) throw InvalidArgument("moment order must be >= 1");
  if (C.rows() != C.cols()) throw InvalidArgument("matrix must be square");
  if (C.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double x : es.eigenvalues()) s += std::pow(x, p);
  return s;
}

double single_interval_moment_asymptotic(const BiasContext& ctx, Side side, int p, long ell) {
  if (p < 1) throw InvalidArgument("moment order must be >= 1");
  if (ell < 1) throw InvalidArgument("interval length must be >= 1");
  const auto q = with_breakpoints(ctx.quad, ctx.state);
  const double pp = p;
  auto f = [&](double k) {
    const double fL = ctx.state.f_L(k), fR = ctx.state.f_R(k);
    const double T = ctx.state.model.transmission(k), R = 1.0 - T;
    const double a = side == Side::Left ? fL : fR;
    const double b = side == Side::Left ? R * fL + T * fR : T * fL + R * fR;
    return (std::pow(a, pp) + std::pow(b, pp)) / (2.0 * kPi);
  };
  return ell * integrate<double>(f, 0.0, kPi, q).value;
}

MomentReport moment_decomposition_check(const BiasContext& ctx, const SubsystemPair& geom, int p,
                                        CorrelationMode mode) {
  geom.validate();
  if (geom.m0 != ctx.state.lattice.impurity_halfwidth)
    throw InvalidArgument("geometry and lattice disagree on the impurity size");
  const auto CA = build_restricted_matrix(geom.union_sites(), mode, ctx.state, ctx.quad);
  std::vector<long> left_pos(geom.ell_L), right_pos(geom.ell_R);
  for (long i = 0; i < geom.ell_L; ++i) left_pos[i] = i;
  for (long i = 0; i < geom.ell_R; ++i) right_pos[i] = geom.ell_L + i;
  const double tA = moment_trace(CA.matrix, p);
  const double tL = moment_trace(CA.sub(left_pos).matrix, p);
  const double tR = moment_trace(CA.sub(right_pos).matrix, p);
  double tM = 0.0;
  const auto ms = geom.mirror_sites();
  if (!ms.empty()) tM = moment_trace(build_restricted_matrix(ms, mode, ctx.state, ctx.quad).matrix, p);
  MomentReport r;
  r.p = p;
  r.geom = geom;
  r.numeric = tA;
  r.prediction = double(geom.delta_ell(Side::Left)) / geom.ell_L * tL +
                 double(geom.delta_ell(Side::Right)) / geom.ell_R * tR + tM;
  r.relative_error = std::abs(r.numeric - r.prediction) / std::max(std::abs(r.numeric), 1e-300);
  return r;
}

namespace {

std::complex<double> log_det_2x2(const Eigen::Matrix2cd& M) {
  const cdouble half_tr = 0.5 * M.trace();
  const cdouble disc = std::sqrt(half_tr * half_tr - M.determinant());
  const cdouble l1 = half_tr + disc, l2 = half_tr - disc;
  if (std::abs(l1) < 1e-12 || std::abs(l2) < 1e-12)
    throw NumericalError("transformed symbol is singular on the circle");
  return std::log(l1) + std::log(l2);
}

QuadratureSpec merged(const QuadratureSpec& quad, const std::vector<double>& extra) {
  QuadratureSpec q = quad;
  q.breakpoints.insert(q.breakpoints.end(), extra.begin(), extra.end());
  return q;
}

}  // namespace

std::complex<double> szego_widom_density(const BlockSymbol& symbol, const SymbolTransform& transform,
                                         const QuadratureSpec& quad) {
  const auto q = merged(quad, symbol.breakpoints);
  auto f = [&](double k) { return log_det_2x2(transform(symbol(k))) / (2.0 * kPi); };
  return integrate<cdouble>(f, -kPi, kPi, q).value;
}

std::complex<double> log_det_eigen(const Eigen::MatrixXcd& M) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  cdouble s = 0.0;
  for (const cdouble& l : es.eigenvalues()) {
    if (l == 0.0) throw NumericalError("matrix is singular");
    s += std::log(l);
  }
  return s;
}

bool GeneralizedSWReport::decreasing() const {
  for (size_t i = 1; i < points.size(); ++i)
    if (!(points[i].relative_error < points[i - 1].relative_error)) return false;
  return !points.empty();
}

GeneralizedSWReport generalized_sw_check(const std::vector<SymbolPair>& pairs,
                                         const std::vector<long>& ell_list, const QuadratureSpec& quad) {
  if (pairs.empty()) throw InvalidArgument("need at least one symbol pair");
  std::vector<double> bps;
  for (const auto& pr : pairs) {
    bps.insert(bps.end(), pr.psi.breakpoints.begin(), pr.psi.breakpoints.end());
    bps.insert(bps.end(), pr.upsilon.breakpoints.begin(), pr.upsilon.breakpoints.end());
  }
  const auto q = merged(quad, bps);
  auto symbol_product = [&](double k) {
    Eigen::Matrix2cd P = Eigen::Matrix2cd::Identity();
    for (const auto& pr : pairs) {
      const Eigen::Matrix2cd U = pr.upsilon(k);
      if (!(std::abs(U.determinant()) > 1e-14))
        throw NumericalError("symbol '" + pr.upsilon.name + "' is singular on the circle");
      P = P * pr.psi(k) * U.inverse();
    }
    return Eigen::Matrix2cd(Eigen::Matrix2cd::Identity() + P);
  };
  const cdouble density =
      integrate<cdouble>([&](double k) { return log_det_2x2(symbol_product(k)) / (2.0 * kPi); }, -kPi, kPi, q)
          .value;

  GeneralizedSWReport rep;
  for (long ell : ell_list) {
    const long N = 2 * ell;
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(N, N);
    double min_rcond = 1.0;
    for (const auto& pr : pairs) {
      const Eigen::MatrixXcd A = block_toeplitz(pr.psi, ell, q);
      const Eigen::MatrixXcd B = block_toeplitz(pr.upsilon, ell, q);
      Eigen::PartialPivLU<Eigen::MatrixXcd> lu(B.transpose());
      const double rc = lu.rcond();
      min_rcond = std::min(min_rcond, rc);
      if (!(rc >= 1e-12))
        throw NumericalError("block-Toeplitz matrix of '" + pr.upsilon.name + "' is ill-conditioned");
      // P A B^{-1} = ((B^T)^{-1} (P A)^T)^T
      const Eigen::MatrixXcd PA = P * A;
      P = lu.solve(PA.transpose()).transpose();
    }
    GeneralizedSWPoint pt;
    pt.ell = ell;
    pt.exact = log_det_eigen(Eigen::MatrixXcd::Identity(N, N) + P);
    pt.prediction = double(ell) * density;
    pt.relative_error = std::abs(pt.exact - pt.prediction) / std::max(std::abs(pt.prediction), 1e-300);
    pt.min_rcond = min_rcond;
    rep.points.push_back(pt);
  }
  return rep;
}

std::complex<double> negativity_product_x(int n, double fL, double fR, double T) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("n must be an even integer >= 2");
  const double R = 1.0 - T;
  cdouble x = 1.0;
  for (int j = 0; j < n; ++j) {
    const double gamma = -0.5 * (n - 1) + j;
    const double th = 2.0 * kPi * gamma / n;
    const cdouble a = 1.0 - std::polar(1.0, th);
    const cdouble b = 1.0 + std::polar(1.0, -th);
    x *= 1.0 - a * (R * fL + T * fR) - b * (T * fL + R * fR) + a * b * fL * fR;
  }
  return x;
}

namespace {

// Y_n at complex T together with the magnitude of its largest term.
std::pair<cdouble, double> y_terms(int n, double fL, double fR, cdouble T) {
  const cdouble R = 1.0 - T;
  const double p = fL * fR;
  const double h = 0.5 * (1.0 - fL - fR + 2.0 * p);
  const double c = 0.5 * (1.0 - fL - fR);
  const cdouble s = std::sqrt(h * h + T * R * (fL - fR) * (fL - fR));
  const cdouble t[4] = {std::pow(T * fL + R * fR - p, n), std::pow(R * fL + T * fR - p, n),
                        std::pow(s + c, n), std::pow(s - c, n)};
  double scale = 0.0;
  for (const auto& x : t) scale = std::max(scale, std::abs(x));
  return {t[0] + t[1] + t[2] + t[3], scale};
}

}  // namespace

std::complex<double> negativity_polynomial_complex(int n, double fL, double fR, std::complex<double> T) {
  return y_terms(n, fL, fR, T).first;
}

std::vector<std::complex<double>> negativity_roots(int n, double fL, double fR) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("n must be an even integer >= 2");
  if (fL == fR) throw InvalidArgument("roots need fL != fR");
  std::vector<cdouble> roots;
  for (int j = 0; j < n; ++j) {
    const double gamma = -0.5 * (n - 1) + j;
    const double th = 2.0 * kPi * gamma / n;
    const double cs = std::cos(th);
    if (std::abs(cs) < 1e-12) continue;  // root at infinity
    const cdouble a = 1.0 - std::polar(1.0, th);
    const cdouble b = 1.0 + std::polar(1.0, -th);
    roots.push_back((1.0 - a * fL) * (1.0 - b * fR) / (2.0 * cs * (fL - fR)));
  }
  return roots;
}

IdentityReport xn_yn_identity(int n, double fL, double fR, double T) {
  IdentityReport r;
  r.n = n;
  r.samples = 1;
  const cdouble x = negativity_product_x(n, fL, fR, T);
  const double y = negativity_polynomial(n, fL, fR, T);
  r.max_difference = std::abs(x - y);
  r.max_imag_y = std::abs(negativity_polynomial_complex(n, fL, fR, T).imag());
  if (fL != fR) {
    // residual relative to the largest term, which grows like |T_gamma|^n
    for (const cdouble& t : negativity_roots(n, fL, fR)) {
      const auto [y, scale] = y_terms(n, fL, fR, t);
      r.max_root_residual = std::max(r.max_root_residual, std::abs(y) / std::max(1.0, scale));
    }
  }
  return r;
}

IdentityReport xn_yn_fuzz(int n, long samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("need at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  IdentityReport agg;
  agg.n = n;
  for (long i = 0; i < samples; ++i) {
    double fL = u(rng), fR = u(rng), T = u(rng);
    // stay inside the open unit interval
    fL = std::clamp(fL, 1e-9, 1.0 - 1e-9);
    fR = std::clamp(fR, 1e-9, 1.0 - 1e-9);
    T = std::clamp(T, 1e-9, 1.0 - 1e-9);
    const auto r = xn_yn_identity(n, fL, fR, T);
    agg.max_difference = std::max(agg.max_difference, r.max_difference);
    agg.max_root_residual = std::max(agg.max_root_residual, r.max_root_residual);
    agg.max_imag_y = std::max(agg.max_imag_y, r.max_imag_y);
  }
  agg.samples = samples;
  return agg;
}

}  // namespace ness
