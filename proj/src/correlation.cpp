#include "ness/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "ness/error.hpp"

namespace ness {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

void require_outside(long m, int m0) {
  if (std::abs(m) <= m0)
    throw InvalidArgument("site " + std::to_string(m) + " lies inside the impurity region");
}

long frequency_of(long qmin, long qmax) { return std::max(std::abs(qmin), std::abs(qmax)); }

// Same-side long-range integrands. For j, m in A_R the entry is
// int g_R(k) e^{-i(j-m)k}; for j, m in A_L it is int g_L(k) e^{+i(j-m)k}.
double g_right(double k, const SteadyState& s) {
  if (k < 0) return s.f_tilde(k);
  const double T = s.model.transmission(k);
  return s.f_tilde(k) * T + s.f_tilde(-k) * (1.0 - T);
}

double g_left(double k, const SteadyState& s) {
  if (k < 0) return s.f_tilde(-k);
  const double T = s.model.transmission(k);
  return s.f_tilde(-k) * T + s.f_tilde(k) * (1.0 - T);
}

// Cross-side integrand on (0, pi) for j in A_R, m in A_L, phase e^{-i(j+m)k}.
cdouble h_cross(double k, const SteadyState& s) {
  const auto a = s.model(k);
  return s.f_tilde(k) * std::conj(a.t_L) * a.r_L + s.f_tilde(-k) * a.t_R * std::conj(a.r_R);
}

}  // namespace

const char* to_string(CorrelationMode mode) {
  return mode == CorrelationMode::Exact ? "exact" : "long-range";
}

CorrelationMode parse_correlation_mode(const std::string& s) {
  if (s == "exact") return CorrelationMode::Exact;
  if (s == "long-range" || s == "longrange" || s == "long_range") return CorrelationMode::LongRange;
  throw InvalidArgument("unknown correlation mode '" + s + "'");
}

CorrelationMatrix CorrelationMatrix::sub(const std::vector<long>& positions) const {
  CorrelationMatrix out;
  out.mode = mode;
  const long n = static_cast<long>(positions.size());
  out.matrix.resize(n, n);
  for (long a = 0; a < n; ++a) {
    if (positions[a] < 0 || positions[a] >= size()) throw InvalidArgument("submatrix index out of range");
    out.sites.push_back(sites[positions[a]]);
    for (long b = 0; b < n; ++b) out.matrix(a, b) = matrix(positions[a], positions[b]);
  }
  return out;
}

double CorrelationMatrix::hermiticity_defect() const {
  if (matrix.size() == 0) return 0.0;
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

QuadratureSpec with_breakpoints(const QuadratureSpec& quad, const SteadyState& state) {
  QuadratureSpec q = quad;
  for (double b : state.breakpoints()) q.breakpoints.push_back(b);
  std::sort(q.breakpoints.begin(), q.breakpoints.end());
  q.breakpoints.erase(std::unique(q.breakpoints.begin(), q.breakpoints.end()), q.breakpoints.end());
  return q;
}

cdouble scattering_wavefunction(long m, double k, const ScatteringModel& model,
                                const LatticeParams& params) {
  require_outside(m, params.impurity_halfwidth);
  if (!(k != 0.0 && std::abs(k) < kPi)) throw InvalidArgument("momentum must satisfy 0 < |k| < pi");
  const auto s = model(std::abs(k));
  const cdouble in = std::polar(1.0, k * m);
  const cdouble out = std::polar(1.0, -k * m);
  if (k > 0) return m < 0 ? in + s.r_L * out : s.t_L * in;
  return m < 0 ? s.t_R * in : in + s.r_R * out;
}

Eigen::VectorXcd fourier_table(const std::function<cdouble(double)>& g, double a, double b,
                               long qmin, long qmax, const QuadratureSpec& quad) {
  if (qmax < qmin) throw InvalidArgument("empty Fourier index range");
  const long n = qmax - qmin + 1;
  auto integrand = [&](double k) {
    Eigen::VectorXcd v(n);
    const cdouble step = std::polar(1.0, -k);
    cdouble ph = std::polar(1.0, -k * qmin);
    const cdouble gk = g(k) / kTwoPi;
    for (long i = 0; i < n; ++i) {
      v[i] = gk * ph;
      ph *= step;
    }
    return v;
  };
  return integrate<Eigen::VectorXcd>(integrand, a, b, quad, frequency_of(qmin, qmax)).value;
}

cdouble correlation_entry_exact(long j, long m, const SteadyState& state, const QuadratureSpec& quad) {
  const int m0 = state.lattice.impurity_halfwidth;
  require_outside(j, m0);
  require_outside(m, m0);
  const auto q = with_breakpoints(quad, state);
  auto f = [&](double k) {
    return state.f_tilde(k) * std::conj(scattering_wavefunction(j, k, state.model, state.lattice)) *
           scattering_wavefunction(m, k, state.model, state.lattice) / kTwoPi;
  };
  return integrate<cdouble>(f, -kPi, kPi, q, std::abs(j) + std::abs(m)).value;
}

cdouble correlation_entry_longrange(long j, long m, const SteadyState& state,
                                    const QuadratureSpec& quad) {
  const int m0 = state.lattice.impurity_halfwidth;
  require_outside(j, m0);
  require_outside(m, m0);
  const auto q = with_breakpoints(quad, state);
  if (j > 0 && m > 0) {
    return fourier_table([&](double k) { return cdouble(g_right(k, state)); }, -kPi, kPi, j - m, j - m, q)[0];
  }
  if (j < 0 && m < 0) {
    return fourier_table([&](double k) { return cdouble(g_left(k, state)); }, -kPi, kPi, m - j, m - j, q)[0];
  }
  if (j > 0) {
    return fourier_table([&](double k) { return h_cross(k, state); }, 0.0, kPi, j + m, j + m, q)[0];
  }
  return std::conj(
      fourier_table([&](double k) { return h_cross(k, state); }, 0.0, kPi, j + m, j + m, q)[0]);
}

namespace {

Eigen::MatrixXcd build_exact(const std::vector<long>& sites, const SteadyState& state,
                             const QuadratureSpec& q) {
  const long n = static_cast<long>(sites.size());
  const long npairs = n * (n + 1) / 2;
  long freq = 0;
  for (long s : sites) freq = std::max(freq, 2 * std::abs(s));
  auto integrand = [&](double k) {
    Eigen::VectorXcd psi(n);
    for (long a = 0; a < n; ++a) psi[a] = scattering_wavefunction(sites[a], k, state.model, state.lattice);
    const double w = state.f_tilde(k) / kTwoPi;
    Eigen::VectorXcd v(npairs);
    long idx = 0;
    for (long a = 0; a < n; ++a)
      for (long b = a; b < n; ++b) v[idx++] = w * std::conj(psi[a]) * psi[b];
    return v;
  };
  const Eigen::VectorXcd v = integrate<Eigen::VectorXcd>(integrand, -kPi, kPi, q, freq).value;
  Eigen::MatrixXcd M(n, n);
  long idx = 0;
  for (long a = 0; a < n; ++a)
    for (long b = a; b < n; ++b) {
      M(a, b) = v[idx];
      M(b, a) = std::conj(v[idx]);
      ++idx;
    }
  for (long a = 0; a < n; ++a) M(a, a) = M(a, a).real();
  return M;
}

Eigen::MatrixXcd build_longrange(const std::vector<long>& sites, const SteadyState& state,
                                 const QuadratureSpec& q) {
  const long n = static_cast<long>(sites.size());
  long lmin = 0, lmax = 0, rmin = 0, rmax = 0;
  bool has_l = false, has_r = false;
  for (long s : sites) {
    if (s < 0) {
      lmin = has_l ? std::min(lmin, s) : s;
      lmax = has_l ? std::max(lmax, s) : s;
      has_l = true;
    } else {
      rmin = has_r ? std::min(rmin, s) : s;
      rmax = has_r ? std::max(rmax, s) : s;
      has_r = true;
    }
  }
  // Coefficient tables, nonnegative differences only (the integrands are real).
  Eigen::VectorXcd tr, tl, tx;
  if (has_r)
    tr = fourier_table([&](double k) { return cdouble(g_right(k, state)); }, -kPi, kPi, 0, rmax - rmin, q);
  if (has_l)
    tl = fourier_table([&](double k) { return cdouble(g_left(k, state)); }, -kPi, kPi, 0, lmax - lmin, q);
  const long xmin = rmin + lmin;
  if (has_l && has_r)
    tx = fourier_table([&](double k) { return h_cross(k, state); }, 0.0, kPi, xmin, rmax + lmax, q);

  auto toeplitz = [](const Eigen::VectorXcd& t, long d) { return d >= 0 ? t[d] : std::conj(t[-d]); };
  Eigen::MatrixXcd M(n, n);
  for (long a = 0; a < n; ++a) {
    for (long b = 0; b < n; ++b) {
      const long j = sites[a], m = sites[b];
      if (j > 0 && m > 0) M(a, b) = toeplitz(tr, j - m);
      else if (j < 0 && m < 0) M(a, b) = toeplitz(tl, m - j);
      else if (j > 0) M(a, b) = tx[j + m - xmin];
      else M(a, b) = std::conj(tx[j + m - xmin]);
    }
    M(a, a) = M(a, a).real();
  }
  return M;
}

}  // namespace

CorrelationMatrix build_restricted_matrix(const std::vector<long>& sites, CorrelationMode mode,
                                          const SteadyState& state, const QuadratureSpec& quad) {
  if (sites.empty()) throw InvalidArgument("site set is empty");
  for (long s : sites) require_outside(s, state.lattice.impurity_halfwidth);
  const auto q = with_breakpoints(quad, state);
  CorrelationMatrix out;
  out.sites = sites;
  out.mode = mode;
  out.matrix = mode == CorrelationMode::Exact ? build_exact(sites, state, q)
                                              : build_longrange(sites, state, q);
  return out;
}

Eigen::Matrix2cd block_symbol_phi(double k, const SteadyState& state) {
  if (!(k != 0.0 && std::abs(k) < kPi)) throw InvalidArgument("symbol defined for 0 < |k| < pi");
  Eigen::Matrix2cd P = Eigen::Matrix2cd::Zero();
  const double fp = state.f_tilde(k), fm = state.f_tilde(-k);
  if (k < 0) {
    P(0, 0) = fm;
    P(1, 1) = fp;
    return P;
  }
  const auto a = state.model(k);
  const double T = a.transmission(), R = a.reflection();
  P(0, 0) = fm * T + fp * R;
  P(1, 1) = fp * T + fm * R;
  P(0, 1) = (fp - fm) * a.t_L * std::conj(a.r_L);
  P(1, 0) = std::conj(P(0, 1));
  return P;
}

Eigen::Matrix2cd block_symbol_phi_gamma(double k, double gamma, int n, const SteadyState& state) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("n must be an even integer >= 2");
  const double th = 2.0 * kPi * gamma / n;
  Eigen::Matrix2cd D = Eigen::Matrix2cd::Zero();
  D(0, 0) = 1.0 - std::polar(1.0, th);
  D(1, 1) = 1.0 + std::polar(1.0, -th);
  return D * block_symbol_phi(k, state);
}

BlockSymbol phi_symbol(const SteadyState& state) {
  return {[state](double k) { return block_symbol_phi(k, state); }, state.breakpoints(), "Phi"};
}

BlockSymbol phi_gamma_symbol(const SteadyState& state, double gamma, int n) {
  return {[state, gamma, n](double k) { return block_symbol_phi_gamma(k, gamma, n, state); },
          state.breakpoints(), "Phi_gamma"};
}

BlockSymbol phi_cross_symbol(const SteadyState& state) {
  return {[state](double k) {
            Eigen::Matrix2cd P = block_symbol_phi(k, state);
            P(0, 1) = P(1, 0) = 0.0;
            return P;
          },
          state.breakpoints(), "Phi_cross"};
}

Eigen::MatrixXcd block_toeplitz(const BlockSymbol& symbol, long ell, const QuadratureSpec& quad) {
  if (ell < 1) throw InvalidArgument("block-Toeplitz size must be >= 1");
  QuadratureSpec q = quad;
  q.breakpoints.insert(q.breakpoints.end(), symbol.breakpoints.begin(), symbol.breakpoints.end());
  const long nq = 2 * ell - 1;
  auto integrand = [&](double k) {
    const Eigen::Matrix2cd S = symbol(k) / kTwoPi;
    Eigen::VectorXcd v(4 * nq);
    const cdouble step = std::polar(1.0, -k);
    cdouble ph = std::polar(1.0, k * (ell - 1));
    for (long i = 0; i < nq; ++i) {
      v.segment<4>(4 * i) << S(0, 0) * ph, S(0, 1) * ph, S(1, 0) * ph, S(1, 1) * ph;
      ph *= step;
    }
    return v;
  };
  const Eigen::VectorXcd c = integrate<Eigen::VectorXcd>(integrand, -kPi, kPi, q, ell).value;
  Eigen::MatrixXcd M(2 * ell, 2 * ell);
  for (long p = 0; p < ell; ++p)
    for (long r = 0; r < ell; ++r) {
      const long i = (p - r) + (ell - 1);
      M(2 * p, 2 * r) = c[4 * i];
      M(2 * p, 2 * r + 1) = c[4 * i + 1];
      M(2 * p + 1, 2 * r) = c[4 * i + 2];
      M(2 * p + 1, 2 * r + 1) = c[4 * i + 3];
    }
  return M;
}

}  // namespace ness
