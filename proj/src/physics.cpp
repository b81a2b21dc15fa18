#include "ness/physics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ness/error.hpp"

namespace ness {

void LatticeParams::validate() const {
  if (!(hopping > 0.0) || !std::isfinite(hopping))
    throw InvalidArgument("hopping must be positive and finite");
  if (impurity_halfwidth < 0) throw InvalidArgument("impurity half-width must be >= 0");
}

void ReservoirPair::validate() const {
  if (!(T_L >= 0.0) || !(T_R >= 0.0)) throw InvalidArgument("reservoir temperatures must be >= 0");
  if (!std::isfinite(mu_L) || !std::isfinite(mu_R) || !std::isfinite(T_L) || !std::isfinite(T_R))
    throw InvalidArgument("reservoir parameters must be finite");
}

namespace {

double invariant_violation(const ScatteringAmplitudes& s) {
  double v = 0.0;
  v = std::max(v, std::abs(std::norm(s.r_L) + std::norm(s.t_L) - 1.0));
  v = std::max(v, std::abs(std::norm(s.r_R) + std::norm(s.t_R) - 1.0));
  v = std::max(v, std::abs(std::abs(s.r_L) - std::abs(s.r_R)));
  v = std::max(v, std::abs(std::abs(s.t_L) - std::abs(s.t_R)));
  v = std::max(v, std::abs(std::conj(s.t_R) * s.r_R + s.t_L * std::conj(s.r_L)));
  return v;
}

}  // namespace

ScatteringModel::ScatteringModel(Evaluator evaluator, std::string name, double tolerance)
    : evaluator_(std::move(evaluator)), name_(std::move(name)) {
  if (!evaluator_) throw InvalidArgument("scattering model needs an evaluator");
  const double v = max_unitarity_violation(1000);
  if (!(v <= tolerance)) {
    std::ostringstream os;
    os << "scattering model '" << name_ << "' violates unitarity by " << v;
    throw InvalidArgument(os.str());
  }
}

double ScatteringModel::max_unitarity_violation(int samples) const {
  double v = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double k = kPi * (i + 0.5) / samples;
    const double vi = invariant_violation(evaluator_(k));
    if (!std::isfinite(vi)) return std::numeric_limits<double>::infinity();
    v = std::max(v, vi);
  }
  return v;
}

ScatteringModel ScatteringModel::mirrored() const {
  auto inner = evaluator_;
  return ScatteringModel(
      [inner](double k) {
        const auto s = inner(k);
        return ScatteringAmplitudes{s.r_R, s.t_R, s.r_L, s.t_L};
      },
      name_ + "(mirrored)");
}

ScatteringModel resonant_level(double eps0, const LatticeParams& params) {
  params.validate();
  if (!std::isfinite(eps0)) throw InvalidArgument("eps0 must be finite");
  const double a = eps0 / (2.0 * params.hopping);
  return ScatteringModel(
      [a](double k) {
        const double s = std::sin(std::abs(k));
        cdouble t = (a == 0.0) ? cdouble(1.0) : s / cdouble(s, a);
        cdouble r = t - 1.0;
        return ScatteringAmplitudes{r, t, r, t};
      },
      "resonant-level");
}

ScatteringModel transparent_impurity() {
  return ScatteringModel(
      [](double) { return ScatteringAmplitudes{0.0, 1.0, 0.0, 1.0}; }, "transparent");
}

namespace {

// Nearest unitary matrix: S (S^dagger S)^{-1/2}.
ScatteringAmplitudes polar_unitary(const ScatteringAmplitudes& a) {
  Eigen::Matrix2cd S;
  S << a.r_L, a.t_R, a.t_L, a.r_R;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(S.adjoint() * S);
  const Eigen::Vector2d w = es.eigenvalues();
  if (!(w.minCoeff() > 0.0)) throw NumericalError("interpolated S-matrix is singular");
  const Eigen::Matrix2cd inv_sqrt =
      es.eigenvectors() * w.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  const Eigen::Matrix2cd U = S * inv_sqrt;
  return {U(0, 0), U(1, 0), U(1, 1), U(0, 1)};
}

}  // namespace

ScatteringModel tabulated_scattering(std::vector<double> k, std::vector<ScatteringAmplitudes> rows,
                                     std::string name) {
  if (k.size() < 2 || k.size() != rows.size())
    throw InvalidArgument("tabulated S(k) needs at least two rows");
  for (size_t i = 0; i < k.size(); ++i) {
    if (!(k[i] > 0.0 && k[i] < kPi)) throw InvalidArgument("tabulated momenta must lie in (0, pi)");
    if (i > 0 && !(k[i] > k[i - 1])) throw InvalidArgument("tabulated momenta must increase");
  }
  auto kk = std::make_shared<const std::vector<double>>(std::move(k));
  auto rr = std::make_shared<const std::vector<ScatteringAmplitudes>>(std::move(rows));
  auto eval = [kk, rr](double q) {
    q = std::abs(q);
    const auto& K = *kk;
    const auto& R = *rr;
    // constant extrapolation outside the table
    if (q <= K.front()) return polar_unitary(R.front());
    if (q >= K.back()) return polar_unitary(R.back());
    const size_t hi = std::upper_bound(K.begin(), K.end(), q) - K.begin();
    const size_t lo = hi - 1;
    const double w = (q - K[lo]) / (K[hi] - K[lo]);
    auto mix = [w](cdouble x, cdouble y) { return (1.0 - w) * x + w * y; };
    ScatteringAmplitudes s{mix(R[lo].r_L, R[hi].r_L), mix(R[lo].t_L, R[hi].t_L),
                           mix(R[lo].r_R, R[hi].r_R), mix(R[lo].t_R, R[hi].t_R)};
    return polar_unitary(s);
  };
  return ScatteringModel(eval, std::move(name));
}

ScatteringModel load_tabulated_scattering(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open scattering table '" + path + "'");
  std::vector<double> ks;
  std::vector<ScatteringAmplitudes> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double v[9];
    int got = 0;
    while (got < 9 && (ls >> v[got])) ++got;
    if (got == 0 && ks.empty()) continue;  // header
    if (got != 9) {
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected 9 numeric columns");
    }
    ks.push_back(v[0]);
    rows.push_back({cdouble(v[3], v[4]), cdouble(v[1], v[2]), cdouble(v[7], v[8]), cdouble(v[5], v[6])});
  }
  return tabulated_scattering(std::move(ks), std::move(rows), path);
}

double dispersion(double k, const LatticeParams& params) {
  return -2.0 * params.hopping * std::cos(k);
}

double fermi_dirac(double energy, double mu, double T) {
  if (T < 0.0) throw InvalidArgument("temperature must be >= 0");
  if (T == 0.0) {
    if (energy < mu) return 1.0;
    if (energy > mu) return 0.0;
    return 0.5;
  }
  const double x = (energy - mu) / T;
  if (x > 0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (std::exp(x) + 1.0);
}

double occupation_tilde(double k, const ReservoirPair& res, const LatticeParams& params) {
  if (k == 0.0) throw InvalidArgument("occupation undefined at k = 0");
  const double e = dispersion(k, params);
  return k > 0.0 ? fermi_dirac(e, res.mu_L, res.T_L) : fermi_dirac(e, res.mu_R, res.T_R);
}

double fermi_momentum(double mu, const LatticeParams& params) {
  if (!(std::abs(mu) < 2.0 * params.hopping))
    throw InvalidArgument("chemical potential outside the band");
  return std::acos(-mu / (2.0 * params.hopping));
}

void SubsystemPair::validate() const {
  if (d_L < 0 || d_R < 0) throw InvalidArgument("distances must be >= 0");
  if (ell_L < 1 || ell_R < 1) throw InvalidArgument("interval lengths must be >= 1");
  if (m0 < 0) throw InvalidArgument("impurity half-width must be >= 0");
}

std::vector<long> SubsystemPair::left_sites() const {
  std::vector<long> s;
  for (long m = -m0 - d_L - ell_L; m <= -m0 - d_L - 1; ++m) s.push_back(m);
  return s;
}

std::vector<long> SubsystemPair::right_sites() const {
  std::vector<long> s;
  for (long m = m0 + d_R + 1; m <= m0 + d_R + ell_R; ++m) s.push_back(m);
  return s;
}

std::vector<long> SubsystemPair::union_sites() const {
  auto s = left_sites();
  auto r = right_sites();
  s.insert(s.end(), r.begin(), r.end());
  return s;
}

std::vector<long> SubsystemPair::mirror_sites() const {
  std::vector<long> s;
  const long lo = m0 + std::max(d_L, d_R) + 1;
  const long hi = m0 + std::min(d_L + ell_L, d_R + ell_R);
  for (long x = lo; x <= hi; ++x) {
    s.push_back(-x);
    s.push_back(x);
  }
  return s;
}

long SubsystemPair::delta_ell(Side side) const {
  return (side == Side::Left ? ell_L : ell_R) - mirror_overlap_length(*this);
}

long mirror_overlap_length(const SubsystemPair& g) {
  g.validate();
  return std::max(std::min(g.d_L + g.ell_L, g.d_R + g.ell_R) - std::max(g.d_L, g.d_R), 0L);
}

double SteadyState::f_L(double k) const {
  return fermi_dirac(dispersion(k, lattice), reservoirs.mu_L, reservoirs.T_L);
}

double SteadyState::f_R(double k) const {
  return fermi_dirac(dispersion(k, lattice), reservoirs.mu_R, reservoirs.T_R);
}

std::vector<double> SteadyState::breakpoints() const {
  std::vector<double> b{0.0};
  auto add = [&](double mu, double T) {
    if (T == 0.0 && std::abs(mu) < 2.0 * lattice.hopping) {
      const double kf = fermi_momentum(mu, lattice);
      b.push_back(kf);
      b.push_back(-kf);
    }
  };
  add(reservoirs.mu_L, reservoirs.T_L);
  add(reservoirs.mu_R, reservoirs.T_R);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

SteadyState SteadyState::mirrored() const {
  return {model.mirrored(), reservoirs.swapped(), lattice};
}

}  // namespace ness
