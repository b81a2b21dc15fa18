#pragma once

// Lattice, reservoirs, impurity scattering and subsystem geometry.
// All energies and temperatures are in units of the hopping amplitude.

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace ness {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct LatticeParams {
  double hopping = 1.0;        // eta > 0
  int impurity_halfwidth = 0;  // m0 >= 0, impurity occupies sites -m0..m0

  void validate() const;
};

struct ReservoirPair {
  double mu_L = 0.0;
  double T_L = 0.0;
  double mu_R = 0.0;
  double T_R = 0.0;

  void validate() const;
  ReservoirPair swapped() const { return {mu_R, T_R, mu_L, T_L}; }
};

/// Scattering amplitudes at one momentum 0 < k < pi. The S-matrix is
///   S = [[r_L, t_R], [t_L, r_R]].
struct ScatteringAmplitudes {
  cdouble r_L;
  cdouble t_L;
  cdouble r_R;
  cdouble t_R;

  double transmission() const { return std::norm(t_L); }
  double reflection() const { return std::norm(r_L); }
};

/// Momentum-resolved 2x2 unitary scattering matrix of a noninteracting,
/// number-conserving impurity. The evaluator is validated on construction by
/// sampling 1000 momenta in (0, pi).
class ScatteringModel {
public:
  using Evaluator = std::function<ScatteringAmplitudes(double)>;

  ScatteringModel(Evaluator evaluator, std::string name, double tolerance = 1e-12);

  ScatteringAmplitudes operator()(double k) const { return evaluator_(k); }
  double transmission(double k) const { return evaluator_(k).transmission(); }
  double reflection(double k) const { return evaluator_(k).reflection(); }
  const std::string& name() const noexcept { return name_; }

  /// Maximum violation of the unitarity invariants over `samples` uniform momenta.
  double max_unitarity_violation(int samples = 1000) const;

  /// Mirror image of the impurity: left and right roles exchanged.
  ScatteringModel mirrored() const;

private:
  Evaluator evaluator_;
  std::string name_;
};

/// Single-site impurity with on-site energy eps0:
/// t = sin k / (sin k + i eps0/(2 eta)), r = t - 1 on both sides.
ScatteringModel resonant_level(double eps0, const LatticeParams& params = {});

/// Impurity from a table of rows (k, Re t_L, Im t_L, Re r_L, Im r_L, Re t_R,
/// Im t_R, Re r_R, Im r_R), linearly interpolated in k and projected back onto
/// the unitary group.
ScatteringModel tabulated_scattering(std::vector<double> k,
                                     std::vector<ScatteringAmplitudes> rows,
                                     std::string name = "tabulated");

/// Reads the CSV form of `tabulated_scattering`. Lines starting with '#' and a
/// non-numeric header line are skipped.
ScatteringModel load_tabulated_scattering(const std::string& path);

/// Perfectly transmitting impurity (r = 0, t = 1).
ScatteringModel transparent_impurity();

double dispersion(double k, const LatticeParams& params = {});

/// Fermi-Dirac occupation. At T = 0 a step with value 1/2 exactly at mu.
double fermi_dirac(double energy, double mu, double T);

/// Occupation of the scattering state |k>: f_R for k < 0, f_L for k > 0.
double occupation_tilde(double k, const ReservoirPair& res, const LatticeParams& params = {});

/// k_F in (0, pi) with -2 eta cos k_F = mu. Throws for |mu| >= 2 eta.
double fermi_momentum(double mu, const LatticeParams& params = {});

enum class Side { Left, Right };

/// Two intervals on opposite sides of the impurity.
/// A_L = {m : -d_L - ell_L <= m + m0 <= -d_L - 1},
/// A_R = {m : d_R + 1 <= m - m0 <= d_R + ell_R}.
struct SubsystemPair {
  long d_L = 0;
  long ell_L = 1;
  long d_R = 0;
  long ell_R = 1;
  int m0 = 0;

  void validate() const;

  std::vector<long> left_sites() const;   // ascending
  std::vector<long> right_sites() const;  // ascending
  std::vector<long> union_sites() const;  // A_L ascending, then A_R ascending

  /// A_mirror as (left, right) pairs ordered by distance from the impurity,
  /// flattened to [l_1, r_1, l_2, r_2, ...] with l_p = -r_p.
  std::vector<long> mirror_sites() const;

  long delta_ell(Side side) const;  // ell_i - ell_mirror
  SubsystemPair shifted(long s) const { return {d_L + s, ell_L, d_R + s, ell_R, m0}; }
  SubsystemPair swapped() const { return {d_R, ell_R, d_L, ell_L, m0}; }
};

long mirror_overlap_length(const SubsystemPair& geom);

/// Everything that fixes the steady state: impurity, reservoirs, lattice.
struct SteadyState {
  ScatteringModel model;
  ReservoirPair reservoirs;
  LatticeParams lattice;

  double f_L(double k) const;  // f_L(eps(k)), even in k
  double f_R(double k) const;
  double f_tilde(double k) const { return occupation_tilde(k, reservoirs, lattice); }

  /// k = 0 and, for every zero-temperature reservoir with mu inside the band,
  /// the Fermi momenta +-k_F. Sorted, inside [-pi, pi].
  std::vector<double> breakpoints() const;

  /// Mirror-image problem (L <-> R) with identical physics up to relabeling.
  SteadyState mirrored() const;
};

}  // namespace ness
