#pragma once

// Configuration-driven parameter sweeps producing numeric and analytic values
// of the correlation measures between the two intervals.

#include <json.hpp>

#include <limits>
#include <string>
#include <vector>

#include "ness/asymptotics.hpp"
#include "ness/correlation.hpp"
#include "ness/measures.hpp"

namespace ness {

/// Raised for malformed or inconsistent run configurations.
class ConfigError : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

struct MeasureRequest {
  MeasureKind kind = MeasureKind::MutualInformation;
  double n = 1.0;

  /// Column stem, e.g. "mi", "prmi_n2", "rmi_n0.5".
  std::string column_name() const;
  /// Normalization by the maximal value for interval lengths lL, lR.
  double max_value(long ell_L, long ell_R) const;
};

enum class SweepVariable { DeltaD, DeltaT, DeltaMu };

struct RunConfig {
  std::string name = "run";
  // impurity
  std::string model_type = "resonant-level";
  double eps0 = 1.0;
  std::string table_path;
  // reservoirs; for bias sweeps T_L = T_R + value or mu_L = mu_R + value
  ReservoirPair reservoirs;
  LatticeParams lattice;
  // geometry
  long ell_L = 100;
  long ell_R = 200;
  long delta_d = 0;  // fixed d_L - d_R for bias sweeps
  long d_min = 0;    // smaller of d_L, d_R
  // sweep
  SweepVariable variable = SweepVariable::DeltaD;
  double sweep_min = 0.0;
  double sweep_max = 0.0;
  double sweep_step = 1.0;
  std::vector<MeasureRequest> measures;
  bool numeric = true;
  bool analytic = true;
  CorrelationMode mode = CorrelationMode::LongRange;
  QuadratureSpec quad;
  SpectralOptions spectral;
  std::string output;

  /// Relative paths inside the document resolve against base_dir.
  static RunConfig from_json(const nlohmann::json& j, const std::string& base_dir = ".");
  static RunConfig load(const std::string& path);
  void validate() const;

  std::vector<double> sweep_values() const;
  ScatteringModel make_model() const;
  /// Steady state and geometry of one sweep point.
  SteadyState state_at(double value) const;
  SubsystemPair geometry_at(double value) const;
  const char* sweep_column() const;
};

void set_pipeline(RunConfig& cfg, const std::string& pipeline);

struct MeasureCell {
  double numeric = std::numeric_limits<double>::quiet_NaN();
  double analytic = std::numeric_limits<double>::quiet_NaN();
  double numeric_norm = std::numeric_limits<double>::quiet_NaN();
  double analytic_norm = std::numeric_limits<double>::quiet_NaN();
};

struct SweepRow {
  double sweep_value = 0.0;
  long ell_mirror = 0;
  std::vector<MeasureCell> cells;  // aligned with RunConfig::measures
  double max_imag_residue = 0.0;
  double max_spectrum_excursion = 0.0;
  std::string error;  // nonempty when the row failed

  bool ok() const { return error.empty(); }
};

/// Evaluate one sweep point.
SweepRow evaluate_point(const RunConfig& cfg, double value);

/// All sweep points, in sweep order. Rows run on NESS_THREADS workers
/// (default: hardware concurrency). A failing row records its error.
std::vector<SweepRow> run_sweep(const RunConfig& cfg);

int worker_count();

/// CSV with 12 significant digits. Throws on empty input or I/O failure.
void emit_csv(const std::vector<SweepRow>& rows, const RunConfig& cfg, const std::string& path);
std::string format_csv(const std::vector<SweepRow>& rows, const RunConfig& cfg);

/// A figure: a base configuration and a list of series overriding it.
struct FigureSeries {
  std::string label;
  RunConfig config;
};

std::vector<FigureSeries> load_figure(const std::string& figure_id, const std::string& config_dir);
std::vector<std::string> figure_ids();

}  // namespace ness
