#include "ness/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "ness/error.hpp"

namespace ness {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const double kLn2 = std::log(2.0);

MeasureKind parse_kind(const std::string& s) {
  if (s == "mi") return MeasureKind::MutualInformation;
  if (s == "rmi") return MeasureKind::RenyiMutualInformation;
  if (s == "prmi") return MeasureKind::PetzRenyiMutualInformation;
  if (s == "negativity") return MeasureKind::Negativity;
  if (s == "renyi_negativity") return MeasureKind::RenyiNegativity;
  if (s == "entropy") return MeasureKind::VonNeumann;
  if (s == "renyi_entropy") return MeasureKind::Renyi;
  throw ConfigError("unknown measure '" + s + "'");
}

bool needs_index(MeasureKind k) {
  return k == MeasureKind::RenyiMutualInformation || k == MeasureKind::PetzRenyiMutualInformation ||
         k == MeasureKind::RenyiNegativity || k == MeasureKind::Renyi;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

std::string MeasureRequest::column_name() const {
  std::string s = to_string(kind);
  if (needs_index(kind)) s += "_n" + format_number(n);
  return s;
}

double MeasureRequest::max_value(long ell_L, long ell_R) const {
  const double m = static_cast<double>(std::min(ell_L, ell_R));
  switch (kind) {
    case MeasureKind::Negativity:
    case MeasureKind::RenyiNegativity: return m * kLn2;
    case MeasureKind::VonNeumann:
    case MeasureKind::Renyi: return static_cast<double>(ell_L + ell_R) * kLn2;
    default: return 2.0 * m * kLn2;
  }
}

void set_pipeline(RunConfig& cfg, const std::string& p) {
  if (p == "numeric") cfg.numeric = true, cfg.analytic = false;
  else if (p == "analytic") cfg.numeric = false, cfg.analytic = true;
  else if (p == "both") cfg.numeric = cfg.analytic = true;
  else throw ConfigError("pipeline must be numeric, analytic or both");
}

RunConfig RunConfig::from_json(const json& j, const std::string& base_dir) {
  check_keys(j, {"name", "model", "reservoirs", "lattice", "geometry", "sweep", "measures", "pipeline",
                 "mode", "quadrature", "spectral", "output", "description"},
             "run config");
  RunConfig c;
  read(j, "name", c.name);
  if (j.contains("model")) {
    const auto& m = j["model"];
    check_keys(m, {"type", "eps0", "path"}, "model");
    read(m, "type", c.model_type);
    read(m, "eps0", c.eps0);
    read(m, "path", c.table_path);
    if (!c.table_path.empty() && fs::path(c.table_path).is_relative())
      c.table_path = (fs::path(base_dir) / c.table_path).string();
  }
  if (j.contains("reservoirs")) {
    const auto& r = j["reservoirs"];
    check_keys(r, {"mu_L", "T_L", "mu_R", "T_R"}, "reservoirs");
    read(r, "mu_L", c.reservoirs.mu_L);
    read(r, "T_L", c.reservoirs.T_L);
    read(r, "mu_R", c.reservoirs.mu_R);
    read(r, "T_R", c.reservoirs.T_R);
  }
  if (j.contains("lattice")) {
    const auto& l = j["lattice"];
    check_keys(l, {"hopping", "m0"}, "lattice");
    read(l, "hopping", c.lattice.hopping);
    read(l, "m0", c.lattice.impurity_halfwidth);
  }
  if (j.contains("geometry")) {
    const auto& g = j["geometry"];
    check_keys(g, {"ell_L", "ell_R", "delta_d", "d_min"}, "geometry");
    read(g, "ell_L", c.ell_L);
    read(g, "ell_R", c.ell_R);
    read(g, "delta_d", c.delta_d);
    read(g, "d_min", c.d_min);
  }
  if (!j.contains("sweep")) throw ConfigError("run config needs a sweep");
  {
    const auto& s = j["sweep"];
    check_keys(s, {"variable", "min", "max", "step"}, "sweep");
    std::string var = "delta_d";
    read(s, "variable", var);
    if (var == "delta_d") c.variable = SweepVariable::DeltaD;
    else if (var == "delta_T") c.variable = SweepVariable::DeltaT;
    else if (var == "delta_mu") c.variable = SweepVariable::DeltaMu;
    else throw ConfigError("sweep variable must be delta_d, delta_T or delta_mu");
    read(s, "min", c.sweep_min);
    read(s, "max", c.sweep_max);
    read(s, "step", c.sweep_step);
  }
  if (!j.contains("measures") || !j["measures"].is_array()) throw ConfigError("run config needs a measures array");
  for (const auto& m : j["measures"]) {
    MeasureRequest r;
    if (m.is_string()) {
      r.kind = parse_kind(m.get<std::string>());
    } else {
      check_keys(m, {"kind", "n"}, "measure");
      std::string kind;
      read(m, "kind", kind);
      r.kind = parse_kind(kind);
      read(m, "n", r.n);
    }
    c.measures.push_back(r);
  }
  if (j.contains("pipeline")) set_pipeline(c, j["pipeline"].get<std::string>());
  if (j.contains("mode")) {
    try {
      c.mode = parse_correlation_mode(j["mode"].get<std::string>());
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("quadrature")) {
    const auto& q = j["quadrature"];
    check_keys(q, {"abs_tol", "max_depth"}, "quadrature");
    read(q, "abs_tol", c.quad.abs_tol);
    read(q, "max_depth", c.quad.max_depth);
  }
  if (j.contains("spectral")) {
    const auto& s = j["spectral"];
    check_keys(s, {"clip", "imag_tol"}, "spectral");
    read(s, "clip", c.spectral.clip);
    read(s, "imag_tol", c.spectral.imag_tol);
  }
  read(j, "output", c.output);
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return from_json(j, fs::path(path).parent_path().string());
}

void RunConfig::validate() const {
  try {
    reservoirs.validate();
    lattice.validate();
    quad.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (ell_L < 1 || ell_R < 1) throw ConfigError("interval lengths must be >= 1");
  if (d_min < 0) throw ConfigError("d_min must be >= 0");
  if (!(sweep_step > 0.0)) throw ConfigError("sweep step must be positive");
  if (!(sweep_max >= sweep_min)) throw ConfigError("sweep range is empty");
  if (measures.empty()) throw ConfigError("no measures requested");
  if (model_type != "resonant-level" && model_type != "tabulated")
    throw ConfigError("model type must be resonant-level or tabulated");
  if (model_type == "tabulated" && table_path.empty()) throw ConfigError("tabulated model needs a path");
  for (const auto& m : measures) {
    if (m.kind == MeasureKind::RenyiNegativity && (m.n < 2 || std::fmod(m.n, 2.0) != 0.0))
      throw ConfigError("renyi_negativity needs an even integer n");
    if (needs_index(m.kind) && (!(m.n > 0.0) || m.n == 1.0))
      throw ConfigError("measure '" + std::string(to_string(m.kind)) + "' needs n > 0, n != 1");
  }
  if (variable == SweepVariable::DeltaT && reservoirs.T_R + sweep_min < 0.0)
    throw ConfigError("temperature sweep reaches negative T_L");
}

std::vector<double> RunConfig::sweep_values() const {
  const long count = static_cast<long>(std::floor((sweep_max - sweep_min) / sweep_step + 1e-9)) + 1;
  std::vector<double> v;
  for (long i = 0; i < count; ++i) {
    double x = sweep_min + i * sweep_step;
    if (variable == SweepVariable::DeltaD) x = std::round(x);
    v.push_back(x);
  }
  return v;
}

ScatteringModel RunConfig::make_model() const {
  if (model_type == "tabulated") return load_tabulated_scattering(table_path);
  return resonant_level(eps0, lattice);
}

SteadyState RunConfig::state_at(double value) const {
  ReservoirPair r = reservoirs;
  if (variable == SweepVariable::DeltaT) r.T_L = r.T_R + value;
  if (variable == SweepVariable::DeltaMu) r.mu_L = r.mu_R + value;
  r.validate();
  return {make_model(), r, lattice};
}

SubsystemPair RunConfig::geometry_at(double value) const {
  const long dd = variable == SweepVariable::DeltaD ? std::lround(value) : delta_d;
  SubsystemPair g;
  g.d_L = d_min + std::max(dd, 0L);
  g.d_R = d_min + std::max(-dd, 0L);
  g.ell_L = ell_L;
  g.ell_R = ell_R;
  g.m0 = lattice.impurity_halfwidth;
  return g;
}

const char* RunConfig::sweep_column() const {
  switch (variable) {
    case SweepVariable::DeltaT: return "delta_T";
    case SweepVariable::DeltaMu: return "delta_mu";
    default: return "delta_d";
  }
}

SweepRow evaluate_point(const RunConfig& cfg, double value) {
  SweepRow row;
  row.sweep_value = value;
  row.cells.resize(cfg.measures.size());
  try {
    const SteadyState state = cfg.state_at(value);
    const SubsystemPair geom = cfg.geometry_at(value);
    const long lm = mirror_overlap_length(geom);
    row.ell_mirror = lm;

    if (cfg.numeric) {
      const auto CA = build_restricted_matrix(geom.union_sites(), cfg.mode, state, cfg.quad);
      std::vector<long> lp(geom.ell_L), rp(geom.ell_R);
      for (long i = 0; i < geom.ell_L; ++i) lp[i] = i;
      for (long i = 0; i < geom.ell_R; ++i) rp[i] = geom.ell_L + i;
      const Eigen::MatrixXcd CL = CA.sub(lp).matrix, CR = CA.sub(rp).matrix;
      for (size_t i = 0; i < cfg.measures.size(); ++i) {
        const auto& m = cfg.measures[i];
        MeasureValue v;
        switch (m.kind) {
          case MeasureKind::MutualInformation: v = mutual_information(CL, CR, CA.matrix, cfg.spectral); break;
          case MeasureKind::RenyiMutualInformation:
            v = renyi_mutual_information(CL, CR, CA.matrix, m.n, cfg.spectral);
            break;
          case MeasureKind::PetzRenyiMutualInformation: v = petz_renyi_mi(CL, CR, CA.matrix, m.n, cfg.spectral); break;
          case MeasureKind::Negativity: v = fermionic_negativity(CA.matrix, geom.ell_L, cfg.spectral); break;
          case MeasureKind::RenyiNegativity:
            v = renyi_negativity(CA.matrix, geom.ell_L, static_cast<int>(m.n), cfg.spectral);
            break;
          case MeasureKind::VonNeumann: v = von_neumann_entropy(CA.matrix, cfg.spectral); break;
          case MeasureKind::Renyi: v = renyi_entropy(CA.matrix, m.n, cfg.spectral); break;
        }
        row.cells[i].numeric = v.value;
        row.cells[i].numeric_norm = v.value / m.max_value(geom.ell_L, geom.ell_R);
        row.max_imag_residue = std::max(row.max_imag_residue, v.diagnostics.imag_residue);
        row.max_spectrum_excursion = std::max(row.max_spectrum_excursion, v.diagnostics.spectrum_excursion);
      }
    }
    if (cfg.analytic) {
      const BiasContext ctx{state, cfg.quad};
      for (size_t i = 0; i < cfg.measures.size(); ++i) {
        const auto& m = cfg.measures[i];
        double a = 0.0;
        switch (m.kind) {
          case MeasureKind::MutualInformation: a = mi_asymptotic(ctx, lm).total; break;
          case MeasureKind::RenyiMutualInformation: a = rmi_asymptotic(ctx, m.n, lm).total; break;
          case MeasureKind::PetzRenyiMutualInformation: a = prmi_asymptotic(ctx, m.n, lm).total; break;
          case MeasureKind::Negativity: a = negativity_asymptotic(ctx, lm).total; break;
          case MeasureKind::RenyiNegativity:
            a = renyi_negativity_asymptotic(ctx, geom, static_cast<int>(m.n)).total;
            break;
          case MeasureKind::VonNeumann: a = combined_entropy_asymptotic(ctx, geom, 1.0).total; break;
          case MeasureKind::Renyi: a = combined_entropy_asymptotic(ctx, geom, m.n).total; break;
        }
        row.cells[i].analytic = a;
        row.cells[i].analytic_norm = a / m.max_value(geom.ell_L, geom.ell_R);
      }
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

int worker_count() {
  if (const char* s = std::getenv("NESS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 256L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
  cfg.validate();
  const auto values = cfg.sweep_values();
  std::vector<SweepRow> rows(values.size());
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (size_t i; (i = next.fetch_add(1)) < values.size();) rows[i] = evaluate_point(cfg, values[i]);
  };
  const int nw = std::min<int>(worker_count(), static_cast<int>(values.size()));
  if (nw <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nw; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return rows;
}

std::string format_csv(const std::vector<SweepRow>& rows, const RunConfig& cfg) {
  if (rows.empty()) throw InvalidArgument("no rows to write");
  std::ostringstream os;
  os << cfg.sweep_column() << ",ell_mirror";
  for (const auto& m : cfg.measures) {
    const auto c = m.column_name();
    os << ',' << c << "_numeric," << c << "_analytic," << c << "_numeric_norm," << c << "_analytic_norm";
  }
  os << '\n';
  for (const auto& r : rows) {
    if (r.cells.size() != cfg.measures.size()) throw InvalidArgument("row does not match the measure list");
    os << format_number(r.sweep_value) << ',' << r.ell_mirror;
    for (const auto& c : r.cells)
      os << ',' << format_number(c.numeric) << ',' << format_number(c.analytic) << ','
         << format_number(c.numeric_norm) << ',' << format_number(c.analytic_norm);
    os << '\n';
  }
  return os.str();
}

void emit_csv(const std::vector<SweepRow>& rows, const RunConfig& cfg, const std::string& path) {
  const std::string text = format_csv(rows, cfg);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw Error("write to '" + path + "' failed");
}

std::vector<std::string> figure_ids() {
  return {"2a", "2b", "2c", "2d", "3a", "3b", "3c", "3d", "4a", "4b", "5a", "5b", "5c", "5d"};
}

std::vector<FigureSeries> load_figure(const std::string& figure_id, const std::string& config_dir) {
  const auto ids = figure_ids();
  if (std::find(ids.begin(), ids.end(), figure_id) == ids.end())
    throw ConfigError("unknown figure '" + figure_id + "'");
  const fs::path path = fs::path(config_dir) / ("fig" + figure_id + ".json");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open figure config '" + path.string() + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  check_keys(doc, {"figure", "description", "base", "series"}, path.string());
  if (!doc.contains("base") || !doc.contains("series") || !doc["series"].is_array())
    throw ConfigError(path.string() + ": needs 'base' and a 'series' array");
  std::vector<FigureSeries> out;
  for (const auto& s : doc["series"]) {
    check_keys(s, {"label", "override"}, "series");
    json merged = doc["base"];
    if (s.contains("override")) merged.merge_patch(s["override"]);
    FigureSeries fsr;
    fsr.label = s.value("label", std::string("series"));
    fsr.config = RunConfig::from_json(merged, path.parent_path().string());
    out.push_back(std::move(fsr));
  }
  if (out.empty()) throw ConfigError(path.string() + ": no series");
  return out;
}

}  // namespace ness
