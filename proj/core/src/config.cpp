#include "sapa/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace sapa {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> known) {
  if (!obj.is_object()) fail(where, "must be an object");
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(where.empty() ? key : where + "." + key, "unknown key");
  }
}

template <typename T>
void read(const json& obj, const char* key, const std::string& where, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(where + "." + key, "has the wrong type");
  }
}

void read_interval(const json& obj, const char* key, const std::string& where, Interval& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    fail(where + "." + key, "must be a [lo, hi] pair of numbers");
  }
  out = {v[0].get<double>(), v[1].get<double>()};
  if (!(out.lo <= out.hi)) fail(where + "." + key, "requires lo <= hi");
}

AxisSpec read_axis(const json& v, const std::string& key) {
  AxisSpec axis;
  if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_number()) fail(key, "list entries must be numbers");
      axis.values.push_back(x.get<double>());
    }
    if (axis.values.empty()) fail(key, "must not be empty");
  } else if (v.is_object()) {
    reject_unknown(v, key, {"start", "step", "stop"});
    for (const char* k : {"start", "step", "stop"}) {
      if (!v.contains(k) || !v.at(k).is_number()) fail(key + "." + k, "must be a number");
    }
    axis.triple = std::array<double, 3>{v.at("start").get<double>(), v.at("step").get<double>(),
                                        v.at("stop").get<double>()};
    if (!((*axis.triple)[1] > 0.0) || (*axis.triple)[2] < (*axis.triple)[0]) {
      fail(key, "requires step > 0 and stop >= start");
    }
  } else {
    fail(key, "must be a list or a {start, step, stop} object");
  }
  return axis;
}

json axis_to_json(const AxisSpec& axis) {
  if (axis.triple) {
    return {{"start", (*axis.triple)[0]}, {"step", (*axis.triple)[1]}, {"stop", (*axis.triple)[2]}};
  }
  return axis.values;
}

json interval_to_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

const char* majorant_name(MajorantMethod m) {
  return m == MajorantMethod::kExact ? "exact" : "fast";
}

GridSpec reference_grid_spec(bool split) {
  GridSpec g;
  g.t_d_ms.triple = std::array<double, 3>{4.0, 0.6, 64.0};
  g.f_t_hz.triple = std::array<double, 3>{0.1, 0.1, 6.0};
  if (split) {
    g.n_h.triple = std::array<double, 3>{6.0, 6.0, 48.0};
  } else {
    g.n_h.values = {48.0};
  }
  return g;
}

}  // namespace

std::vector<double> AxisSpec::expand() const {
  if (triple) return arithmetic_sequence((*triple)[0], (*triple)[1], (*triple)[2]);
  return values;
}

ControlGrid GridSpec::to_grid() const {
  ControlGrid g;
  for (double ms : t_d_ms.expand()) g.t_d_values.push_back(ms / 1000.0);
  g.f_t_values = f_t_hz.expand();
  for (double n : n_h.expand()) {
    if (n != std::round(n)) throw ConfigError("n_h: values must be integers");
    g.n_h_values.push_back(static_cast<int>(std::lround(n)));
  }
  return g;
}

UtilityShape RunConfig::utility_shape() const { return {q_min_mrad * 1e-3, q_max_mrad * 1e-3}; }

ControlGrid RunConfig::grid(const std::string& name) const {
  for (const auto& [n, spec] : grids) {
    if (n == name) return spec.to_grid();
  }
  throw ConfigError("grids." + name + ": no such grid");
}

SceneConfig RunConfig::scene_config() const {
  SceneConfig s;
  s.n_targets = n_targets;
  s.range_m = {range_km.lo * 1000.0, range_km.hi * 1000.0};
  s.bearing_deg = bearing_deg;
  s.rcs_dbsm = rcs_dbsm;
  s.weight = weight;
  s.type_probabilities = type_probabilities;
  s.types = types;
  s.seed = seed;
  return s;
}

SweepConfig RunConfig::sweep_config() const {
  SweepConfig s;
  s.budgets = budgets.expand();
  for (const auto& name : sweep_grids) s.grids.push_back({name, grid(name)});
  s.n_mc = n_mc;
  s.scene = scene_config();
  s.histogram_budgets = histogram_budgets;
  s.histogram_grid = histogram_grid;
  s.majorant = majorant;
  return s;
}

void RunConfig::validate() const {
  radar.validate();
  try {
    utility_shape().validate();
  } catch (const std::invalid_argument&) {
    throw ConfigError("utility: requires 0 < q_max_mrad < q_min_mrad");
  }
  if (grids.empty()) throw ConfigError("grids: at least one grid is required");
  for (const auto& [name, spec] : grids) {
    try {
      spec.to_grid().validate(radar);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("grids." + name + ": " + e.what());
    }
  }
  try {
    scene_config().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (const auto& name : sweep_grids) grid(name);
  try {
    sweep_config().validate(radar);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.grids = {{"full", reference_grid_spec(false)}, {"split", reference_grid_spec(true)}};
  cfg.budgets.triple = std::array<double, 3>{0.01, 0.01, 1.0};
  cfg.sweep_grids = {"full", "split"};
  return cfg;
}

RunConfig parse_config(const json& doc) {
  RunConfig cfg = default_config();
  reject_unknown(doc, "", {"radar", "utility", "grids", "scene", "sweep"});

  if (doc.contains("radar")) {
    const json& r = doc.at("radar");
    reject_unknown(r, "radar", {"k_rad", "n_h_total", "p_fa", "alpha_bw", "snr_floor_db", "snr_cap_db"});
    read(r, "k_rad", "radar", cfg.radar.k_rad);
    read(r, "n_h_total", "radar", cfg.radar.n_h_total);
    read(r, "p_fa", "radar", cfg.radar.p_fa);
    read(r, "alpha_bw", "radar", cfg.radar.alpha_bw);
    read(r, "snr_floor_db", "radar", cfg.radar.snr_floor_db);
    read(r, "snr_cap_db", "radar", cfg.radar.snr_cap_db);
  }
  if (doc.contains("utility")) {
    const json& u = doc.at("utility");
    reject_unknown(u, "utility", {"q_min_mrad", "q_max_mrad"});
    read(u, "q_min_mrad", "utility", cfg.q_min_mrad);
    read(u, "q_max_mrad", "utility", cfg.q_max_mrad);
  }
  if (doc.contains("grids")) {
    const json& g = doc.at("grids");
    if (!g.is_object()) fail("grids", "must be an object of named grids");
    cfg.grids.clear();
    for (const auto& [name, spec] : g.items()) {
      const std::string where = "grids." + name;
      reject_unknown(spec, where, {"t_d_ms", "f_t_hz", "n_h"});
      GridSpec grid;
      for (const char* k : {"t_d_ms", "f_t_hz", "n_h"}) {
        if (!spec.contains(k)) fail(where + "." + k, "is required");
      }
      grid.t_d_ms = read_axis(spec.at("t_d_ms"), where + ".t_d_ms");
      grid.f_t_hz = read_axis(spec.at("f_t_hz"), where + ".f_t_hz");
      grid.n_h = read_axis(spec.at("n_h"), where + ".n_h");
      cfg.grids.emplace_back(name, std::move(grid));
    }
  }
  if (doc.contains("scene")) {
    const json& s = doc.at("scene");
    reject_unknown(s, "scene", {"n_targets", "range_km", "bearing_deg", "rcs_dbsm", "weight",
                                "type_probabilities", "type_i", "type_ii", "seed"});
    read(s, "n_targets", "scene", cfg.n_targets);
    read_interval(s, "range_km", "scene", cfg.range_km);
    read_interval(s, "bearing_deg", "scene", cfg.bearing_deg);
    read_interval(s, "rcs_dbsm", "scene", cfg.rcs_dbsm);
    read_interval(s, "weight", "scene", cfg.weight);
    read(s, "type_probabilities", "scene", cfg.type_probabilities);
    read(s, "seed", "scene", cfg.seed);
    const std::pair<const char*, int> type_keys[] = {{"type_i", 0}, {"type_ii", 1}};
    for (const auto& [key, index] : type_keys) {
      if (!s.contains(key)) continue;
      const std::string where = std::string("scene.") + key;
      reject_unknown(s.at(key), where, {"maneuver_std_mps2", "corr_time_s"});
      read_interval(s.at(key), "maneuver_std_mps2", where, cfg.types[index].maneuver_std);
      read_interval(s.at(key), "corr_time_s", where, cfg.types[index].corr_time);
    }
  }
  if (doc.contains("sweep")) {
    const json& w = doc.at("sweep");
    reject_unknown(w, "sweep", {"budgets", "grids", "n_mc", "histogram_budgets", "histogram_grid", "majorant"});
    if (w.contains("budgets")) cfg.budgets = read_axis(w.at("budgets"), "sweep.budgets");
    read(w, "grids", "sweep", cfg.sweep_grids);
    read(w, "n_mc", "sweep", cfg.n_mc);
    read(w, "histogram_budgets", "sweep", cfg.histogram_budgets);
    read(w, "histogram_grid", "sweep", cfg.histogram_grid);
    if (w.contains("majorant")) {
      std::string m;
      read(w, "majorant", "sweep", m);
      if (m == "exact") {
        cfg.majorant = MajorantMethod::kExact;
      } else if (m == "fast") {
        cfg.majorant = MajorantMethod::kFastTraversal;
      } else {
        fail("sweep.majorant", "must be \"exact\" or \"fast\"");
      }
    }
  }

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json config_to_json(const RunConfig& cfg) {
  json grids = json::object();
  for (const auto& [name, spec] : cfg.grids) {
    grids[name] = {{"t_d_ms", axis_to_json(spec.t_d_ms)},
                   {"f_t_hz", axis_to_json(spec.f_t_hz)},
                   {"n_h", axis_to_json(spec.n_h)}};
  }
  const auto type_json = [](const TargetTypeRanges& t) {
    return json{{"maneuver_std_mps2", interval_to_json(t.maneuver_std)},
                {"corr_time_s", interval_to_json(t.corr_time)}};
  };
  return {
      {"radar",
       {{"k_rad", cfg.radar.k_rad},
        {"n_h_total", cfg.radar.n_h_total},
        {"p_fa", cfg.radar.p_fa},
        {"alpha_bw", cfg.radar.alpha_bw},
        {"snr_floor_db", cfg.radar.snr_floor_db},
        {"snr_cap_db", cfg.radar.snr_cap_db}}},
      {"utility", {{"q_min_mrad", cfg.q_min_mrad}, {"q_max_mrad", cfg.q_max_mrad}}},
      {"grids", std::move(grids)},
      {"scene",
       {{"n_targets", cfg.n_targets},
        {"range_km", interval_to_json(cfg.range_km)},
        {"bearing_deg", interval_to_json(cfg.bearing_deg)},
        {"rcs_dbsm", interval_to_json(cfg.rcs_dbsm)},
        {"weight", interval_to_json(cfg.weight)},
        {"type_probabilities", cfg.type_probabilities},
        {"type_i", type_json(cfg.types[0])},
        {"type_ii", type_json(cfg.types[1])},
        {"seed", cfg.seed}}},
      {"sweep",
       {{"budgets", axis_to_json(cfg.budgets)},
        {"grids", cfg.sweep_grids},
        {"n_mc", cfg.n_mc},
        {"histogram_budgets", cfg.histogram_budgets},
        {"histogram_grid", cfg.histogram_grid},
        {"majorant", majorant_name(cfg.majorant)}}},
  };
}

}  // namespace sapa
