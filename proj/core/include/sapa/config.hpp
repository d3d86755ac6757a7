#ifndef SAPA_CONFIG_HPP
#define SAPA_CONFIG_HPP

// One JSON document drives a whole reproduction. Values are kept in the
// units written in the file (ms, Hz, km, degrees, dBsm, mrad) so a parsed
// config serializes back to the same numbers; conversion to model units
// happens in the accessors.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sapa/experiment.hpp"
#include "sapa/qram.hpp"
#include "sapa/radar_model.hpp"
#include "sapa/scenario.hpp"

namespace sapa {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Either an explicit list or a {start, step, stop} triple.
struct AxisSpec {
  std::vector<double> values;
  std::optional<std::array<double, 3>> triple;

  std::vector<double> expand() const;

  friend bool operator==(const AxisSpec&, const AxisSpec&) = default;
};

struct GridSpec {
  AxisSpec t_d_ms;
  AxisSpec f_t_hz;
  AxisSpec n_h;

  ControlGrid to_grid() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct RunConfig {
  RadarConstants radar;
  double q_min_mrad = 3.0;
  double q_max_mrad = 1.0;
  std::vector<std::pair<std::string, GridSpec>> grids;

  int n_targets = 200;
  Interval range_km{10.0, 70.0};
  Interval bearing_deg{-60.0, 60.0};
  Interval rcs_dbsm{-10.0, 10.0};
  Interval weight{0.2, 0.8};
  std::array<double, 2> type_probabilities{0.5, 0.5};
  std::array<TargetTypeRanges, 2> types = SceneConfig{}.types;
  std::uint64_t seed = 1;

  AxisSpec budgets;
  std::vector<std::string> sweep_grids;
  int n_mc = 100;
  std::vector<double> histogram_budgets{0.1, 0.2, 0.3, 0.4};
  std::string histogram_grid = "split";
  MajorantMethod majorant = MajorantMethod::kExact;

  UtilityShape utility_shape() const;
  /// Throws ConfigError for an unknown name.
  ControlGrid grid(const std::string& name) const;
  SceneConfig scene_config() const;
  SweepConfig sweep_config() const;

  /// Checks every section; messages start with the offending key.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Reference setup: k_rad 2.662e21, P_fa 1e-4, 48 elements, 3/1 mrad utility
/// ramp, "split" and "full" grids, 200 targets in 10-70 km, 100 runs.
RunConfig default_config();

/// Missing keys take default_config() values; unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace sapa

#endif  // SAPA_CONFIG_HPP
