#include "sapa/scenario.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sapa {
namespace {

void require_interval(const Interval& iv, const char* name) {
  if (!(std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.lo <= iv.hi)) {
    throw std::invalid_argument(std::string("scene.") + name + ": must satisfy lo <= hi");
  }
}

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

void SceneConfig::validate() const {
  if (n_targets < 1) throw std::invalid_argument("scene.n_targets: must be >= 1");
  require_interval(range_m, "range_km");
  require_interval(bearing_deg, "bearing_deg");
  require_interval(rcs_dbsm, "rcs_dbsm");
  require_interval(weight, "weight");
  if (!(range_m.lo > 0.0)) throw std::invalid_argument("scene.range_km: must be > 0");
  if (!(bearing_deg.lo > -90.0 && bearing_deg.hi < 90.0)) {
    throw std::invalid_argument("scene.bearing_deg: must lie strictly inside (-90, 90)");
  }
  if (!(weight.lo > 0.0)) throw std::invalid_argument("scene.weight: must be > 0");
  if (type_probabilities[0] < 0.0 || type_probabilities[1] < 0.0 ||
      std::abs(type_probabilities[0] + type_probabilities[1] - 1.0) > 1e-12) {
    throw std::invalid_argument("scene.type_probabilities: must be non-negative and sum to 1");
  }
  for (const auto& t : types) {
    require_interval(t.maneuver_std, "type.maneuver_std_mps2");
    require_interval(t.corr_time, "type.corr_time_s");
    if (t.maneuver_std.lo < 0.0 || t.corr_time.lo < 0.0) {
      throw std::invalid_argument("scene.type_i/type_ii: intervals must be non-negative");
    }
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 0x9E3779B97F4A7C15ULL));
}

std::vector<double> normalize_weights(std::span<const double> raw) {
  if (raw.empty()) throw std::domain_error("normalize_weights needs at least one weight");
  double sum = 0.0;
  for (double w : raw) {
    if (!(w > 0.0) || !std::isfinite(w)) throw std::domain_error("weights must be positive");
    sum += w;
  }
  std::vector<double> out;
  out.reserve(raw.size());
  for (double w : raw) out.push_back(w / sum);
  return out;
}

Scene generate_scene(const SceneConfig& cfg) {
  cfg.validate();
  Scene scene;
  scene.tasks.resize(static_cast<std::size_t>(cfg.n_targets));
  std::vector<double> raw(scene.tasks.size());

  for (std::size_t k = 0; k < scene.tasks.size(); ++k) {
    RandomStream rng(derive_seed(cfg.seed, k));
    SceneTask& task = scene.tasks[k];
    task.type = rng.unit() < cfg.type_probabilities[0] ? TargetType::kTypeI : TargetType::kTypeII;
    const TargetTypeRanges& ranges = cfg.types[static_cast<int>(task.type)];
    task.env.range = rng.uniform(cfg.range_m);
    task.env.bearing = deg_to_rad(rng.uniform(cfg.bearing_deg));
    task.env.rcs = std::pow(10.0, rng.uniform(cfg.rcs_dbsm) / 10.0);
    task.env.maneuver_std = rng.uniform(ranges.maneuver_std);
    task.env.corr_time = rng.uniform(ranges.corr_time);
    raw[k] = rng.uniform(cfg.weight);
  }

  const std::vector<double> weights = normalize_weights(raw);
  for (std::size_t k = 0; k < scene.tasks.size(); ++k) scene.tasks[k].weight = weights[k];
  return scene;
}

nlohmann::json scene_to_json(const Scene& scene) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const auto& t : scene.tasks) {
    tasks.push_back({
        {"range_m", t.env.range},
        {"bearing_rad", t.env.bearing},
        {"rcs_m2", t.env.rcs},
        {"maneuver_std_mps2", t.env.maneuver_std},
        {"corr_time_s", t.env.corr_time},
        {"weight", t.weight},
        {"type", t.type == TargetType::kTypeI ? "I" : "II"},
    });
  }
  return {{"tasks", std::move(tasks)}};
}

Scene scene_from_json(const nlohmann::json& doc) {
  Scene scene;
  for (const auto& t : doc.at("tasks")) {
    SceneTask task;
    task.env.range = t.at("range_m").get<double>();
    task.env.bearing = t.at("bearing_rad").get<double>();
    task.env.rcs = t.at("rcs_m2").get<double>();
    task.env.maneuver_std = t.at("maneuver_std_mps2").get<double>();
    task.env.corr_time = t.at("corr_time_s").get<double>();
    task.weight = t.at("weight").get<double>();
    const auto type = t.at("type").get<std::string>();
    if (type != "I" && type != "II") throw std::invalid_argument("scene task type must be I or II");
    task.type = type == "I" ? TargetType::kTypeI : TargetType::kTypeII;
    scene.tasks.push_back(task);
  }
  return scene;
}

}  // namespace sapa
