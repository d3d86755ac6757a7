#ifndef SAPA_SCENARIO_HPP
#define SAPA_SCENARIO_HPP

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sapa/radar_model.hpp"

namespace sapa {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return lo <= x && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class TargetType : int { kTypeI = 0, kTypeII = 1 };

/// Singer-model parameter ranges for one target type.
struct TargetTypeRanges {
  Interval maneuver_std;  // m/s^2
  Interval corr_time;     // s

  friend bool operator==(const TargetTypeRanges&, const TargetTypeRanges&) = default;
};

/// Scene distributions. Ranges in meters, bearings in degrees, RCS in dBsm;
/// conversion to model units happens in generate_scene().
struct SceneConfig {
  int n_targets = 200;
  Interval range_m{10e3, 70e3};
  Interval bearing_deg{-60.0, 60.0};
  Interval rcs_dbsm{-10.0, 10.0};
  Interval weight{0.2, 0.8};
  std::array<double, 2> type_probabilities{0.5, 0.5};
  std::array<TargetTypeRanges, 2> types{
      TargetTypeRanges{{20.0, 35.0}, {10.0, 20.0}},  // type I: agile
      TargetTypeRanges{{0.0, 5.0}, {1.0, 4.0}},      // type II: benign
  };
  std::uint64_t seed = 1;

  void validate() const;

  friend bool operator==(const SceneConfig&, const SceneConfig&) = default;
};

struct SceneTask {
  Environment env;
  double weight = 0.0;  // normalized
  TargetType type = TargetType::kTypeI;

  friend bool operator==(const SceneTask&, const SceneTask&) = default;
};

struct Scene {
  std::vector<SceneTask> tasks;

  friend bool operator==(const Scene&, const Scene&) = default;
};

/// SplitMix64 finalizer; the mixing step behind every derived seed.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of an independent sub-stream: splitmix64(base ^ splitmix64(index + 0x9E3779B97F4A7C15)).
/// Used for per-target streams within a scene and per-run scene seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Portable uniform draws on top of std::mt19937_64, whose output sequence is
/// fixed by the standard (unlike std::uniform_real_distribution).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double unit() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double uniform(const Interval& iv) { return iv.lo + (iv.hi - iv.lo) * unit(); }

 private:
  std::mt19937_64 engine_;
};

/// Target k draws, from its own stream derive_seed(cfg.seed, k) and in this
/// order: type, range, bearing, RCS (dBsm), maneuver std, correlation time,
/// raw weight. Weights are normalized afterwards.
Scene generate_scene(const SceneConfig& cfg);

/// Scales positive weights to sum to one. Throws std::domain_error on a
/// non-positive or empty input.
std::vector<double> normalize_weights(std::span<const double> raw);

nlohmann::json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& doc);

}  // namespace sapa

#endif  // SAPA_SCENARIO_HPP
