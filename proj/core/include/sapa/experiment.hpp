#ifndef SAPA_EXPERIMENT_HPP
#define SAPA_EXPERIMENT_HPP

// Monte Carlo budget sweeps comparing control grids (typically split versus
// full aperture) on freshly drawn scenes.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sapa/qram.hpp"
#include "sapa/radar_model.hpp"
#include "sapa/scenario.hpp"

namespace sapa {

enum class MajorantMethod { kExact, kFastTraversal };

struct NamedGrid {
  std::string name;
  ControlGrid grid;

  friend bool operator==(const NamedGrid&, const NamedGrid&) = default;
};

struct SweepConfig {
  std::vector<double> budgets;  // strictly increasing, each in (0, 1]
  std::vector<NamedGrid> grids;
  int n_mc = 100;
  SceneConfig scene;
  std::vector<double> histogram_budgets{0.1, 0.2, 0.3, 0.4};
  std::string histogram_grid = "split";  // ignored when absent from `grids`
  MajorantMethod majorant = MajorantMethod::kExact;

  void validate(const RadarConstants& consts) const;

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct RunMetrics {
  int active_tracks = 0;
  double total_utility = 0.0;
  std::optional<double> mean_angular_error;  // rad, over allocated tasks only
  std::vector<std::pair<int, int>> element_histogram;  // (n_h, allocated count), grid order
};

/// Per-task majorants for one scene on one grid. Independent of the budget,
/// so a sweep builds them once per (run, grid).
std::vector<ConcaveMajorant> scene_majorants(const Scene& scene, const ControlGrid& grid,
                                             const RadarConstants& consts,
                                             const UtilityShape& shape,
                                             MajorantMethod method = MajorantMethod::kExact);

RunMetrics metrics_from(const AllocationResult& allocation, const ControlGrid& grid);

/// enumerate -> majorant -> allocate -> metrics for a single budget.
RunMetrics run_once(const Scene& scene, const ControlGrid& grid, double r_tot,
                    const RadarConstants& consts, const UtilityShape& shape);

/// Population statistics (divide by n); band = mean -/+ 2 std.
struct Stats {
  double mean = 0.0;
  double std = 0.0;
  double lo2sigma = 0.0;
  double hi2sigma = 0.0;
  int count = 0;
};

/// Sums in the given order, so identical inputs give identical bits.
Stats summarize(std::span<const double> values);

/// One (run, grid, budget) record as persisted in runs/run_<r>.csv.
struct RunRecord {
  std::string grid;
  double budget = 0.0;
  int active_tracks = 0;
  double total_utility = 0.0;
  std::optional<double> mean_angular_error_mrad;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct CellAggregate {
  std::string grid;
  double budget = 0.0;
  Stats active_tracks;
  Stats total_utility;
  std::optional<Stats> mean_angular_error_mrad;  // over runs with any allocation
};

struct HistogramRow {
  double budget = 0.0;
  int n_h = 0;
  double mean_count = 0.0;
};

struct SweepResult {
  std::vector<std::vector<RunRecord>> runs;  // [run] -> records sorted by (grid, budget)
  std::vector<CellAggregate> cells;          // sorted by (grid, budget)
  std::vector<HistogramRow> histogram;       // sorted by (budget, n_h)
};

/// Number of worker threads: `requested` if positive, otherwise
/// std::thread::hardware_concurrency() (at least 1).
unsigned resolve_threads(unsigned requested);

/// Runs r = 0..n_mc-1 on scenes seeded with derive_seed(cfg.scene.seed, r).
/// Runs are distributed over `threads` workers; aggregation happens
/// afterwards in run order, so the result does not depend on `threads`.
SweepResult budget_sweep(const SweepConfig& cfg, const RadarConstants& consts,
                         const UtilityShape& shape, unsigned threads = 1);

/// Aggregates persisted run records exactly as budget_sweep() does.
std::vector<CellAggregate> aggregate_runs(std::span<const std::vector<RunRecord>> runs);

/// Mean allocated-task count per n_h bin of `grid_name` at each budget.
std::vector<HistogramRow> element_histogram_report(const SweepConfig& cfg,
                                                   std::span<const double> budgets,
                                                   const std::string& grid_name,
                                                   const RadarConstants& consts,
                                                   const UtilityShape& shape,
                                                   unsigned threads = 1);

}  // namespace sapa

#endif  // SAPA_EXPERIMENT_HPP
