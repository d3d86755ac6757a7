#include "sapa/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace sapa {
namespace {

const NamedGrid* find_grid(const std::vector<NamedGrid>& grids, const std::string& name) {
  for (const auto& g : grids) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

void require_budgets(const std::vector<double>& budgets, const char* what) {
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (!(budgets[i] > 0.0 && budgets[i] <= 1.0)) {
      throw std::invalid_argument(std::string("sweep.") + what + ": values must lie in (0, 1]");
    }
    if (i > 0 && !(budgets[i] > budgets[i - 1])) {
      throw std::invalid_argument(std::string("sweep.") + what + ": must be strictly increasing");
    }
  }
}

struct RunOutput {
  std::vector<RunRecord> records;
  std::vector<std::vector<int>> histogram;  // [histogram budget][n_h index]
};

}  // namespace

void SweepConfig::validate(const RadarConstants& consts) const {
  if (budgets.empty()) throw std::invalid_argument("sweep.budgets: must be non-empty");
  require_budgets(budgets, "budgets");
  require_budgets(histogram_budgets, "histogram_budgets");
  if (grids.empty()) throw std::invalid_argument("sweep.grids: must be non-empty");
  for (std::size_t i = 0; i < grids.size(); ++i) {
    grids[i].grid.validate(consts);
    for (std::size_t j = 0; j < i; ++j) {
      if (grids[i].name == grids[j].name) {
        throw std::invalid_argument("sweep.grids: duplicate name '" + grids[i].name + "'");
      }
    }
  }
  if (n_mc < 1) throw std::invalid_argument("sweep.n_mc: must be >= 1");
  scene.validate();
}

std::vector<ConcaveMajorant> scene_majorants(const Scene& scene, const ControlGrid& grid,
                                             const RadarConstants& consts,
                                             const UtilityShape& shape, MajorantMethod method) {
  std::vector<ConcaveMajorant> out;
  out.reserve(scene.tasks.size());
  for (const auto& t : scene.tasks) {
    const auto points = enumerate_setpoints(Task{t.env, t.weight}, grid, consts, shape);
    out.push_back(method == MajorantMethod::kExact ? build_majorant(points)
                                                   : fast_traversal_majorant(points));
  }
  return out;
}

RunMetrics metrics_from(const AllocationResult& allocation, const ControlGrid& grid) {
  RunMetrics m;
  m.active_tracks = allocation.active_track_count;
  m.total_utility = allocation.total_utility;
  for (int n_h : grid.n_h_values) m.element_histogram.emplace_back(n_h, 0);

  double q_sum = 0.0;
  int q_count = 0;
  for (const auto& a : allocation.assignments) {
    if (!a.allocated()) continue;
    q_sum += a.choice->quality;
    ++q_count;
    for (auto& [n_h, count] : m.element_histogram) {
      if (n_h == a.choice->control.n_h) ++count;
    }
  }
  if (q_count > 0) m.mean_angular_error = q_sum / q_count;
  return m;
}

RunMetrics run_once(const Scene& scene, const ControlGrid& grid, double r_tot,
                    const RadarConstants& consts, const UtilityShape& shape) {
  const auto majorants = scene_majorants(scene, grid, consts, shape);
  return metrics_from(allocate(majorants, r_tot), grid);
}

Stats summarize(std::span<const double> values) {
  Stats s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(values.size()));
  s.lo2sigma = s.mean - 2.0 * s.std;
  s.hi2sigma = s.mean + 2.0 * s.std;
  return s;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<CellAggregate> aggregate_runs(std::span<const std::vector<RunRecord>> runs) {
  std::vector<CellAggregate> cells;
  if (runs.empty()) return cells;
  const std::size_t n_cells = runs.front().size();
  for (const auto& r : runs) {
    if (r.size() != n_cells) throw std::invalid_argument("runs disagree on the number of cells");
  }
  for (std::size_t c = 0; c < n_cells; ++c) {
    CellAggregate cell;
    cell.grid = runs.front()[c].grid;
    cell.budget = runs.front()[c].budget;
    std::vector<double> tracks, utility, error;
    for (const auto& r : runs) {
      if (r[c].grid != cell.grid || r[c].budget != cell.budget) {
        throw std::invalid_argument("runs disagree on cell ordering");
      }
      tracks.push_back(static_cast<double>(r[c].active_tracks));
      utility.push_back(r[c].total_utility);
      if (r[c].mean_angular_error_mrad) error.push_back(*r[c].mean_angular_error_mrad);
    }
    cell.active_tracks = summarize(tracks);
    cell.total_utility = summarize(utility);
    if (!error.empty()) cell.mean_angular_error_mrad = summarize(error);
    cells.push_back(std::move(cell));
  }
  return cells;
}

SweepResult budget_sweep(const SweepConfig& cfg, const RadarConstants& consts,
                         const UtilityShape& shape, unsigned threads) {
  consts.validate();
  shape.validate();
  cfg.validate(consts);

  std::vector<const NamedGrid*> grids;
  for (const auto& g : cfg.grids) grids.push_back(&g);
  std::sort(grids.begin(), grids.end(),
            [](const NamedGrid* a, const NamedGrid* b) { return a->name < b->name; });
  const NamedGrid* hist_grid = find_grid(cfg.grids, cfg.histogram_grid);

  const auto n_runs = static_cast<std::size_t>(cfg.n_mc);
  std::vector<RunOutput> outputs(n_runs);

  const auto do_run = [&](std::size_t r) {
    SceneConfig scene_cfg = cfg.scene;
    scene_cfg.seed = derive_seed(cfg.scene.seed, r);
    const Scene scene = generate_scene(scene_cfg);
    RunOutput& out = outputs[r];
    for (const NamedGrid* g : grids) {
      const auto majorants = scene_majorants(scene, g->grid, consts, shape, cfg.majorant);
      for (double budget : cfg.budgets) {
        const RunMetrics m = metrics_from(allocate(majorants, budget), g->grid);
        RunRecord rec{g->name, budget, m.active_tracks, m.total_utility, std::nullopt};
        if (m.mean_angular_error) rec.mean_angular_error_mrad = *m.mean_angular_error * 1e3;
        out.records.push_back(std::move(rec));
      }
      if (g != hist_grid) continue;
      for (double budget : cfg.histogram_budgets) {
        const RunMetrics m = metrics_from(allocate(majorants, budget), g->grid);
        std::vector<int> counts;
        for (const auto& bin : m.element_histogram) counts.push_back(bin.second);
        out.histogram.push_back(std::move(counts));
      }
    }
  };

  const unsigned workers = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(n_runs));
  if (workers <= 1) {
    for (std::size_t r = 0; r < n_runs; ++r) do_run(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t r = next++; r < n_runs; r = next++) {
            try {
              do_run(r);
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
              next = n_runs;
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  SweepResult result;
  for (auto& o : outputs) result.runs.push_back(std::move(o.records));
  result.cells = aggregate_runs(result.runs);

  if (hist_grid != nullptr) {
    for (std::size_t b = 0; b < cfg.histogram_budgets.size(); ++b) {
      for (std::size_t h = 0; h < hist_grid->grid.n_h_values.size(); ++h) {
        double sum = 0.0;
        for (const auto& o : outputs) sum += o.histogram[b][h];
        result.histogram.push_back(
            {cfg.histogram_budgets[b], hist_grid->grid.n_h_values[h], sum / static_cast<double>(n_runs)});
      }
    }
  }
  return result;
}

std::vector<HistogramRow> element_histogram_report(const SweepConfig& cfg,
                                                   std::span<const double> budgets,
                                                   const std::string& grid_name,
                                                   const RadarConstants& consts,
                                                   const UtilityShape& shape, unsigned threads) {
  const NamedGrid* grid = find_grid(cfg.grids, grid_name);
  if (grid == nullptr) throw std::invalid_argument("unknown grid '" + grid_name + "'");
  SweepConfig sub = cfg;
  sub.grids = {*grid};
  sub.budgets.assign(budgets.begin(), budgets.end());
  sub.histogram_budgets = sub.budgets;
  sub.histogram_grid = grid_name;
  return budget_sweep(sub, consts, shape, threads).histogram;
}

}  // namespace sapa
