#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sapa/config.hpp"
#include "sapa/experiment.hpp"
#include "sapa/qram.hpp"
#include "sapa/radar_model.hpp"
#include "sapa/scenario.hpp"

namespace sapa::cli {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// Usage and validation problems (exit 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// I/O and other runtime failures (exit 1).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double round_to(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(x * scale) / scale;
}

std::string fixed(double x, int decimals) { return fmt::format("{:.{}f}", x, decimals); }

double deg(double rad) { return rad * 180.0 / std::numbers::pi; }
double rad(double deg) { return deg * std::numbers::pi / 180.0; }

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

RunConfig load(const std::string& path) {
  if (path.empty()) return default_config();
  try {
    return load_config(path);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

unsigned threads_from_env() {
  const char* raw = std::getenv("SAPA_RRM_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(raw, &end, 10);
  if (*end != '\0' || n < 0) throw UsageError("SAPA_RRM_THREADS: must be a non-negative integer");
  return static_cast<unsigned>(n);
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string config;
  std::optional<double> range_km;
  std::string range_sweep;
  double bearing_deg = 0.0;
  double rcs_m2 = 0.0;
  double maneuver_std = 0.0;
  double corr_time = 0.0;
  double td_ms = 0.0;
  double ft_hz = 0.0;
  int nh = 0;
};

ordered_json evaluation_json(const TaskEvaluation& e, double range_km) {
  ordered_json j;
  j["range_km"] = range_km;
  j["feasible"] = e.feasible;
  j["quality_mrad"] = e.quality ? ordered_json(round_to(*e.quality * 1e3, 4)) : ordered_json(nullptr);
  j["resource"] = e.resource ? ordered_json(round_to(*e.resource, 6)) : ordered_json(nullptr);
  j["utility"] = e.utility ? ordered_json(round_to(*e.utility, 6)) : ordered_json(nullptr);
  j["snr_db"] = round_to(linear_to_db(e.snr_linear), 4);
  j["snr_unclamped_db"] = round_to(linear_to_db(e.snr_unclamped), 4);
  j["track_sharpness"] = round_to(e.track_sharpness, 6);
  j["p_d"] = round_to(e.p_d, 6);
  j["n_looks"] = round_to(e.n_looks, 6);
  return j;
}

std::vector<double> parse_range_sweep(const std::string& spec) {
  std::array<double, 3> parts{};
  std::istringstream in(spec);
  in.imbue(std::locale::classic());
  char c1 = 0, c2 = 0;
  if (!(in >> parts[0] >> c1 >> parts[1] >> c2 >> parts[2]) || c1 != ':' || c2 != ':' || !in.eof()) {
    throw UsageError("--range-sweep: expected start:step:stop in km");
  }
  try {
    return arithmetic_sequence(parts[0], parts[1], parts[2]);
  } catch (const std::invalid_argument&) {
    throw UsageError("--range-sweep: requires step > 0 and stop >= start");
  }
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const RunConfig cfg = load(a.config);
  if (!a.range_km && a.range_sweep.empty()) throw UsageError("--range or --range-sweep is required");
  if (a.range_km && !a.range_sweep.empty()) throw UsageError("--range and --range-sweep are exclusive");
  if (!(std::abs(a.bearing_deg) < 90.0)) {
    throw UsageError("--bearing: must lie strictly inside (-90, 90) degrees");
  }
  if (a.nh < 1 || a.nh > cfg.radar.n_h_total) {
    throw UsageError("--nh: must lie in [1, " + std::to_string(cfg.radar.n_h_total) + "]");
  }

  const ControlPoint cp{a.td_ms / 1000.0, a.ft_hz, a.nh};
  const UtilityShape shape = cfg.utility_shape();
  const auto eval_at = [&](double range_km) {
    if (!(range_km > 0.0)) throw UsageError("--range: must be > 0");
    const Environment env{range_km * 1000.0, rad(a.bearing_deg), a.rcs_m2, a.maneuver_std, a.corr_time};
    try {
      return evaluation_json(evaluate(cp, env, cfg.radar, shape), range_km);
    } catch (const std::domain_error& e) {
      throw UsageError(e.what());
    }
  };

  if (a.range_km) {
    out << eval_at(*a.range_km).dump(2) << '\n';
  } else {
    ordered_json rows = ordered_json::array();
    for (double r : parse_range_sweep(a.range_sweep)) rows.push_back(eval_at(r));
    out << rows.dump(2) << '\n';
  }
  return kOk;
}

// ------------------------------------------------------------ allocate

struct AllocateArgs {
  std::string config;
  double budget = 0.0;
  std::string grid = "split";
  std::optional<std::uint64_t> scene_seed;
  std::string out_dir = ".";
};

int cmd_allocate(const AllocateArgs& a, std::ostream& out) {
  RunConfig cfg = load(a.config);
  if (!(a.budget > 0.0)) throw UsageError("--budget: must be > 0");
  ControlGrid grid;
  try {
    grid = cfg.grid(a.grid);
  } catch (const ConfigError&) {
    throw UsageError("--grid: unknown grid '" + a.grid + "'");
  }
  if (a.scene_seed) cfg.seed = *a.scene_seed;

  const Scene scene = generate_scene(cfg.scene_config());
  const auto majorants = scene_majorants(scene, grid, cfg.radar, cfg.utility_shape(), cfg.majorant);
  const AllocationResult result = allocate(majorants, a.budget);

  std::string csv = std::string(kSchemaLine) + "\n";
  csv +=
      "task,weight,type,range_km,bearing_deg,rcs_m2,maneuver_std_mps2,corr_time_s,"
      "allocated,t_d_ms,f_t_hz,n_h,quality_mrad,resource,weighted_utility\n";
  for (std::size_t k = 0; k < scene.tasks.size(); ++k) {
    const SceneTask& t = scene.tasks[k];
    csv += fmt::format("{},{},{},{},{},{},{},{},", k, fixed(t.weight, 6),
                       t.type == TargetType::kTypeI ? "I" : "II", fixed(t.env.range / 1000.0, 4),
                       fixed(deg(t.env.bearing), 4), fixed(t.env.rcs, 6), fixed(t.env.maneuver_std, 4),
                       fixed(t.env.corr_time, 4));
    const auto& choice = result.assignments[k].choice;
    if (choice) {
      csv += fmt::format("1,{},{},{},{},{},{}\n", fixed(choice->control.t_d * 1000.0, 4),
                         fixed(choice->control.f_t, 4), choice->control.n_h,
                         fixed(choice->quality * 1e3, 4), fixed(choice->resource, 6),
                         fixed(choice->weighted_utility, 6));
    } else {
      csv += "0,,,,,,\n";
    }
  }

  ordered_json summary;
  summary["grid"] = a.grid;
  summary["budget"] = a.budget;
  summary["scene_seed"] = cfg.seed;
  summary["n_tasks"] = scene.tasks.size();
  summary["total_resource"] = round_to(result.total_resource, 6);
  summary["total_utility"] = round_to(result.total_utility, 6);
  summary["active_tracks"] = result.active_track_count;

  const fs::path dir(a.out_dir);
  ensure_directory(dir);
  write_file_atomic(dir / "allocation.csv", csv);
  write_file_atomic(dir / "summary.json", summary.dump(2) + "\n");
  write_file_atomic(dir / "scene.json", scene_to_json(scene).dump(2) + "\n");
  out << summary.dump(2) << '\n';
  return kOk;
}

// --------------------------------------------------------------- sweep

struct SweepArgs {
  std::string config;
  std::string out_dir;
  std::optional<int> n_mc;
};

std::string aggregate_csv(const std::vector<CellAggregate>& cells,
                          const std::function<std::optional<Stats>(const CellAggregate&)>& pick,
                          int decimals) {
  std::string csv = std::string(kSchemaLine) + "\nbudget,grid,mean,std,lo2sigma,hi2sigma\n";
  for (const auto& c : cells) {
    const auto s = pick(c);
    if (s) {
      csv += fmt::format("{},{},{},{},{},{}\n", fixed(c.budget, 6), c.grid, fixed(s->mean, decimals),
                         fixed(s->std, decimals), fixed(s->lo2sigma, decimals),
                         fixed(s->hi2sigma, decimals));
    } else {
      csv += fmt::format("{},{},,,,\n", fixed(c.budget, 6), c.grid);
    }
  }
  return csv;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  RunConfig cfg = load(a.config);
  if (a.n_mc) {
    if (*a.n_mc < 1) throw UsageError("--n-mc: must be >= 1");
    cfg.n_mc = *a.n_mc;
  }
  const unsigned threads = threads_from_env();
  const SweepConfig sweep = cfg.sweep_config();
  const SweepResult result = budget_sweep(sweep, cfg.radar, cfg.utility_shape(), threads);

  const fs::path dir(a.out_dir);
  ensure_directory(dir);
  ensure_directory(dir / "runs");

  write_file_atomic(dir / "active_tracks.csv",
                    aggregate_csv(result.cells, [](const CellAggregate& c) { return std::optional(c.active_tracks); }, 6));
  write_file_atomic(dir / "total_utility.csv",
                    aggregate_csv(result.cells, [](const CellAggregate& c) { return std::optional(c.total_utility); }, 6));
  write_file_atomic(dir / "mean_angular_error_mrad.csv",
                    aggregate_csv(result.cells, [](const CellAggregate& c) { return c.mean_angular_error_mrad; }, 4));

  std::string hist = std::string(kSchemaLine) + "\nbudget,n_h,mean_count\n";
  for (const auto& row : result.histogram) {
    hist += fmt::format("{},{},{}\n", fixed(row.budget, 6), row.n_h, fixed(row.mean_count, 6));
  }
  write_file_atomic(dir / "element_histogram.csv", hist);

  // Per-run values use shortest round-trip formatting so the aggregates can
  // be recomputed from these files exactly.
  for (std::size_t r = 0; r < result.runs.size(); ++r) {
    std::string csv = std::string(kSchemaLine) +
                      "\ngrid,budget,active_tracks,total_utility,mean_angular_error_mrad\n";
    for (const auto& rec : result.runs[r]) {
      csv += fmt::format("{},{},{},{},{}\n", rec.grid, rec.budget, rec.active_tracks, rec.total_utility,
                         rec.mean_angular_error_mrad ? fmt::format("{}", *rec.mean_angular_error_mrad)
                                                     : std::string());
    }
    write_file_atomic(dir / "runs" / fmt::format("run_{}.csv", r), csv);
  }

  ordered_json summary;
  summary["n_mc"] = sweep.n_mc;
  summary["budgets"] = sweep.budgets.size();
  summary["grids"] = cfg.sweep_grids;
  summary["out"] = dir.string();
  out << summary.dump(2) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radar resource management for split-aperture phased arrays", "sapa_rrm"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate one task at one control point (JSON to stdout)");
  eval->add_option("--config", eval_args.config, "JSON config file (defaults when omitted)");
  eval->add_option("--range", eval_args.range_km, "Target range [km]");
  eval->add_option("--range-sweep", eval_args.range_sweep, "Range sweep start:step:stop [km]");
  eval->add_option("--bearing", eval_args.bearing_deg, "Bearing off boresight [deg]")->required();
  eval->add_option("--rcs", eval_args.rcs_m2, "Radar cross section [m^2]")->required()->check(CLI::PositiveNumber);
  eval->add_option("--maneuver-std", eval_args.maneuver_std, "Singer acceleration std [m/s^2]")
      ->required()->check(CLI::PositiveNumber);
  eval->add_option("--corr-time", eval_args.corr_time, "Singer correlation time [s]")
      ->required()->check(CLI::PositiveNumber);
  eval->add_option("--td", eval_args.td_ms, "Coherent integration time [ms]")->required()->check(CLI::PositiveNumber);
  eval->add_option("--ft", eval_args.ft_hz, "Track update frequency [Hz]")->required()->check(CLI::PositiveNumber);
  eval->add_option("--nh", eval_args.nh, "Horizontal elements")->required();

  AllocateArgs alloc_args;
  auto* alloc = app.add_subcommand("allocate", "Solve one scene at one budget");
  alloc->add_option("--config", alloc_args.config, "JSON config file (defaults when omitted)");
  alloc->add_option("--budget", alloc_args.budget, "Radar time budget r_tot in (0, 1]")->required();
  alloc->add_option("--grid", alloc_args.grid, "Named control grid")->capture_default_str();
  alloc->add_option("--scene-seed", alloc_args.scene_seed, "Override the scene seed");
  alloc->add_option("--out", alloc_args.out_dir, "Output directory")->capture_default_str();

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo budget sweep over the configured grids");
  sweep->add_option("--config", sweep_args.config, "JSON config file (defaults when omitted)");
  sweep->add_option("--out", sweep_args.out_dir, "Output directory")->required();
  sweep->add_option("--n-mc", sweep_args.n_mc, "Override the Monte Carlo run count");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (eval->parsed()) return cmd_eval(eval_args, out);
    if (alloc->parsed()) return cmd_allocate(alloc_args, out);
    if (sweep->parsed()) return cmd_sweep(sweep_args, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace sapa::cli
