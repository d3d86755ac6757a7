#ifndef SAPA_QRAM_HPP
#define SAPA_QRAM_HPP

// Q-RAM style allocation of a single radar time budget across tracking tasks:
// set-point enumeration, per-task concave majorants, a global greedy over
// marginal utility, and an exhaustive oracle for small instances.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sapa/radar_model.hpp"

namespace sapa {

/// Discrete control space. Values are SI (s, Hz, elements).
struct ControlGrid {
  std::vector<double> t_d_values;
  std::vector<double> f_t_values;
  std::vector<int> n_h_values;

  /// Non-empty, strictly increasing, within the radar's element count.
  void validate(const RadarConstants& consts) const;
  bool is_full_aperture(const RadarConstants& consts) const;
  std::size_t size() const { return t_d_values.size() * f_t_values.size() * n_h_values.size(); }

  /// 4..64 ms step 0.6, 0.1..6 Hz step 0.1, elements 6..48 step 6.
  static ControlGrid reference_split();
  /// Same timing grid with the whole array on every task.
  static ControlGrid reference_full(int n_h_total = 48);

  friend bool operator==(const ControlGrid&, const ControlGrid&) = default;
};

/// start, start + step, ..., stop with each value computed as start + i * step;
/// a final value within 1e-9 steps of `stop` is snapped to it.
std::vector<double> arithmetic_sequence(double start, double step, double stop);

struct Task {
  Environment env;
  double weight = 0.0;
};

/// A feasible (resource, weighted utility) option for one task.
struct SetPoint {
  ControlPoint control;
  double resource = 0.0;
  double weighted_utility = 0.0;
  double quality = 0.0;  // rad, kept for reporting

  friend bool operator==(const SetPoint&, const SetPoint&) = default;
};

/// Upper-left concave frontier of a task's set-points. The zero point
/// (no resource, no utility) is implicit and not stored; `vertices` are
/// strictly increasing in resource and utility with strictly decreasing
/// marginal utility.
struct ConcaveMajorant {
  std::vector<SetPoint> vertices;

  bool empty() const { return vertices.empty(); }
  /// Piecewise-linear interpolation through the origin and the vertices;
  /// flat beyond the last vertex.
  double interpolate(double resource) const;
};

struct Assignment {
  std::optional<SetPoint> choice;  // empty: task unallocated

  bool allocated() const { return choice.has_value(); }
};

struct AllocationResult {
  std::vector<Assignment> assignments;  // one per task, input order
  double total_resource = 0.0;  // accepted increments summed in acceptance order
  double total_utility = 0.0;   // sum of chosen weighted utilities, task order
  int active_track_count = 0;
};

class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every feasible grid tuple for `task`, ordered t_d-major, then f_t, then n_h.
std::vector<SetPoint> enumerate_setpoints(const Task& task, const ControlGrid& grid,
                                          const RadarConstants& consts,
                                          const UtilityShape& shape);

/// Exact upper convex hull through the origin (monotone chain).
ConcaveMajorant build_majorant(std::span<const SetPoint> points);

/// Approximate frontier built by marching from the current vertex to the
/// remaining point of highest marginal utility, followed by a concavity pass.
ConcaveMajorant fast_traversal_majorant(std::span<const SetPoint> points);

/// Greedy traversal of all hull segments in descending marginal utility.
/// Ties break on (task index, segment index). A segment that would overrun
/// the budget is skipped and freezes its task; later segments of other tasks
/// are still considered. Throws std::domain_error unless r_tot > 0.
AllocationResult allocate(std::span<const ConcaveMajorant> majorants, double r_tot);

/// Exhaustive multiple-choice knapsack over raw set-points (each task takes
/// one point or none). Throws InstanceTooLarge when prod(n_k + 1) > max_states.
AllocationResult brute_force_allocate(std::span<const std::vector<SetPoint>> setpoints,
                                      double r_tot, double max_states = 1e7);

}  // namespace sapa

#endif  // SAPA_QRAM_HPP
