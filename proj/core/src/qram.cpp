#include "sapa/qram.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <queue>

#include "model_detail.hpp"

namespace sapa {
namespace {

template <typename T>
bool strictly_increasing(const std::vector<T>& v) {
  return std::adjacent_find(v.begin(), v.end(), [](T a, T b) { return !(a < b); }) == v.end();
}

// Positive when `p` lies strictly above the line a -> b (in the
// resource/utility plane, resource on the horizontal axis).
double cross(double ar, double au, double br, double bu, double pr, double pu) {
  return (br - ar) * (pu - au) - (bu - au) * (pr - ar);
}

// Pops trailing vertices that are on or below the chord to `p`. The origin
// sits implicitly before hull[0].
void push_concave(std::vector<SetPoint>& hull, const SetPoint& p) {
  while (!hull.empty()) {
    const double ar = hull.size() >= 2 ? hull[hull.size() - 2].resource : 0.0;
    const double au = hull.size() >= 2 ? hull[hull.size() - 2].weighted_utility : 0.0;
    const SetPoint& b = hull.back();
    if (cross(ar, au, b.resource, b.weighted_utility, p.resource, p.weighted_utility) >= 0.0) {
      hull.pop_back();
    } else {
      break;
    }
  }
  hull.push_back(p);
}

AllocationResult finalize(std::vector<Assignment> assignments, double total_resource) {
  AllocationResult out;
  out.assignments = std::move(assignments);
  out.total_resource = total_resource;
  for (const auto& a : out.assignments) {
    if (!a.allocated()) continue;
    out.total_utility += a.choice->weighted_utility;
    ++out.active_track_count;
  }
  return out;
}

}  // namespace

std::vector<double> arithmetic_sequence(double start, double step, double stop) {
  if (!(step > 0.0) || !(stop >= start) || !std::isfinite(start) || !std::isfinite(stop)) {
    throw std::invalid_argument("arithmetic sequence requires step > 0 and stop >= start");
  }
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  if (std::abs(out.back() - stop) <= 1e-9 * step) out.back() = stop;
  return out;
}

void ControlGrid::validate(const RadarConstants& consts) const {
  if (t_d_values.empty() || f_t_values.empty() || n_h_values.empty()) {
    throw std::invalid_argument("control grid lists must be non-empty");
  }
  if (!strictly_increasing(t_d_values) || !strictly_increasing(f_t_values) ||
      !strictly_increasing(n_h_values)) {
    throw std::invalid_argument("control grid lists must be strictly increasing");
  }
  if (!(t_d_values.front() > 0.0) || !(f_t_values.front() > 0.0)) {
    throw std::invalid_argument("control grid t_d and f_t values must be > 0");
  }
  if (n_h_values.front() < 1 || n_h_values.back() > consts.n_h_total) {
    throw std::invalid_argument("control grid n_h values must lie in [1, n_h_total]");
  }
}

bool ControlGrid::is_full_aperture(const RadarConstants& consts) const {
  return n_h_values.size() == 1 && n_h_values.front() == consts.n_h_total;
}

ControlGrid ControlGrid::reference_split() {
  ControlGrid grid;
  for (double ms : arithmetic_sequence(4.0, 0.6, 64.0)) grid.t_d_values.push_back(ms / 1000.0);
  grid.f_t_values = arithmetic_sequence(0.1, 0.1, 6.0);
  for (int n = 6; n <= 48; n += 6) grid.n_h_values.push_back(n);
  return grid;
}

ControlGrid ControlGrid::reference_full(int n_h_total) {
  ControlGrid grid = reference_split();
  grid.n_h_values = {n_h_total};
  return grid;
}

double ConcaveMajorant::interpolate(double resource) const {
  double r0 = 0.0, u0 = 0.0;
  for (const auto& v : vertices) {
    if (resource <= v.resource) {
      return u0 + (v.weighted_utility - u0) * (resource - r0) / (v.resource - r0);
    }
    r0 = v.resource;
    u0 = v.weighted_utility;
  }
  return u0;
}

std::vector<SetPoint> enumerate_setpoints(const Task& task, const ControlGrid& grid,
                                          const RadarConstants& consts,
                                          const UtilityShape& shape) {
  consts.validate();
  grid.validate(consts);
  task.env.validate();

  const std::size_t n_td = grid.t_d_values.size();
  const std::size_t n_ft = grid.f_t_values.size();
  const std::size_t n_nh = grid.n_h_values.size();

  // (t_d, n_h) terms and (f_t, n_h) alpha are hoisted; the composition below
  // matches evaluate() operation for operation.
  std::vector<double> theta_bw(n_nh);
  for (std::size_t h = 0; h < n_nh; ++h) {
    theta_bw[h] = beamwidth(ControlPoint{1.0, 1.0, grid.n_h_values[h]}, task.env, consts);
  }
  std::vector<double> alpha(n_ft * n_nh);
  for (std::size_t f = 0; f < n_ft; ++f) {
    for (std::size_t h = 0; h < n_nh; ++h) {
      const ControlPoint cp{1.0, grid.f_t_values[f], grid.n_h_values[h]};
      alpha[f * n_nh + h] = alpha_factor(cp, task.env, theta_bw[h]);
    }
  }

  std::vector<SetPoint> out;
  std::vector<detail::SnrTerms> terms(n_nh);
  for (std::size_t d = 0; d < n_td; ++d) {
    bool any_feasible = false;
    for (std::size_t h = 0; h < n_nh; ++h) {
      terms[h] = detail::snr_terms(ControlPoint{grid.t_d_values[d], 1.0, grid.n_h_values[h]},
                                   task.env, consts);
      any_feasible = any_feasible || terms[h].clamped.feasible;
    }
    if (!any_feasible) continue;
    for (std::size_t f = 0; f < n_ft; ++f) {
      for (std::size_t h = 0; h < n_nh; ++h) {
        if (!terms[h].clamped.feasible) continue;
        const ControlPoint cp{grid.t_d_values[d], grid.f_t_values[f], grid.n_h_values[h]};
        const TaskEvaluation e =
            detail::finish(terms[h], theta_bw[h], alpha[f * n_nh + h], cp, consts, shape);
        out.push_back(SetPoint{cp, *e.resource, task.weight * *e.utility, *e.quality});
      }
    }
  }
  return out;
}

ConcaveMajorant build_majorant(std::span<const SetPoint> points) {
  // Anything costlier than the cheapest point at peak utility is dominated;
  // dropping it up front keeps the sort small on saturated grids.
  double u_peak = 0.0;
  double r_cut = 0.0;
  for (const SetPoint& p : points) {
    if (!(p.weighted_utility > 0.0 && p.resource > 0.0)) continue;
    if (p.weighted_utility > u_peak || (p.weighted_utility == u_peak && p.resource < r_cut)) {
      u_peak = p.weighted_utility;
      r_cut = p.resource;
    }
  }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const SetPoint& p = points[i];
    if (p.weighted_utility > 0.0 && p.resource > 0.0 && p.resource <= r_cut) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const SetPoint& pa = points[a];
    const SetPoint& pb = points[b];
    if (pa.resource != pb.resource) return pa.resource < pb.resource;
    if (pa.weighted_utility != pb.weighted_utility) return pa.weighted_utility > pb.weighted_utility;
    return a < b;
  });

  ConcaveMajorant hull;
  for (std::size_t i : order) {
    const SetPoint& p = points[i];
    const double best_u = hull.vertices.empty() ? 0.0 : hull.vertices.back().weighted_utility;
    if (p.weighted_utility <= best_u) continue;  // dominated
    push_concave(hull.vertices, p);
  }
  return hull;
}

ConcaveMajorant fast_traversal_majorant(std::span<const SetPoint> points) {
  std::vector<SetPoint> path;
  double cur_r = 0.0, cur_u = 0.0;
  for (;;) {
    std::size_t best = points.size();
    double best_slope = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const SetPoint& p = points[i];
      if (!(p.resource > cur_r && p.weighted_utility > cur_u)) continue;
      const double slope = (p.weighted_utility - cur_u) / (p.resource - cur_r);
      if (best == points.size() || slope > best_slope ||
          (slope == best_slope && p.resource > points[best].resource)) {
        best = i;
        best_slope = slope;
      }
    }
    if (best == points.size()) break;
    path.push_back(points[best]);
    cur_r = points[best].resource;
    cur_u = points[best].weighted_utility;
  }

  ConcaveMajorant hull;
  for (const auto& p : path) push_concave(hull.vertices, p);
  return hull;
}

AllocationResult allocate(std::span<const ConcaveMajorant> majorants, double r_tot) {
  if (!(r_tot > 0.0) || !std::isfinite(r_tot)) {
    throw std::domain_error("allocate requires a positive finite budget");
  }

  struct Segment {
    double slope;
    std::size_t task;
    std::size_t index;  // vertex reached by taking this segment
  };
  const auto later = [](const Segment& a, const Segment& b) {
    if (a.slope != b.slope) return a.slope < b.slope;
    if (a.task != b.task) return a.task > b.task;
    return a.index > b.index;
  };
  const auto segment = [&](std::size_t task, std::size_t index) {
    const auto& v = majorants[task].vertices;
    const double r0 = index == 0 ? 0.0 : v[index - 1].resource;
    const double u0 = index == 0 ? 0.0 : v[index - 1].weighted_utility;
    assert(v[index].resource > r0);
    return Segment{(v[index].weighted_utility - u0) / (v[index].resource - r0), task, index};
  };

  // Only the next segment of each task is ever queued, so a task advances
  // along its own hull in order.
  std::priority_queue<Segment, std::vector<Segment>, decltype(later)> queue(later);
  for (std::size_t k = 0; k < majorants.size(); ++k) {
    if (!majorants[k].empty()) queue.push(segment(k, 0));
  }

  std::vector<Assignment> assignments(majorants.size());
  double total = 0.0;
  while (!queue.empty()) {
    const Segment s = queue.top();
    queue.pop();
    const auto& v = majorants[s.task].vertices;
    const double r0 = s.index == 0 ? 0.0 : v[s.index - 1].resource;
    const double next_total = total + (v[s.index].resource - r0);
    if (next_total > r_tot) continue;  // does not fit; this task stays put
    total = next_total;
    assignments[s.task].choice = v[s.index];
    if (s.index + 1 < v.size()) queue.push(segment(s.task, s.index + 1));
  }
  return finalize(std::move(assignments), total);
}

AllocationResult brute_force_allocate(std::span<const std::vector<SetPoint>> setpoints,
                                      double r_tot, double max_states) {
  double states = 1.0;
  for (const auto& list : setpoints) states *= static_cast<double>(list.size() + 1);
  if (states > max_states) {
    throw InstanceTooLarge("brute force instance has " + std::to_string(states) +
                           " states, limit " + std::to_string(max_states));
  }

  const std::size_t n = setpoints.size();
  std::vector<int> pick(n, -1), best_pick(n, -1);
  double best_utility = 0.0, best_resource = 0.0;

  // Depth-first over tasks; -1 means the task is left unallocated.
  auto search = [&](auto&& self, std::size_t k, double used, double utility) -> void {
    if (k == n) {
      if (utility > best_utility) {
        best_utility = utility;
        best_resource = used;
        best_pick = pick;
      }
      return;
    }
    pick[k] = -1;
    self(self, k + 1, used, utility);
    for (std::size_t i = 0; i < setpoints[k].size(); ++i) {
      const SetPoint& p = setpoints[k][i];
      if (used + p.resource > r_tot) continue;
      pick[k] = static_cast<int>(i);
      self(self, k + 1, used + p.resource, utility + p.weighted_utility);
    }
    pick[k] = -1;
  };
  search(search, 0, 0.0, 0.0);

  std::vector<Assignment> assignments(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (best_pick[k] >= 0) assignments[k].choice = setpoints[k][static_cast<std::size_t>(best_pick[k])];
  }
  return finalize(std::move(assignments), best_resource);
}

}  // namespace sapa
