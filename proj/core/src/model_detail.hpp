#ifndef SAPA_SRC_MODEL_DETAIL_HPP
#define SAPA_SRC_MODEL_DETAIL_HPP

#include "sapa/radar_model.hpp"

namespace sapa::detail {

// Terms that depend only on (t_d, n_h) for a given target. Splitting them out
// lets the set-point enumerator hoist them out of the f_t loop while producing
// bit-identical results to evaluate().
struct SnrTerms {
  double unclamped = 0.0;
  ClampedSnr clamped;
  double xi = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double p_d = 0.0;
};

SnrTerms snr_terms(const ControlPoint& cp, const Environment& env, const RadarConstants& consts);

// Completes an evaluation from hoisted terms. theta_bw and alpha must come from
// beamwidth() and alpha_factor() for the same cp / env.
TaskEvaluation finish(const SnrTerms& terms, double theta_bw, double alpha,
                      const ControlPoint& cp, const RadarConstants& consts,
                      const UtilityShape& shape);

}  // namespace sapa::detail

#endif  // SAPA_SRC_MODEL_DETAIL_HPP
