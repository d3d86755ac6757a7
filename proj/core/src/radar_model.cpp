#include "sapa/radar_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "model_detail.hpp"

namespace sapa {
namespace {

constexpr double kBoltzmann = 1.380649e-23;  // J/K
constexpr double kSharpnessExponent = 2.4;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void RadarConstants::validate() const {
  require(std::isfinite(k_rad) && k_rad > 0.0, "radar.k_rad: must be > 0");
  require(n_h_total >= 1, "radar.n_h_total: must be >= 1");
  require(p_fa > 0.0 && p_fa < 1.0, "radar.p_fa: must lie in (0, 1)");
  require(std::isfinite(alpha_bw) && alpha_bw > 0.0, "radar.alpha_bw: must be > 0");
  require(std::isfinite(snr_floor_db) && std::isfinite(snr_cap_db) && snr_floor_db < snr_cap_db,
          "radar.snr_floor_db: must be below radar.snr_cap_db");
}

double RadarConstants::snr_floor_linear() const { return db_to_linear(snr_floor_db); }
double RadarConstants::snr_cap_linear() const { return db_to_linear(snr_cap_db); }

void ControlPoint::validate(const RadarConstants& consts) const {
  if (!(std::isfinite(t_d) && t_d > 0.0)) throw std::domain_error("t_d must be > 0");
  if (!(std::isfinite(f_t) && f_t > 0.0)) throw std::domain_error("f_t must be > 0");
  if (n_h < 1 || n_h > consts.n_h_total) {
    throw std::domain_error("n_h must lie in [1, " + std::to_string(consts.n_h_total) + "]");
  }
}

void Environment::validate() const {
  if (!(std::isfinite(range) && range > 0.0)) throw std::domain_error("range must be > 0");
  if (!(std::abs(bearing) < std::numbers::pi / 2)) {
    throw std::domain_error("|bearing| must be below 90 degrees");
  }
  if (!(std::isfinite(rcs) && rcs > 0.0)) throw std::domain_error("rcs must be > 0");
  if (!(std::isfinite(maneuver_std) && maneuver_std > 0.0)) {
    throw std::domain_error("maneuver_std must be > 0");
  }
  if (!(std::isfinite(corr_time) && corr_time > 0.0)) {
    throw std::domain_error("corr_time must be > 0");
  }
}

void UtilityShape::validate() const {
  require(q_max > 0.0 && q_max < q_min, "utility requires 0 < q_max < q_min");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double cross_talk_loss(int n_h, const RadarConstants& consts) {
  if (n_h < 1 || n_h > consts.n_h_total) {
    throw std::domain_error("n_h out of range for cross-talk loss");
  }
  return 0.8 + 0.2 * static_cast<double>(n_h) / static_cast<double>(consts.n_h_total);
}

double snr0(const ControlPoint& cp, const Environment& env, const RadarConstants& consts) {
  const double n = static_cast<double>(cp.n_h);
  const double c = std::cos(env.bearing);
  const double r2 = env.range * env.range;
  return consts.k_rad * (n * n * n) * cp.t_d * (c * c) * env.rcs / (r2 * r2);
}

ClampedSnr clamp_snr(double snr_linear, const RadarConstants& consts) {
  return {std::min(snr_linear, consts.snr_cap_linear()), snr_linear >= consts.snr_floor_linear()};
}

double beamwidth(const ControlPoint& cp, const Environment& env, const RadarConstants& consts) {
  if (!(std::abs(env.bearing) < std::numbers::pi / 2)) {
    throw std::domain_error("beamwidth undefined at |bearing| >= 90 degrees");
  }
  const double boresight = consts.alpha_bw / static_cast<double>(cp.n_h);
  return boresight / std::cos(env.bearing);
}

double track_sharpness(double alpha, double beta) {
  if (!(alpha > 0.0 && beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::domain_error("track_sharpness requires alpha > 0 and beta > 0");
  }
  // Work in s = ln v on h(s) = ln(1 + a v^2) - ln(b v^2.4), which has the
  // sign of the polynomial form. h is strictly decreasing and convex with
  // h' in (-2.4, -0.4), so the root is unique and a bracket is cheap.
  const double log_a = std::log(beta / 2.0 + 2.0);
  const double log_b = std::log(alpha) + std::log(beta);
  const double ln2 = std::numbers::ln2;

  // b v^2.4 = 1 + a v^2 bounds the root between max(1, a v^2) and twice that.
  double lo = std::max(-log_b / kSharpnessExponent, 2.5 * (log_a - log_b)) - 1e-9;
  double hi = std::max((ln2 - log_b) / kSharpnessExponent, 2.5 * (ln2 + log_a - log_b)) + 1e-9;

  // Halley steps (h'' = 4 sigma (1 - sigma) is free once sigma is known),
  // falling back to bisection whenever a step leaves the bracket.
  double s = lo;
  for (int iter = 0; iter < 200; ++iter) {
    const double t = log_a + 2.0 * s;
    const double e = std::exp(-std::abs(t));
    const double softplus = (t > 0.0 ? t : 0.0) + std::log1p(e);
    const double sigma = t > 0.0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
    const double h = softplus - kSharpnessExponent * s - log_b;
    if (h == 0.0) break;
    if (h > 0.0) {
      lo = s;
    } else {
      hi = s;
    }
    const double d1 = 2.0 * sigma - kSharpnessExponent;
    const double d2 = 4.0 * sigma * (1.0 - sigma);
    double next = s - 2.0 * h * d1 / (2.0 * d1 * d1 - h * d2);
    const bool halley = next > lo && next < hi;
    if (!halley) next = 0.5 * (lo + hi);
    const double step = std::abs(next - s);
    s = next;
    // Cubic convergence: after a Halley step this small the error in s is at
    // rounding level. A bisection step only halves it, so keep going.
    if ((halley && step < 1e-11) || hi - lo <= 4e-16 * std::max(1.0, std::abs(s))) break;
  }
  return std::exp(s);
}

double alpha_factor(const ControlPoint& cp, const Environment& env, double theta_bw) {
  const double x = env.range * theta_bw * std::sqrt(env.corr_time) / env.maneuver_std;
  return 0.4 * cp.f_t * std::pow(x, 0.4);
}

double beta_factor(double snr_clamped, double xi, const RadarConstants& consts) {
  return xi * snr_clamped - std::log(consts.p_fa);
}

double detection_probability(double snr_clamped, double xi, const RadarConstants& consts) {
  return std::pow(consts.p_fa, 1.0 / (1.0 + xi * snr_clamped));
}

double gamma_factor(double snr_clamped, double xi, const RadarConstants& consts) {
  return 1.0 + 14.0 * std::sqrt(std::abs(std::log(consts.p_fa)) / (xi * snr_clamped));
}

double expected_looks(double v0, double gamma, double p_d) {
  const double gv = gamma * v0 * v0;
  return (1.0 / p_d) * std::sqrt(1.0 + gv * gv);
}

double utility(double q, const UtilityShape& shape) {
  return std::clamp((q - shape.q_min) / (shape.q_max - shape.q_min), 0.0, 1.0);
}

namespace detail {

SnrTerms snr_terms(const ControlPoint& cp, const Environment& env, const RadarConstants& consts) {
  SnrTerms terms;
  terms.unclamped = snr0(cp, env, consts);
  terms.clamped = clamp_snr(terms.unclamped, consts);
  terms.xi = cross_talk_loss(cp.n_h, consts);
  terms.beta = beta_factor(terms.clamped.value, terms.xi, consts);
  terms.gamma = gamma_factor(terms.clamped.value, terms.xi, consts);
  terms.p_d = detection_probability(terms.clamped.value, terms.xi, consts);
  return terms;
}

TaskEvaluation finish(const SnrTerms& terms, double theta_bw, double alpha,
                      const ControlPoint& cp, const RadarConstants& consts,
                      const UtilityShape& shape) {
  TaskEvaluation out;
  out.snr_unclamped = terms.unclamped;
  out.snr_linear = terms.clamped.value;
  out.feasible = terms.clamped.feasible;
  out.p_d = terms.p_d;
  out.track_sharpness = track_sharpness(alpha, terms.beta);
  out.n_looks = expected_looks(out.track_sharpness, terms.gamma, terms.p_d);
  if (!out.feasible) return out;

  const double q = theta_bw * out.track_sharpness;
  const double split_ratio = static_cast<double>(cp.n_h) / static_cast<double>(consts.n_h_total);
  out.quality = q;
  out.resource = out.n_looks * cp.t_d * cp.f_t * split_ratio;
  out.utility = utility(q, shape);
  return out;
}

}  // namespace detail

TaskEvaluation evaluate(const ControlPoint& cp, const Environment& env,
                        const RadarConstants& consts, const UtilityShape& shape) {
  consts.validate();
  cp.validate(consts);
  env.validate();
  const double theta_bw = beamwidth(cp, env, consts);
  const double alpha = alpha_factor(cp, env, theta_bw);
  return detail::finish(detail::snr_terms(cp, env, consts), theta_bw, alpha, cp, consts, shape);
}

std::optional<double> quality(const ControlPoint& cp, const Environment& env,
                              const RadarConstants& consts) {
  return evaluate(cp, env, consts, UtilityShape{}).quality;
}

std::optional<double> resource(const ControlPoint& cp, const Environment& env,
                               const RadarConstants& consts) {
  return evaluate(cp, env, consts, UtilityShape{}).resource;
}

double derive_k_rad(double p_avg, double wavelength, double aperture_efficiency,
                    int n_v_total, int n_h_total, double t0, double noise_figure,
                    double losses) {
  if (!(p_avg > 0 && wavelength > 0 && aperture_efficiency > 0 && n_v_total > 0 &&
        n_h_total > 0 && t0 > 0 && noise_figure > 0 && losses > 0)) {
    throw std::domain_error("derive_k_rad requires positive inputs");
  }
  const double nv = static_cast<double>(n_v_total);
  const double num = p_avg * wavelength * wavelength * aperture_efficiency * aperture_efficiency * nv * nv;
  const double den = 64.0 * std::numbers::pi * static_cast<double>(n_h_total) * kBoltzmann * t0 *
                     noise_figure * losses;
  return num / den;
}

}  // namespace sapa
