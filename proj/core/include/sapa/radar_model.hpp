#ifndef SAPA_RADAR_MODEL_HPP
#define SAPA_RADAR_MODEL_HPP

// Per-task quality / resource / utility model for active tracking on a
// horizontally split phased array. Everything here is a pure function of its
// arguments; all quantities are SI (seconds, Hz, meters, radians, m^2) and
// SNR values are linear power ratios unless a name says otherwise.

#include <optional>

namespace sapa {

/// Aggregate radar parameters shared by every task.
struct RadarConstants {
  double k_rad = 2.662e21;   // m^2/s, folds transmit power, gain, noise
  int n_h_total = 48;        // horizontal elements of the full array
  double p_fa = 1e-4;        // false alarm rate
  double alpha_bw = 0.886;   // rad*elements; boresight half beamwidth = alpha_bw / n_h
  double snr_floor_db = 10.0;
  double snr_cap_db = 40.0;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  double snr_floor_linear() const;
  double snr_cap_linear() const;

  friend bool operator==(const RadarConstants&, const RadarConstants&) = default;
};

/// One candidate setting for a tracking task.
struct ControlPoint {
  double t_d = 0.0;  // coherent integration time, s
  double f_t = 0.0;  // track update frequency, Hz
  int n_h = 0;       // horizontal elements assigned to the task

  void validate(const RadarConstants& consts) const;

  friend bool operator==(const ControlPoint&, const ControlPoint&) = default;
};

/// Target state as seen by the tracker.
struct Environment {
  double range = 0.0;         // m
  double bearing = 0.0;       // rad, off boresight
  double rcs = 0.0;           // m^2
  double maneuver_std = 0.0;  // Singer acceleration std, m/s^2
  double corr_time = 0.0;     // Singer correlation time, s

  void validate() const;

  friend bool operator==(const Environment&, const Environment&) = default;
};

/// Linear utility ramp: 1 at or below q_max, 0 at or above q_min.
struct UtilityShape {
  double q_min = 3e-3;  // rad, worst acceptable angular error
  double q_max = 1e-3;  // rad, best rewarded angular error

  void validate() const;

  friend bool operator==(const UtilityShape&, const UtilityShape&) = default;
};

struct ClampedSnr {
  double value = 0.0;  // linear, never above the cap
  bool feasible = false;
};

/// Full evaluation of one task at one control point. quality, resource and
/// utility are empty exactly when the unclamped SNR falls below the floor.
struct TaskEvaluation {
  std::optional<double> quality;   // rad
  std::optional<double> resource;  // fraction of radar time
  std::optional<double> utility;   // [0, 1]
  double snr_unclamped = 0.0;
  double snr_linear = 0.0;  // clamped to the cap
  double track_sharpness = 0.0;
  double p_d = 0.0;
  double n_looks = 0.0;
  bool feasible = false;
};

/// Split-aperture cross-talk loss, 0.8 + 0.2 * n_h / n_h_total.
double cross_talk_loss(int n_h, const RadarConstants& consts);

/// Unclamped single-look SNR: k_rad * n_h^3 * t_d * cos^2(bearing) * rcs / range^4.
double snr0(const ControlPoint& cp, const Environment& env, const RadarConstants& consts);

/// Caps the SNR at snr_cap_db and flags values below snr_floor_db as infeasible.
ClampedSnr clamp_snr(double snr_linear, const RadarConstants& consts);

/// Half beamwidth alpha_bw / n_h, broadened by 1 / cos(bearing) off boresight.
double beamwidth(const ControlPoint& cp, const Environment& env, const RadarConstants& consts);

/// Track sharpness v0: the unique positive root of
///   1 + (beta / 2 + 2) v^2 - alpha * beta * v^2.4 = 0.
/// Throws std::domain_error unless alpha > 0 and beta > 0.
double track_sharpness(double alpha, double beta);

double alpha_factor(const ControlPoint& cp, const Environment& env, double theta_bw);
double beta_factor(double snr_clamped, double xi, const RadarConstants& consts);

/// Angular estimation error theta_bw * v0, or empty when the SNR is below the floor.
std::optional<double> quality(const ControlPoint& cp, const Environment& env,
                              const RadarConstants& consts);

/// Swerling I detection probability p_fa^(1 / (1 + xi * snr)).
double detection_probability(double snr_clamped, double xi, const RadarConstants& consts);
double gamma_factor(double snr_clamped, double xi, const RadarConstants& consts);
double expected_looks(double v0, double gamma, double p_d);

/// Steady-state time loading n_looks * t_d * f_t * n_h / n_h_total, or empty
/// when the SNR is below the floor.
std::optional<double> resource(const ControlPoint& cp, const Environment& env,
                               const RadarConstants& consts);

double utility(double q, const UtilityShape& shape);

/// Validates inputs (std::domain_error / std::invalid_argument) and evaluates
/// the whole model once. Never throws for an infeasible SNR.
TaskEvaluation evaluate(const ControlPoint& cp, const Environment& env,
                        const RadarConstants& consts, const UtilityShape& shape);

/// Radar constant from its physical factors. noise_figure and losses are
/// linear ratios, t0 in kelvin, wavelength in meters.
double derive_k_rad(double p_avg, double wavelength, double aperture_efficiency,
                    int n_v_total, int n_h_total, double t0, double noise_figure,
                    double losses);

double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace sapa

#endif  // SAPA_RADAR_MODEL_HPP
