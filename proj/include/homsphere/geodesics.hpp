#pragma once

// Geodesics of left-invariant metrics and the closed-form Berger geodesics.
//
// A geodesic is tracked by its point g and body velocity a (coefficients of
// g^-1 c' against the Milnor frame). It solves
//   a_k' = -sum_ij a_i a_j G(i,j,k),      g' = g * (sum_i a_i E_i(e)).

#include <span>
#include <vector>

#include <Eigen/Core>

#include "homsphere/group.hpp"
#include "homsphere/milnor.hpp"

namespace homsphere {

struct GeodesicState {
  GroupPoint point;
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
};

struct TrajectorySample {
  double t = 0.0;
  GeodesicState state;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  /// max over steps of | |q| - 1 | measured before renormalization.
  double max_norm_defect = 0.0;
};

/// Fixed-step classical RK4 with renormalization of the quaternion after
/// every step.
struct IntegratorConfig {
  double step = 1e-3;
  bool renormalize = true;
};

/// Integrates from s0 over [0, t_end] (t_end may be negative). Samples are
/// taken at every step; the last step is shortened to land on t_end exactly.
Trajectory integrate_geodesic(const MilnorTriple<double>& m, const GeodesicState& s0, double t_end,
                              const IntegratorConfig& cfg = {});

/// States at the given non-decreasing, non-negative times, each reached
/// exactly by shortening the step that would overshoot it.
Trajectory sample_geodesic(const MilnorTriple<double>& m, const GeodesicState& s0, std::span<const double> times,
                           const IntegratorConfig& cfg = {});

/// max over samples of | |a| - 1 |.
double max_speed_drift(const Trajectory& traj);

/// Angle data of a unit-speed Berger geodesic through the identity making
/// angle theta with Y3:
///   alpha = cos(theta), beta = sin(theta), m = sqrt(alpha^2 + beta^2 / eps),
///   period T = 2 pi / m, shift S = alpha (1 - eps) T.
class BergerGeodesicSpec {
 public:
  BergerGeodesicSpec(double eps, double theta);

  double eps() const { return eps_; }
  double theta() const { return theta_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double frequency() const { return m_; }
  double period() const { return period_; }
  double shift() const { return shift_; }

  MilnorTriple<double> metric() const { return berger_triple(eps_); }
  /// c(0) = e, c'(0) = alpha Y3 + beta Y2.
  GeodesicState initial_state() const;

 private:
  double eps_, theta_, alpha_, beta_, m_, period_, shift_;
};

struct PeriodShift {
  double period;
  double shift;
};

/// (T, S) for eps > 0, theta in (0, pi). eps = 1 is allowed here (S = 0).
PeriodShift period_shift(double eps, double theta);

/// Closed-form geodesic with f(t) = cos(tm) + i alpha sin(tm)/m,
/// g(t) = i beta sin(tm) / (sqrt(eps) m) and phase p = alpha (1/eps - 1) t:
///   c(t) = [[f e^{ip}, g e^{-ip}], [g e^{ip}, conj(f) e^{-ip}]].
GroupPoint berger_geodesic(const BergerGeodesicSpec& spec, double t);

/// max_t |c(t + T) - phi^S(c(t))| over the closed form.
double verify_prop_geo(const BergerGeodesicSpec& spec, std::span<const double> times);
struct IntegratedCheck {
  double residual = 0.0;
  double max_speed_drift = 0.0;
  double max_norm_defect = 0.0;
  /// Last time reached by the integrator.
  double t_max = 0.0;
};

/// Same residual with the integrated trajectory in place of the closed form.
IntegratedCheck verify_prop_geo_integrated(const BergerGeodesicSpec& spec, std::span<const double> times,
                                           const IntegratorConfig& cfg = {});

/// Max pointwise |integrated - closed form| over [0, t_end] at the integrator
/// step.
double closed_form_deviation(const BergerGeodesicSpec& spec, double t_end, const IntegratorConfig& cfg = {});

/// Berger geodesic from an arbitrary start and initial velocity (Y-frame
/// coefficients). Reduced to the closed form by left translation and a
/// rotation about Y3 (conjugation by exp(l x3)); non-unit velocities are
/// handled by reparametrizing time. Velocities along +-Y3 follow the Hopf flow.
GroupPoint general_berger_geodesic(double eps, const GroupPoint& start, const Eigen::Vector3d& velocity,
                                   double t);

/// Unit vector of S^2 given by Ad(g) x3; constant along Y3-orbits.
Eigen::Vector3d hopf_projection(const GroupPoint& g);

}  // namespace homsphere
