#include "homsphere/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace homsphere {

namespace {

struct RawState {
  Eigen::Vector4d q;  // Eigen::Quaterniond coefficient order (x, y, z, w)
  Eigen::Vector3d a;
};

class Stepper {
 public:
  Stepper(const MilnorTriple<double>& m, const IntegratorConfig& cfg)
      : table_(christoffel(m)), scales_(frame_scales(m)), cfg_(cfg) {
    if (!(cfg.step > 0) || !std::isfinite(cfg.step)) {
      throw IntegrationError("integrator step must be positive and finite");
    }
  }

  RawState derivative(const RawState& s) const {
    const Eigen::Quaterniond q(s.q);
    const Eigen::Quaterniond dq = q * to_pure_quaternion(scales_.cwiseProduct(s.a));
    return {dq.coeffs(), -table_.covariant(s.a, s.a)};
  }

  void step(RawState& s, double h) {
    const RawState k1 = derivative(s);
    const RawState k2 = derivative({s.q + 0.5 * h * k1.q, s.a + 0.5 * h * k1.a});
    const RawState k3 = derivative({s.q + 0.5 * h * k2.q, s.a + 0.5 * h * k2.a});
    const RawState k4 = derivative({s.q + h * k3.q, s.a + h * k3.a});
    s.q += (h / 6.0) * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
    s.a += (h / 6.0) * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a);
    if (!s.q.allFinite() || !s.a.allFinite()) throw IntegrationError("geodesic state became non-finite");
    const double n = s.q.norm();
    max_norm_defect_ = std::max(max_norm_defect_, std::abs(n - 1.0));
    if (cfg_.renormalize) s.q /= n;
  }

  /// Advances by `duration` (any sign) in steps of at most cfg.step.
  void advance(RawState& s, double duration) {
    const double h = cfg_.step;
    const double dir = duration < 0 ? -1.0 : 1.0;
    double remaining = std::abs(duration);
    while (remaining > 0) {
      const double dt = std::min(h, remaining);
      step(s, dir * dt);
      remaining -= dt;
      // Absorb a sliver left over from rounding instead of taking a ~1e-17 step.
      if (remaining < 1e-12 * h) remaining = 0;
    }
  }

  double max_norm_defect() const { return max_norm_defect_; }

 private:
  ChristoffelTable<double> table_;
  Eigen::Vector3d scales_;
  IntegratorConfig cfg_;
  double max_norm_defect_ = 0.0;
};

RawState to_raw(const GeodesicState& s) {
  if (!s.velocity.allFinite()) throw IntegrationError("initial velocity is not finite");
  return {s.point.quaternion().coeffs(), s.velocity};
}

GeodesicState from_raw(const RawState& s) { return {GroupPoint(Eigen::Quaterniond(s.q)), s.a}; }

}  // namespace

Trajectory integrate_geodesic(const MilnorTriple<double>& m, const GeodesicState& s0, double t_end,
                              const IntegratorConfig& cfg) {
  if (!std::isfinite(t_end)) throw IntegrationError("t_end must be finite");
  Stepper stepper(m, cfg);
  RawState s = to_raw(s0);
  Trajectory out;
  out.samples.push_back({0.0, s0});
  const double dir = t_end < 0 ? -1.0 : 1.0;
  const double total = std::abs(t_end);
  const auto n_full = static_cast<long long>(std::floor(total / cfg.step));
  for (long long n = 1; n <= n_full; ++n) {
    stepper.step(s, dir * cfg.step);
    out.samples.push_back({dir * static_cast<double>(n) * cfg.step, from_raw(s)});
  }
  const double rest = total - static_cast<double>(n_full) * cfg.step;
  if (rest > 1e-12 * cfg.step) {
    stepper.step(s, dir * rest);
    out.samples.push_back({t_end, from_raw(s)});
  }
  out.max_norm_defect = stepper.max_norm_defect();
  return out;
}

Trajectory sample_geodesic(const MilnorTriple<double>& m, const GeodesicState& s0, std::span<const double> times,
                           const IntegratorConfig& cfg) {
  Stepper stepper(m, cfg);
  RawState s = to_raw(s0);
  Trajectory out;
  out.samples.reserve(times.size());
  double now = 0.0;
  for (double t : times) {
    if (!std::isfinite(t) || t < now) {
      throw IntegrationError("sample_geodesic: times must be finite, non-negative and non-decreasing");
    }
    stepper.advance(s, t - now);
    now = t;
    out.samples.push_back({t, from_raw(s)});
  }
  out.max_norm_defect = stepper.max_norm_defect();
  return out;
}

double max_speed_drift(const Trajectory& traj) {
  double worst = 0.0;
  for (const TrajectorySample& s : traj.samples) worst = std::max(worst, std::abs(s.state.velocity.norm() - 1.0));
  return worst;
}

BergerGeodesicSpec::BergerGeodesicSpec(double eps, double theta) : eps_(eps), theta_(theta) {
  if (!(eps > 0) || !std::isfinite(eps)) throw DomainError("Berger geodesic: eps must be positive");
  if (eps == 1.0) throw DomainError("Berger geodesic: eps = 1 is the round sphere, not a Berger sphere");
  if (!(theta > 0 && theta < std::numbers::pi)) {
    throw DomainError("Berger geodesic: theta must lie in (0, pi)");
  }
  alpha_ = std::cos(theta);
  beta_ = std::sin(theta);
  m_ = std::sqrt(alpha_ * alpha_ + beta_ * beta_ / eps);
  period_ = 2.0 * std::numbers::pi / m_;
  shift_ = alpha_ * (1.0 - eps) * period_;
}

GeodesicState BergerGeodesicSpec::initial_state() const {
  return {GroupPoint::identity(), Eigen::Vector3d(0.0, beta_, alpha_)};
}

PeriodShift period_shift(double eps, double theta) {
  if (!(eps > 0)) throw DomainError("period_shift: eps must be positive");
  if (!(theta > 0 && theta < std::numbers::pi)) throw DomainError("period_shift: theta must lie in (0, pi)");
  const double alpha = std::cos(theta);
  const double beta = std::sin(theta);
  const double m = std::sqrt(alpha * alpha + beta * beta / eps);
  const double period = 2.0 * std::numbers::pi / m;
  return {period, alpha * (1.0 - eps) * period};
}

GroupPoint berger_geodesic(const BergerGeodesicSpec& spec, double t) {
  using C = std::complex<double>;
  const double m = spec.frequency();
  const double s = std::sin(t * m);
  const C f(std::cos(t * m), spec.alpha() * s / m);
  const C g(0.0, spec.beta() * s / (std::sqrt(spec.eps()) * m));
  const C phase = std::polar(1.0, spec.alpha() * (1.0 / spec.eps() - 1.0) * t);
  Eigen::Matrix2cd c;
  c << f * phase, g * std::conj(phase),
       g * phase, std::conj(f) * std::conj(phase);
  return GroupPoint::from_matrix(c);
}

double verify_prop_geo(const BergerGeodesicSpec& spec, std::span<const double> times) {
  double worst = 0.0;
  for (double t : times) {
    const GroupPoint ahead = berger_geodesic(spec, t + spec.period());
    const GroupPoint shifted = hopf_flow(spec.eps(), spec.shift(), berger_geodesic(spec, t));
    worst = std::max(worst, distance(ahead, shifted));
  }
  return worst;
}

IntegratedCheck verify_prop_geo_integrated(const BergerGeodesicSpec& spec, std::span<const double> times,
                                           const IntegratorConfig& cfg) {
  std::vector<double> needed;
  for (double t : times) {
    needed.push_back(t);
    needed.push_back(t + spec.period());
  }
  std::sort(needed.begin(), needed.end());
  needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
  const Trajectory traj = sample_geodesic(spec.metric(), spec.initial_state(), needed, cfg);
  auto at = [&](double t) -> const GroupPoint& {
    const auto it = std::lower_bound(needed.begin(), needed.end(), t);
    return traj.samples[static_cast<std::size_t>(it - needed.begin())].state.point;
  };
  IntegratedCheck out;
  for (double t : times) {
    out.residual = std::max(out.residual, distance(at(t + spec.period()), hopf_flow(spec.eps(), spec.shift(), at(t))));
  }
  out.max_speed_drift = max_speed_drift(traj);
  out.max_norm_defect = traj.max_norm_defect;
  out.t_max = needed.empty() ? 0.0 : needed.back();
  return out;
}

double closed_form_deviation(const BergerGeodesicSpec& spec, double t_end, const IntegratorConfig& cfg) {
  const Trajectory traj = integrate_geodesic(spec.metric(), spec.initial_state(), t_end, cfg);
  double worst = 0.0;
  for (const TrajectorySample& s : traj.samples) {
    worst = std::max(worst, distance(s.state.point, berger_geodesic(spec, s.t)));
  }
  return worst;
}

GroupPoint general_berger_geodesic(double eps, const GroupPoint& start, const Eigen::Vector3d& velocity,
                                   double t) {
  if (!(eps > 0)) throw DomainError("general_berger_geodesic: eps must be positive");
  const double speed = velocity.norm();
  if (!(speed > 0) || !std::isfinite(speed)) {
    throw DomainError("general_berger_geodesic: velocity must be nonzero and finite");
  }
  const Eigen::Vector3d u = velocity / speed;
  const double tau = speed * t;
  const double horizontal = std::hypot(u(0), u(1));
  if (horizontal == 0.0) return hopf_flow(eps, u(2) * tau, start);

  const double theta = std::atan2(horizontal, u(2));
  const double nu = std::atan2(u(1), u(0));
  // Ad(exp(l x3)) turns the (Y1, Y2) plane by 2l; the base case points along Y2.
  const GroupPoint k = alg_exp(AlgebraVectord(0.0, 0.0, 0.5 * (nu - std::numbers::pi / 2)));
  const GroupPoint base = berger_geodesic(BergerGeodesicSpec(eps, theta), tau);
  return start * k * base * inverse(k);
}

Eigen::Vector3d hopf_projection(const GroupPoint& g) { return adjoint(g, AlgebraVectord(0.0, 0.0, 1.0)); }

}  // namespace homsphere
