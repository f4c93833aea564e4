#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "homsphere/foliations.hpp"
#include "homsphere/geodesics.hpp"
#include "oracles.hpp"

using namespace homsphere;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

GroupPoint endpoint(const MilnorTriple<double>& m, const GeodesicState& s0, double t, double step) {
  return integrate_geodesic(m, s0, t, {step, true}).samples.back().state.point;
}

Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Vector3d v(n(rng), n(rng), n(rng));
  return v.normalized();
}

}  // namespace

TEST_SUITE("geodesics") {
  TEST_CASE("round metric: geodesics through e are one-parameter subgroups") {
    const MilnorTriple<double> m(1.0, 1.0, 1.0);
    const Trajectory traj = integrate_geodesic(m, {GroupPoint::identity(), Eigen::Vector3d::UnitX()}, 2 * kPi,
                                               {1e-3, true});
    double worst = 0.0;
    for (const TrajectorySample& s : traj.samples) {
      const GroupPoint expected = alg_exp(s.t * frame_generator(m, 0));
      worst = std::max(worst, distance(s.state.point, expected));
    }
    CHECK(worst < 1e-10);
    CHECK(distance(traj.samples.back().state.point, GroupPoint::identity()) < 1e-10);
    CHECK(traj.samples.back().t == doctest::Approx(2 * kPi).epsilon(1e-15));
  }

  TEST_CASE("zero time returns the initial state") {
    const MilnorTriple<double> m(1.0, 2.0, 3.0);
    const GeodesicState s0{GroupPoint(0.5, 0.5, 0.5, 0.5), Eigen::Vector3d(0.6, 0.0, 0.8)};
    const Trajectory traj = integrate_geodesic(m, s0, 0.0);
    REQUIRE(traj.samples.size() == 1);
    CHECK(distance(traj.samples[0].state.point, s0.point) == 0.0);
    CHECK(traj.samples[0].state.velocity == s0.velocity);
  }

  TEST_CASE("integrator errors") {
    const MilnorTriple<double> m(1.0, 2.0, 3.0);
    const GeodesicState s0{GroupPoint::identity(), Eigen::Vector3d::UnitX()};
    CHECK_THROWS_AS(integrate_geodesic(m, s0, 1.0, {0.0, true}), IntegrationError);
    CHECK_THROWS_AS(integrate_geodesic(m, s0, 1.0, {-1e-3, true}), IntegrationError);
    CHECK_THROWS_AS(integrate_geodesic(m, s0, std::nan(""), {}), IntegrationError);
    const GeodesicState bad{GroupPoint::identity(), Eigen::Vector3d(INFINITY, 0, 0)};
    CHECK_THROWS_AS(integrate_geodesic(m, bad, 1.0), IntegrationError);
    const std::vector<double> backwards{1.0, 0.5};
    CHECK_THROWS_AS(sample_geodesic(m, s0, backwards), IntegrationError);
  }

  TEST_CASE("closed form against the integrator") {
    const BergerGeodesicSpec spec(0.5, kPi / 3);
    CHECK(closed_form_deviation(spec, 4 * kPi, {1e-4, true}) < 1e-6);
  }

  TEST_CASE("RK4 error falls by about 16 when the step is halved") {
    for (double eps : {0.5, 2.0}) {
      const BergerGeodesicSpec spec(eps, kPi / 3);
      const double coarse = closed_form_deviation(spec, 4 * kPi, {0.01, true});
      const double fine = closed_form_deviation(spec, 4 * kPi, {0.005, true});
      const double ratio = coarse / fine;
      CHECK(ratio > 8.0);
      CHECK(ratio < 32.0);
    }
  }

  TEST_CASE("closed form: basic values") {
    const BergerGeodesicSpec spec(0.3, 1.1);
    CHECK(distance(berger_geodesic(spec, 0.0), GroupPoint::identity()) < 1e-15);

    for (double eps : {0.25, 0.7, 3.0}) {
      const BergerGeodesicSpec perp(eps, kPi / 2);
      CHECK(perp.period() == doctest::Approx(2 * kPi * std::sqrt(eps)).epsilon(1e-14));
      CHECK(std::abs(perp.shift()) < 1e-14);
      CHECK(distance(berger_geodesic(perp, 2 * kPi * std::sqrt(eps)), GroupPoint::identity()) < 1e-12);
    }
  }

  TEST_CASE("closed form: initial velocity by finite differences") {
    for (double eps : {0.25, 0.5, 2.0}) {
      for (double theta : {0.4, kPi / 2, 2.5}) {
        const BergerGeodesicSpec spec(eps, theta);
        const double h = 1e-6;
        const Eigen::Vector4d d =
            (berger_geodesic(spec, h).coeffs() - berger_geodesic(spec, -h).coeffs()) / (2 * h);
        // At e the tangent vector is a pure quaternion (d(0) ~ 0).
        CHECK(std::abs(d(0)) < 1e-8);
        const AlgebraVectord a = from_pure_quaternion(Eigen::Quaterniond(0.0, d(1), d(2), d(3)));
        const Eigen::Vector3d body = from_algebra(spec.metric(), a);
        CHECK((body - Eigen::Vector3d(0.0, spec.beta(), spec.alpha())).norm() < 1e-8);
        CHECK(body.norm() == doctest::Approx(1.0).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("period and shift") {
    const PeriodShift r = period_shift(0.4, kPi / 2);
    CHECK(std::abs(r.shift) < 1e-14);
    CHECK(r.period == doctest::Approx(2 * kPi * std::sqrt(0.4)).epsilon(1e-14));
    for (double theta : {0.3, 1.0, 2.0}) CHECK(period_shift(1.0, theta).shift == 0.0);

    const double eps = 0.5, theta = kPi / 3;
    const double alpha = std::cos(theta), beta = std::sin(theta);
    const double m = std::sqrt(alpha * alpha + beta * beta / eps);
    const PeriodShift ps = period_shift(eps, theta);
    CHECK(ps.period == doctest::Approx(2 * kPi / m).epsilon(1e-14));
    CHECK(ps.shift == doctest::Approx(alpha * (1 - eps) * 2 * kPi / m).epsilon(1e-14));

    CHECK_THROWS_AS(period_shift(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(period_shift(0.5, 0.0), DomainError);
    CHECK_THROWS_AS(period_shift(0.5, kPi), DomainError);
  }

  TEST_CASE("period and shift found by searching the integrated geodesic") {
    // c(t) lies on the Y3-orbit of e iff its qy, qz components vanish. The
    // first such t > 0 is T/2; the Y3-flow parameter of c(T) is the shift.
    const double eps = 0.5, theta = kPi / 3;
    const BergerGeodesicSpec spec(eps, theta);
    const MilnorTriple<double> m = spec.metric();
    const GeodesicState s0 = spec.initial_state();
    const double step = 1e-4;
    auto off_orbit = [&](double t) {
      const GroupPoint c = endpoint(m, s0, t, step);
      return c.y() * c.y() + c.z() * c.z();
    };
    const Trajectory coarse = integrate_geodesic(m, s0, 10.0, {1e-2, true});
    double t_lo = 0.0;
    auto sampled = [&](std::size_t i) {
      const GroupPoint& c = coarse.samples[i].state.point;
      return c.y() * c.y() + c.z() * c.z();
    };
    for (std::size_t i = 1; i + 1 < coarse.samples.size(); ++i) {
      if (sampled(i) < sampled(i - 1) && sampled(i) <= sampled(i + 1)) {
        t_lo = coarse.samples[i].t - 1e-2;
        break;
      }
    }
    REQUIRE(t_lo > 0.0);
    // Golden-section minimization of a square that touches zero.
    double a = t_lo, b = t_lo + 2e-2;
    const double r = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 60; ++it) {
      const double c = b - r * (b - a), d = a + r * (b - a);
      if (off_orbit(c) < off_orbit(d)) b = d; else a = c;
    }
    const double half = 0.5 * (a + b);
    CHECK(2 * half == doctest::Approx(spec.period()).epsilon(1e-6));

    const GroupPoint cT = endpoint(m, s0, spec.period(), step);
    CHECK(cT.y() * cT.y() + cT.z() * cT.z() < 1e-16);
    // hopf_flow(eps, s, e) = exp((s/eps) x3) and x3 -> i.
    double phase = std::atan2(cT.x(), cT.w());
    double expected = spec.shift() / eps;
    const double diff = std::remainder(phase - expected, 2 * kPi);
    CHECK(std::abs(diff) < 1e-8);
  }

  TEST_CASE("period-shift law on the closed form") {
    const std::vector<double> times = linspace(0.0, 4 * kPi, 100);
    double worst = 0.0;
    for (double eps : linspace(0.2, 5.0, 10)) {
      if (eps == 1.0) continue;
      for (double theta : linspace(0.1, kPi - 0.1, 10)) {
        worst = std::max(worst, verify_prop_geo(BergerGeodesicSpec(eps, theta), times));
      }
    }
    CHECK(worst < 1e-10);
    // theta = pi/2: plain periodicity.
    const BergerGeodesicSpec perp(0.6, kPi / 2);
    double periodic = 0.0;
    for (double t : times) {
      periodic = std::max(periodic, distance(berger_geodesic(perp, t + perp.period()), berger_geodesic(perp, t)));
    }
    CHECK(periodic < 1e-10);
  }

  TEST_CASE("period-shift law on the integrated trajectory") {
    const std::vector<double> times = linspace(0.0, 4 * kPi, 100);
    const IntegratedCheck chk = verify_prop_geo_integrated(BergerGeodesicSpec(2.0, 1.0), times, {1e-4, true});
    CHECK(chk.residual < 1e-5);
    CHECK(chk.max_speed_drift < 1e-9 * chk.t_max);
    CHECK(chk.max_norm_defect < 1e-12);
  }

  TEST_CASE("speed conservation for random metrics and velocities") {
    std::mt19937_64 rng(211);
    for (int n = 0; n < 50; ++n) {
      const MilnorTriple<double> m = oracle::random_triple(rng).cast<double>();
      const GeodesicState s0{random_group_point(rng), random_unit(rng)};
      // Christoffel symbols scale with the constants; so does the time scale.
      const double step = 1e-3 / std::max({1.0, m.x, m.y, m.z});
      const Trajectory traj = integrate_geodesic(m, s0, 10.0, {step, true});
      CHECK(max_speed_drift(traj) < 1e-9 * 10.0);
      CHECK(traj.max_norm_defect < 1e-12);
    }
  }

  TEST_CASE("reversibility") {
    std::mt19937_64 rng(223);
    for (int n = 0; n < 10; ++n) {
      const MilnorTriple<double> m = oracle::random_triple(rng).cast<double>();
      const GeodesicState s0{random_group_point(rng), random_unit(rng)};
      const double step = 1e-3 / std::max({1.0, m.x, m.y, m.z});
      const GeodesicState end = integrate_geodesic(m, s0, 3.0, {step, true}).samples.back().state;
      const GeodesicState back = integrate_geodesic(m, end, -3.0, {step, true}).samples.back().state;
      CHECK(distance(back.point, s0.point) < 1e-8);
      CHECK((back.velocity - s0.velocity).norm() < 1e-8);
    }
  }

  TEST_CASE("angle with Y3 is constant along Berger geodesics") {
    for (double eps : {0.25, 4.0}) {
      const BergerGeodesicSpec spec(eps, 0.8);
      const Trajectory traj = integrate_geodesic(spec.metric(), spec.initial_state(), 10.0, {1e-3, true});
      double worst = 0.0;
      for (const TrajectorySample& s : traj.samples) {
        worst = std::max(worst, std::abs(s.state.velocity(2) / s.state.velocity.norm() - spec.alpha()));
      }
      CHECK(worst < 1e-8);
    }
  }

  TEST_CASE("general Berger geodesics") {
    const double eps = 0.5;
    const BergerGeodesicSpec spec(eps, 1.2);
    const Eigen::Vector3d base(0.0, spec.beta(), spec.alpha());
    for (double t : {0.0, 0.7, 3.1, 9.0}) {
      CHECK(distance(general_berger_geodesic(eps, GroupPoint::identity(), base, t), berger_geodesic(spec, t)) <
            1e-14);
    }

    std::mt19937_64 rng(227);
    const MilnorTriple<double> m = berger_triple(eps);
    for (int n = 0; n < 10; ++n) {
      const GroupPoint g = random_group_point(rng);
      const Eigen::Vector3d v = random_unit(rng);
      const Trajectory traj = integrate_geodesic(m, {g, v}, 5.0, {1e-3, true});
      double worst = 0.0;
      for (std::size_t i = 0; i < traj.samples.size(); i += 250) {
        const TrajectorySample& s = traj.samples[i];
        worst = std::max(worst, distance(general_berger_geodesic(eps, g, v, s.t), s.state.point));
        // Left translation by g^-1 gives the geodesic through e with the same velocity.
        const GroupPoint moved = inverse(g) * general_berger_geodesic(eps, g, v, s.t);
        worst = std::max(worst, distance(moved, general_berger_geodesic(eps, GroupPoint::identity(), v, s.t)));
      }
      CHECK(worst < 1e-9);
    }

    // Non-unit speed: reparametrized.
    CHECK(distance(general_berger_geodesic(eps, GroupPoint::identity(), 2.0 * base, 1.5),
                   berger_geodesic(spec, 3.0)) < 1e-13);
    // Along +-Y3: the Hopf orbit.
    const GroupPoint g(0.1, 0.7, -0.3, 0.4);
    CHECK(distance(general_berger_geodesic(eps, g, Eigen::Vector3d::UnitZ(), 2.0), hopf_flow(eps, 2.0, g)) < 1e-14);
    CHECK(distance(general_berger_geodesic(eps, g, -Eigen::Vector3d::UnitZ(), 2.0), hopf_flow(eps, -2.0, g)) <
          1e-14);
    CHECK_THROWS_AS(general_berger_geodesic(eps, g, Eigen::Vector3d::Zero(), 1.0), DomainError);
  }

  TEST_CASE("spec validation") {
    CHECK_THROWS_AS(BergerGeodesicSpec(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(BergerGeodesicSpec(-0.5, 1.0), DomainError);
    CHECK_THROWS_AS(BergerGeodesicSpec(0.5, 0.0), DomainError);
    CHECK_THROWS_AS(BergerGeodesicSpec(0.5, kPi), DomainError);
  }

  TEST_CASE("Hopf projection is constant on Y3-orbits") {
    const GroupPoint g(0.3, -0.2, 0.9, 0.1);
    for (double s : {0.5, 2.0, -4.0}) {
      CHECK((hopf_projection(hopf_flow(0.7, s, g)) - hopf_projection(g)).norm() < 1e-14);
    }
    CHECK(hopf_projection(g).norm() == doctest::Approx(1.0).epsilon(1e-14));
  }
}
