#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "homsphere/foliations.hpp"
#include "oracles.hpp"

using namespace homsphere;

namespace {

using Q = Rational;
constexpr double kPi = std::numbers::pi;

KillingGenerator random_generator(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return {AlgebraVectord(n(rng), n(rng), n(rng)), n(rng)};
}

}  // namespace

TEST_SUITE("foliations") {
  TEST_CASE("angle coordinates") {
    const AngleCoordinates y2 = angle_coordinates(Eigen::Vector3d::UnitY());
    CHECK(y2.psi == doctest::Approx(kPi / 2));
    CHECK(y2.nu == doctest::Approx(kPi / 2));

    const AngleCoordinates tilted = angle_coordinates(Eigen::Vector3d(0.0, std::sqrt(3.0) / 2, 0.5));
    CHECK(tilted.psi == doctest::Approx(kPi / 3));
    CHECK(tilted.nu == doctest::Approx(kPi / 2));

    CHECK_THROWS_AS(angle_coordinates(Eigen::Vector3d::UnitZ()), DomainError);
    CHECK_THROWS_AS(angle_coordinates(-Eigen::Vector3d::UnitZ()), DomainError);
    CHECK_THROWS_AS(angle_coordinates(FrameField::constant(Eigen::Vector3d::UnitZ()), GroupPoint::identity()),
                    DomainError);

    std::mt19937_64 rng(301);
    std::normal_distribution<double> n;
    for (int i = 0; i < 100; ++i) {
      const Eigen::Vector3d v = Eigen::Vector3d(n(rng), n(rng), n(rng)).normalized();
      const AngleCoordinates ac = angle_coordinates(v);
      CHECK((ac.direction() - v).norm() < 1e-12);
      CHECK(ac.psi > 0.0);
      CHECK(ac.psi < kPi);
    }
  }

  TEST_CASE("orthonormal completion") {
    const Completion c = orthonormal_completion(angle_coordinates(Eigen::Vector3d::UnitY()));
    CHECK((c.w + Eigen::Vector3d::UnitZ()).norm() < 1e-15);
    CHECK((c.u + Eigen::Vector3d::UnitX()).norm() < 1e-15);

    std::mt19937_64 rng(303);
    std::normal_distribution<double> n;
    for (int i = 0; i < 100; ++i) {
      const Eigen::Vector3d v = Eigen::Vector3d(n(rng), n(rng), n(rng)).normalized();
      const AngleCoordinates ac = angle_coordinates(v);
      const Completion comp = orthonormal_completion(ac);
      Eigen::Matrix3d frame;
      frame << v, comp.w, comp.u;
      CHECK((frame.transpose() * frame - Eigen::Matrix3d::Identity()).norm() < 1e-12);
      CHECK((std::cos(ac.psi) * v - std::sin(ac.psi) * comp.w - Eigen::Vector3d::UnitZ()).norm() < 1e-12);
      CHECK((comp.u.cross(v) - comp.w).norm() < 1e-12);
    }
  }

  TEST_CASE("inhomogeneous foliation: worked example") {
    const auto f = build_inhomogeneous_foliation(MilnorTriple<Q>(Q(3), Q(2), Q(1)));
    CHECK(f.v2 * f.v2 == SurdNumber(Q(1, 2)));
    CHECK(f.v3 * f.v3 == SurdNumber(Q(1, 2)));
    CHECK(std::abs(to_double(f.v2) - std::sqrt(0.5)) < 1e-15);
    CHECK(f.predicted_d_omega() == SurdNumber(-8));

    CHECK_THROWS_AS(build_inhomogeneous_foliation(MilnorTriple<Q>(Q(1), Q(2), Q(3))), DomainError);
    CHECK_THROWS_AS(build_inhomogeneous_foliation(MilnorTriple<Q>(Q(3), Q(1), Q(1))), DomainError);
    CHECK_THROWS_AS(build_inhomogeneous_foliation(MilnorTriple<Q>(Q(3), Q(3), Q(1))), DomainError);
    CHECK_THROWS_AS(build_inhomogeneous_foliation(MilnorTriple<double>(2.0, 3.0, 1.0)), DomainError);
  }

  TEST_CASE("inhomogeneous foliation: exact end-to-end") {
    std::mt19937_64 rng(307);
    for (int n = 0; n < 50; ++n) {
      const MilnorTriple<Q> m = oracle::random_ordered_triple(rng);
      const auto f = build_inhomogeneous_foliation(m);
      const SurdNumber x(m.x), y(m.y), z(m.z);
      CHECK(f.v2 * f.v2 + f.v3 * f.v3 == SurdNumber(1));
      CHECK(f.v2 * f.v2 * (x - y) == f.v3 * f.v3 * (y - z));

      const auto a = analyze_left_invariant(f.metric, f.field());
      CHECK(is_zero(a.residuals.uu));
      CHECK(is_zero(a.residuals.ww));
      CHECK(is_zero(a.residuals.mixed));
      CHECK(a.is_metric);
      // omega = 2 v2 v3 (x - z) E1^*
      CHECK(a.omega(0) == SurdNumber(2) * f.v2 * f.v3 * (x - z));
      CHECK(is_zero(a.omega(1)));
      CHECK(is_zero(a.omega(2)));
      CHECK(a.d_omega(0) == f.predicted_d_omega());
      CHECK(a.d_omega(0) == SurdNumber(-4) * f.v2 * f.v3 * y * (x - z));
      CHECK(signum(a.d_omega(0)) < 0);
      CHECK_FALSE(a.is_closed);

      const auto cert = homogeneity_certificate(f.metric, f.field());
      CHECK(cert.status == CertificateStatus::NotClosed);
      REQUIRE(cert.witness.has_value());
      CHECK(cert.witness->first == 1);
      CHECK(cert.witness->second == 2);
      CHECK(cert.witness->value == f.predicted_d_omega());

      // The explicit completion U = E1, W = -v3 E2 + v2 E3 gives the same residuals.
      const auto t = christoffel(f.metric);
      CHECK(is_zero(t.covariant(f.u(), f.u()).dot(f.field())));
      CHECK(is_zero(t.covariant(f.w(), f.w()).dot(f.field())));
      CHECK(is_zero((t.covariant(f.u(), f.w()) + t.covariant(f.w(), f.u())).dot(f.field())));
    }
  }

  TEST_CASE("inhomogeneous foliation: double path agrees") {
    const MilnorTriple<double> m(3.0, 2.0, 1.0);
    const auto f = build_inhomogeneous_foliation(m);
    const FrameField v = FrameField::constant(f.field());
    const FoliationReport r = is_metric_foliation(m, v, {});
    CHECK(r.is_metric);
    CHECK_FALSE(r.is_closed);
    REQUIRE(r.samples.size() == 1);
    CHECK(r.samples[0].d_omega(0) == doctest::Approx(-8.0).epsilon(1e-12));

    std::mt19937_64 rng(311);
    std::vector<GroupPoint> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(random_group_point(rng));
    const HomogeneityCertificate cert = homogeneity_certificate(m, v, pts[0], pts);
    CHECK(cert.status == CertificateStatus::NotClosed);
    REQUIRE(cert.witness.has_value());
    CHECK(cert.witness->value == doctest::Approx(-8.0).epsilon(1e-10));
  }

  TEST_CASE("left-invariant Berger fields") {
    const Q eps(1, 2);
    const MilnorTriple<Q> m = berger_triple(eps);
    const auto y3 = analyze_left_invariant(m, Vec3<Q>(Q(0), Q(0), Q(1)));
    CHECK(y3.is_metric);
    CHECK(y3.omega == Vec3<Q>::Zero());
    const auto c3 = homogeneity_certificate(m, Vec3<Q>(Q(0), Q(0), Q(1)));
    CHECK(c3.status == CertificateStatus::Success);
    CHECK(c3.killing == Mat3<Q>::Zero());

    // V = Y1: only the mixed residual survives; W = U x V is -Y3 for U = Y2.
    const auto y1 = analyze_left_invariant(m, Vec3<Q>(Q(1), Q(0), Q(0)));
    CHECK(y1.residuals.uu == Q(0));
    CHECK(y1.residuals.ww == Q(0));
    CHECK(abs_value(y1.residuals.mixed) == abs_value(Q(2) - Q(2) / eps));
    CHECK_FALSE(y1.is_metric);
    CHECK(homogeneity_certificate(m, Vec3<Q>(Q(1), Q(0), Q(0))).status == CertificateStatus::NotKilling);
  }

  TEST_CASE("mean curvature is orientation independent") {
    std::mt19937_64 rng(313);
    for (int n = 0; n < 20; ++n) {
      const MilnorTriple<Q> m = oracle::random_triple(rng);
      const auto t = christoffel(m);
      const Vec3<Q> v(oracle::random_positive_rational(rng), -oracle::random_positive_rational(rng),
                      oracle::random_positive_rational(rng));
      CHECK(mean_curvature(t, v) == mean_curvature(t, Vec3<Q>(-v)));
    }
    const MilnorTriple<double> md(1.4, 0.9, 0.3);
    const FrameField v = normalized_killing_field(2.0, {AlgebraVectord(0.3, 1.0, -0.4), 0.5});
    const FrameField minus = FrameField::general([v](const GroupPoint& g) -> Eigen::Vector3d { return -v(g); });
    const GroupPoint g(0.2, 0.4, -0.7, 0.5);
    CHECK((mean_curvature(md, v)(g) - mean_curvature(md, minus)(g)).norm() < 1e-9);
  }

  TEST_CASE("exterior derivative") {
    const MilnorTriple<double> m(1.6, 0.7, 1.1);
    const GroupPoint g(0.3, -0.1, 0.8, 0.4);
    // Left-invariant data: Cartan formula reduces to -omega([X, Y]).
    const Eigen::Vector3d w(0.5, -1.2, 0.8), x(0.1, 0.9, -0.3), y(-0.7, 0.2, 0.6);
    const double cartan = exterior_derivative(m, OneFormField::constant(w), FrameField::constant(x),
                                              FrameField::constant(y), g);
    CHECK(cartan == doctest::Approx(exterior_derivative(m, w, x, y)).epsilon(1e-14));
    CHECK(exterior_derivative(m, w, x, x) == 0.0);

    // Exact one-form df.
    const ScalarField f = [](const GroupPoint& p) { return std::sin(2 * p.x()) * p.w() + p.y() * p.z() * p.z(); };
    const OneFormField df = OneFormField::general([m, f](const GroupPoint& p) { return frame_gradient(m, f, p); });
    std::mt19937_64 rng(317);
    double worst = 0.0;
    for (int n = 0; n < 20; ++n) {
      const GroupPoint p = random_group_point(rng);
      for (auto [a, b] : kFramePairs) {
        worst = std::max(worst, std::abs(exterior_derivative(m, df, FrameField::constant(Eigen::Vector3d::Unit(a)),
                                                             FrameField::constant(Eigen::Vector3d::Unit(b)), p)));
      }
    }
    CHECK(worst < 1e-6);

    // A general vector field paired with itself.
    const FrameField v = normalized_killing_field(0.5, {AlgebraVectord(1.0, 0.0, 0.3), 0.2});
    CHECK(std::abs(exterior_derivative(m, df, v, v, g)) < 1e-12);
  }

  TEST_CASE("Killing foliations of Berger spheres") {
    std::mt19937_64 rng(331);
    for (double eps : {0.25, 0.5, 2.0, 4.0}) {
      const KillingGenerator gen = random_generator(rng);
      const KillingFoliationSample s = killing_foliation_sample(eps, gen, 6, rng);
      const MilnorTriple<double> m = berger_triple(eps);

      const FoliationReport r = is_metric_foliation(m, s.v, s.points);
      CHECK(r.max_metric_residual < 1e-6);
      CHECK(r.is_metric);
      CHECK(r.is_closed);

      const HomogeneityCertificate cert = homogeneity_certificate(m, s.v, s.base, s.points);
      CHECK(cert.status == CertificateStatus::Success);
      CHECK(cert.max_killing_residual < 1e-5);
      // X = e^{-f} V recovers K / |K(base)|.
      const FrameField k = killing_field(eps, gen);
      const double scale = k(s.base).norm();
      for (const GroupPoint& p : s.points) {
        CHECK((cert.killing_field(p) - k(p) / scale).norm() < 1e-5);
      }
    }
  }

  TEST_CASE("identities along Killing foliations") {
    std::mt19937_64 rng(337);
    const double eps = 0.5;
    const KillingGenerator gen = random_generator(rng);
    const KillingFoliationSample s = killing_foliation_sample(eps, gen, 30, rng);
    const LemmaReport rep = lemma_equalities_check(eps, s.v, s.points);
    CHECK(rep.entries.size() == 13);
    for (const LemmaEntry& e : rep.entries) {
      INFO(e.name);
      CHECK(e.max_abs < 1e-5);
    }
    CHECK_THROWS_AS(rep.at("no such identity"), std::out_of_range);

    const std::vector<ConvergenceEntry> conv = lemma_convergence(eps, s.v, s.points);
    CHECK(conv.size() == rep.entries.size());
    for (const ConvergenceEntry& c : conv) {
      INFO(c.name);
      CHECK((c.at_noise_floor || c.order >= 1.9));
    }

    // Y3(nu) = -2/eps, measured directly.
    double worst = 0.0;
    for (const GroupPoint& p : s.points) {
      const ScalarField nu = [&](const GroupPoint& q) { return angle_coordinates(s.v, q).nu; };
      const double y3nu = frame_derivative(nu, p, frame_generator(berger_triple(eps), 2));
      worst = std::max(worst, std::abs(y3nu + 4.0));
    }
    CHECK(worst < 1e-6);
  }

  TEST_CASE("identities fail for a non-metric field") {
    const double eps = 0.5;
    const FrameField tilted = FrameField::constant(Eigen::Vector3d(1.0, 0.0, 1.0).normalized());
    const std::vector<GroupPoint> pts{GroupPoint::identity(), GroupPoint(0.5, 0.5, 0.5, 0.5)};
    const LemmaReport rep = lemma_equalities_check(eps, tilted, pts);
    // (2 - 2/eps) sin^2(psi) with psi = pi/4.
    CHECK(rep.at("U(psi) + sin(psi) W(nu) + (2 - 2/eps) sin^2(psi)").max_abs == doctest::Approx(1.0).epsilon(1e-6));
    const FoliationReport r = is_metric_foliation(berger_triple(eps), tilted, pts);
    CHECK_FALSE(r.is_metric);
  }

  TEST_CASE("chart and sampling errors") {
    const FrameField y3 = FrameField::constant(Eigen::Vector3d::UnitZ());
    const std::vector<GroupPoint> pts{GroupPoint::identity()};
    CHECK_THROWS_AS(lemma_equalities_check(0.5, y3, pts), DomainError);
    CHECK_THROWS_AS(normalized_killing_field(0.5, {AlgebraVectord::Zero(), 0.0})(GroupPoint::identity()),
                    EvaluationError);
    const FrameField general = normalized_killing_field(0.5, {AlgebraVectord(1.0, 0.0, 0.0), 0.0});
    CHECK_THROWS_AS(is_metric_foliation(berger_triple(0.5), general, {}), DomainError);
    CHECK_THROWS_AS(homogeneity_certificate(berger_triple(0.5), general, GroupPoint::identity(), {}), DomainError);
    ConvergenceOptions bad;
    bad.fine_step = 1e-2;
    CHECK_THROWS_AS(lemma_convergence(0.5, general, pts, bad), DomainError);
  }
}
