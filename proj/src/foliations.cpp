#include "homsphere/foliations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace homsphere {

Eigen::Vector3d AngleCoordinates::direction() const {
  return {std::sin(psi) * std::cos(nu), std::sin(psi) * std::sin(nu), std::cos(psi)};
}

AngleCoordinates angle_coordinates(const Eigen::Vector3d& v) {
  const double horizontal = std::hypot(v(0), v(1));
  if (!(horizontal > 0)) throw DomainError("angle coordinates: V = +-Y3 lies outside the chart");
  return {std::atan2(horizontal, v(2)), std::atan2(v(1), v(0))};
}

AngleCoordinates angle_coordinates(const FrameField& v, const GroupPoint& g) { return angle_coordinates(v(g)); }

Completion orthonormal_completion(const AngleCoordinates& ac) {
  const double cp = std::cos(ac.psi), sp = std::sin(ac.psi);
  const double cn = std::cos(ac.nu), sn = std::sin(ac.nu);
  return {Eigen::Vector3d(cp * cn, cp * sn, -sp), Eigen::Vector3d(-sn, cn, 0.0)};
}

InhomogeneousFoliation<SurdNumber> build_inhomogeneous_foliation(const MilnorTriple<Rational>& m) {
  if (!(m.x > m.y && m.y > m.z)) throw DomainError("inhomogeneous foliation requires x > y > z > 0");
  const Rational span = m.x - m.z;
  auto [v2, v3] = sqrt_pair((m.y - m.z) / span, (m.x - m.y) / span);
  return {m.cast<SurdNumber>(), v2, v3};
}

InhomogeneousFoliation<double> build_inhomogeneous_foliation(const MilnorTriple<double>& m) {
  if (!(m.x > m.y && m.y > m.z)) throw DomainError("inhomogeneous foliation requires x > y > z > 0");
  const double span = m.x - m.z;
  return {m, std::sqrt((m.y - m.z) / span), std::sqrt((m.x - m.y) / span)};
}

std::string to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::Success: return "Success";
    case CertificateStatus::NotClosed: return "NotClosed";
    case CertificateStatus::NotKilling: return "NotKilling";
  }
  return "Unknown";
}

namespace {

Completion completion_at(const FrameField& v, const Eigen::Vector3d& value) {
  if (v.is_left_invariant() && std::hypot(value(0), value(1)) == 0.0) {
    const Eigen::Vector3d u(0.0, 1.0, 0.0);
    return {u.cross(value), u};
  }
  return orthonormal_completion(angle_coordinates(value));
}

const FrameField& frame_basis(int i) {
  static const std::array<FrameField, 3> basis{FrameField::constant(Eigen::Vector3d::UnitX()),
                                               FrameField::constant(Eigen::Vector3d::UnitY()),
                                               FrameField::constant(Eigen::Vector3d::UnitZ())};
  return basis[static_cast<std::size_t>(i)];
}

Eigen::Vector3d d_omega_on_pairs(const MilnorTriple<double>& m, const OneFormField& omega, const GroupPoint& g,
                                 const FoliationOptions& opt) {
  Eigen::Vector3d out;
  for (int p = 0; p < 3; ++p) {
    out(p) = exterior_derivative(m, omega, frame_basis(kFramePairs[p][0]), frame_basis(kFramePairs[p][1]), g, opt);
  }
  return out;
}

}  // namespace

Eigen::Vector3d metric_residuals_at(const MilnorTriple<double>& m, const ChristoffelTable<double>& t,
                                    const FrameField& v, const GroupPoint& g, const DerivativeOptions& opt) {
  const Eigen::Vector3d value = v(g);
  const Completion c = completion_at(v, value);
  const Eigen::Matrix3d d = covariant_jacobian(m, t, v, g, opt);
  return {-c.u.dot(d * c.u), -c.w.dot(d * c.w), -(c.w.dot(d * c.u) + c.u.dot(d * c.w))};
}

OneFormField mean_curvature(const MilnorTriple<double>& m, const FrameField& v, const DerivativeOptions& opt) {
  const ChristoffelTable<double> t = christoffel(m);
  if (v.is_left_invariant()) return OneFormField::constant(t.covariant(*v.constant_coefficients(), *v.constant_coefficients()));
  return OneFormField::general([m, t, v, opt](const GroupPoint& g) -> Eigen::Vector3d {
    return covariant_jacobian(m, t, v, g, opt) * v(g);
  });
}

double exterior_derivative(const MilnorTriple<double>& m, const OneFormField& omega, const FrameField& x,
                           const FrameField& y, const GroupPoint& g, const FoliationOptions& opt) {
  // omega may already be a difference quotient; differentiate it at the coarser step.
  const DerivativeOptions& outer = omega.is_left_invariant() ? opt.inner : opt.outer;
  auto directional = [&](const FrameField& dir, const FrameField& arg) -> double {
    if (omega.is_left_invariant() && arg.is_left_invariant()) return 0.0;
    const ScalarField pairing = [&](const GroupPoint& h) { return omega(h).dot(arg(h)); };
    return dir(g).dot(frame_gradient(m, pairing, g, outer));
  };
  return directional(x, y) - directional(y, x) - omega(g).dot(lie_bracket(m, x, y, g, opt.inner));
}

FoliationReport is_metric_foliation(const MilnorTriple<double>& m, const FrameField& v,
                                    std::span<const GroupPoint> samples, double tol, const FoliationOptions& opt) {
  std::vector<GroupPoint> points;
  if (v.is_left_invariant()) {
    points.push_back(samples.empty() ? GroupPoint::identity() : samples.front());
  } else {
    if (samples.empty()) throw DomainError("is_metric_foliation: no sample points");
    points.assign(samples.begin(), samples.end());
  }
  const ChristoffelTable<double> t = christoffel(m);
  const OneFormField omega = mean_curvature(m, v, opt.inner);
  FoliationReport report;
  report.tolerance = tol;
  for (const GroupPoint& g : points) {
    SampleResiduals s{metric_residuals_at(m, t, v, g, opt.inner), omega(g), d_omega_on_pairs(m, omega, g, opt)};
    report.max_metric_residual = std::max(report.max_metric_residual, s.metric.cwiseAbs().maxCoeff());
    report.max_d_omega = std::max(report.max_d_omega, s.d_omega.cwiseAbs().maxCoeff());
    report.samples.push_back(s);
  }
  report.is_metric = report.max_metric_residual <= tol;
  report.is_closed = report.max_d_omega <= tol;
  return report;
}

double mean_curvature_potential(const MilnorTriple<double>& m, const OneFormField& omega, const GroupPoint& base,
                                const GroupPoint& p, int panels) {
  if (panels < 1) throw DomainError("mean_curvature_potential: need at least one panel");
  const AlgebraVectord xi = alg_log(inverse(base) * p);
  const Eigen::Vector3d velocity = from_algebra(m, xi);
  auto integrand = [&](double s) { return omega(base * alg_exp(s * xi)).dot(velocity); };
  const int n = 2 * panels;
  const double h = 1.0 / n;
  double sum = integrand(0.0) + integrand(1.0);
  for (int i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * integrand(i * h);
  return sum * h / 3.0;
}

HomogeneityCertificate homogeneity_certificate(const MilnorTriple<double>& m, const FrameField& v,
                                               const GroupPoint& base, std::span<const GroupPoint> samples,
                                               const CertificateOptions& opt) {
  if (samples.empty()) throw DomainError("homogeneity_certificate: no sample points");
  const OneFormField omega = mean_curvature(m, v, opt.derivatives.inner);
  HomogeneityCertificate cert;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const Eigen::Vector3d d = d_omega_on_pairs(m, omega, samples[n], opt.derivatives);
    for (int p = 0; p < 3; ++p) {
      cert.max_d_omega = std::max(cert.max_d_omega, std::abs(d(p)));
      if (std::abs(d(p)) > opt.closed_tolerance) {
        cert.status = CertificateStatus::NotClosed;
        cert.witness = ClosednessWitness<double>{kFramePairs[p][0], kFramePairs[p][1], d(p), n};
        return cert;
      }
    }
  }

  const int panels = opt.simpson_panels;
  auto potential = [m, omega, base, panels](const GroupPoint& p) {
    return mean_curvature_potential(m, omega, base, p, panels);
  };
  cert.killing_field = FrameField::general(
      [v, potential](const GroupPoint& g) -> Eigen::Vector3d { return std::exp(-potential(g)) * v(g); });

  const ChristoffelTable<double> t = christoffel(m);
  for (const GroupPoint& g : samples) {
    cert.potential.push_back(potential(g));
    const Eigen::Matrix3d k = killing_residual(m, t, cert.killing_field, g, opt.derivatives.outer);
    cert.max_killing_residual = std::max(cert.max_killing_residual, k.cwiseAbs().maxCoeff());
  }
  cert.status = cert.max_killing_residual <= opt.killing_tolerance ? CertificateStatus::Success
                                                                   : CertificateStatus::NotKilling;
  return cert;
}

FrameField killing_field(double eps, const KillingGenerator& gen) {
  const FrameField right = right_invariant_field(berger_triple(eps), gen.xi);
  const double hopf = gen.hopf;
  return FrameField::general([right, hopf](const GroupPoint& g) -> Eigen::Vector3d {
    Eigen::Vector3d k = right(g);
    k(2) += hopf;
    return k;
  });
}

FrameField normalized_killing_field(double eps, const KillingGenerator& gen) {
  const FrameField k = killing_field(eps, gen);
  return FrameField::general([k](const GroupPoint& g) -> Eigen::Vector3d {
    const Eigen::Vector3d value = k(g);
    const double n = value.norm();
    if (!(n > 1e-12)) throw EvaluationError("Killing field vanishes; V = K/|K| is undefined here");
    return value / n;
  });
}

GroupPoint random_group_point(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  for (;;) {
    const Eigen::Vector4d q(normal(rng), normal(rng), normal(rng), normal(rng));
    if (q.norm() > 1e-8) return GroupPoint(q(0), q(1), q(2), q(3));
  }
}

std::vector<GroupPoint> sample_killing_region(double eps, const KillingGenerator& gen, const GroupPoint& base,
                                              std::size_t count, double radius, double min_norm,
                                              double min_sin_psi, std::mt19937_64& rng) {
  const FrameField k = killing_field(eps, gen);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  std::vector<GroupPoint> out;
  const std::size_t budget = 1000 * std::max<std::size_t>(count, 1);
  for (std::size_t attempt = 0; attempt < budget && out.size() < count; ++attempt) {
    AlgebraVectord xi(normal(rng), normal(rng), normal(rng));
    if (xi.norm() < 1e-12) continue;
    xi *= radius * std::cbrt(unit(rng)) / xi.norm();
    bool ok = true;
    for (int i = 0; i <= 16 && ok; ++i) ok = k(base * alg_exp((i / 16.0) * xi)).norm() > min_norm;
    if (!ok) continue;
    const GroupPoint p = base * alg_exp(xi);
    const Eigen::Vector3d value = k(p).normalized();
    if (std::hypot(value(0), value(1)) <= min_sin_psi) continue;
    out.push_back(p);
  }
  if (out.size() < count) throw EvaluationError("sample_killing_region: admissible region too small");
  return out;
}

KillingFoliationSample killing_foliation_sample(double eps, const KillingGenerator& gen, std::size_t count,
                                                std::mt19937_64& rng) {
  const FrameField raw = killing_field(eps, gen);
  // |K| in the Y-frame depends on eps; compare against its largest sampled value.
  double scale = 0.0;
  for (int i = 0; i < 64; ++i) scale = std::max(scale, raw(random_group_point(rng)).norm());
  if (!(scale > 1e-12)) throw EvaluationError("Killing field vanishes identically");
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const GroupPoint base = random_group_point(rng);
    const Eigen::Vector3d value = raw(base);
    if (value.norm() < 0.5 * scale || std::hypot(value(0), value(1)) < 0.2 * value.norm()) continue;
    return {normalized_killing_field(eps, gen), base,
            sample_killing_region(eps, gen, base, count, 0.5, 0.2 * value.norm(), 0.1, rng)};
  }
  throw EvaluationError("no admissible base point for this Killing field");
}

double LemmaReport::max_abs() const {
  double worst = 0.0;
  for (const LemmaEntry& e : entries) worst = std::max(worst, e.max_abs);
  return worst;
}

const LemmaEntry& LemmaReport::at(std::string_view name) const {
  for (const LemmaEntry& e : entries) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("LemmaReport: no identity named " + std::string(name));
}

LemmaReport lemma_equalities_check(double eps, const FrameField& v, std::span<const GroupPoint> samples,
                                   const LemmaOptions& opt) {
  const MilnorTriple<double> m = berger_triple(eps);
  const ChristoffelTable<double> t = christoffel(m);
  const DerivativeOptions first{opt.step, opt.richardson};
  const DerivativeOptions inner{opt.inner_step, true};

  const FrameField u_field =
      FrameField::general([v](const GroupPoint& g) { return orthonormal_completion(angle_coordinates(v(g))).u; });
  const FrameField w_field =
      FrameField::general([v](const GroupPoint& g) { return orthonormal_completion(angle_coordinates(v(g))).w; });
  const FrameField y3 = FrameField::constant(Eigen::Vector3d::UnitZ());

  // Frame gradients of psi = acos(V3) and nu = atan2(V2, V1).
  auto grad_psi = [&](const GroupPoint& h, const DerivativeOptions& o) -> Eigen::Vector3d {
    const Eigen::Vector3d value = v(h);
    const Eigen::Matrix3d j = frame_jacobian(m, v, h, o);
    return -j.row(2).transpose() / std::hypot(value(0), value(1));
  };
  auto grad_nu = [&](const GroupPoint& h, const DerivativeOptions& o) -> Eigen::Vector3d {
    const Eigen::Vector3d value = v(h);
    const Eigen::Matrix3d j = frame_jacobian(m, v, h, o);
    return (value(0) * j.row(1) - value(1) * j.row(0)).transpose() / (value(0) * value(0) + value(1) * value(1));
  };
  const ScalarField u_psi = [&](const GroupPoint& h) { return u_field(h).dot(grad_psi(h, inner)); };
  const ScalarField v_nu = [&](const GroupPoint& h) { return v(h).dot(grad_nu(h, inner)); };

  LemmaReport report;
  report.entries = {{"Y3(psi)"},
                    {"Y3(nu) + 2/eps"},
                    {"W(psi)"},
                    {"U(psi) + sin(psi) W(nu) + (2 - 2/eps) sin^2(psi)"},
                    {"V(psi)"},
                    {"<U, [U,V]>"},
                    {"V(U(psi))", 0.0, true},
                    {"Y3(V(nu))", 0.0, true},
                    {"V(V(nu))", 0.0, true},
                    {"[Y3,V]"},
                    {"[Y3,U]"},
                    {"[Y3,W]"},
                    {"nabla_V V - f U"}};

  for (const GroupPoint& g : samples) {
    const Eigen::Vector3d vv = v(g);
    const AngleCoordinates ac = angle_coordinates(vv);
    const Completion c = orthonormal_completion(ac);
    const double sp = std::sin(ac.psi);
    const Eigen::Vector3d gpsi = grad_psi(g, first);
    const Eigen::Vector3d gnu = grad_nu(g, first);
    const Eigen::Vector3d grad_v_nu = frame_gradient(m, v_nu, g, first);
    const double f = vv.dot(gnu) * sp + (1.0 / eps - 1.0) * std::sin(2.0 * ac.psi);

    const std::array<double, 13> values{
        gpsi(2),
        gnu(2) + 2.0 / eps,
        c.w.dot(gpsi),
        c.u.dot(gpsi) + sp * c.w.dot(gnu) + (2.0 - 2.0 / eps) * sp * sp,
        vv.dot(gpsi),
        c.u.dot(lie_bracket(m, u_field, v, g, first)),
        vv.dot(frame_gradient(m, u_psi, g, first)),
        grad_v_nu(2),
        vv.dot(grad_v_nu),
        lie_bracket(m, y3, v, g, first).norm(),
        lie_bracket(m, y3, u_field, g, first).norm(),
        lie_bracket(m, y3, w_field, g, first).norm(),
        (covariant_jacobian(m, t, v, g, first) * vv - f * c.u).norm(),
    };
    for (std::size_t i = 0; i < values.size(); ++i) {
      report.entries[i].max_abs = std::max(report.entries[i].max_abs, std::abs(values[i]));
    }
  }
  return report;
}

std::vector<ConvergenceEntry> lemma_convergence(double eps, const FrameField& v, std::span<const GroupPoint> samples,
                                                const ConvergenceOptions& opt) {
  if (!(opt.coarse_step > opt.fine_step && opt.fine_step > 0)) {
    throw DomainError("lemma_convergence: need coarse_step > fine_step > 0");
  }
  const LemmaReport coarse = lemma_equalities_check(eps, v, samples, {opt.coarse_step, false});
  const LemmaReport fine = lemma_equalities_check(eps, v, samples, {opt.fine_step, false});
  std::vector<ConvergenceEntry> out;
  for (std::size_t i = 0; i < coarse.entries.size(); ++i) {
    ConvergenceEntry e{coarse.entries[i].name, coarse.entries[i].max_abs, fine.entries[i].max_abs};
    e.at_noise_floor = e.fine < (coarse.entries[i].nested ? opt.nested_noise_floor : opt.noise_floor);
    if (!e.at_noise_floor) e.order = std::log(e.coarse / e.fine) / std::log(opt.coarse_step / opt.fine_step);
    out.push_back(e);
  }
  return out;
}

}  // namespace homsphere
