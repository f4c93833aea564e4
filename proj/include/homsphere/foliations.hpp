#pragma once

// One-dimensional foliations of SU(2) with a left-invariant metric, oriented by
// a unit field V given in Milnor-frame coefficients.
//
//   metric      <=> V^perp is totally geodesic: for an orthonormal completion
//                   {V, W, U}, <nabla_U U, V> = <nabla_W W, V> =
//                   <nabla_U W + nabla_W U, V> = 0
//   homogeneous <=> the mean curvature form w = <nabla_V V, .> is closed; then
//                   X = e^{-f} V is Killing for any f with df = w.
//
// Every check has an exact path for left-invariant V (templated on the scalar,
// no differencing) and a double path that differentiates by central
// differences along the frame.

#include <array>
#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "homsphere/fields.hpp"
#include "homsphere/group.hpp"
#include "homsphere/milnor.hpp"

namespace homsphere {

// --- Angle coordinates on O = {V != +-Y3} ----------------------------------

/// V = sin(psi) cos(nu) Y1 + sin(psi) sin(nu) Y2 + cos(psi) Y3.
struct AngleCoordinates {
  double psi = 0.0;  // (0, pi)
  double nu = 0.0;   // (-pi, pi]

  Eigen::Vector3d direction() const;
};

/// Throws DomainError when V(g) = +-Y3 (outside O).
AngleCoordinates angle_coordinates(const Eigen::Vector3d& v);
AngleCoordinates angle_coordinates(const FrameField& v, const GroupPoint& g);

/// W = cos(psi) cos(nu) Y1 + cos(psi) sin(nu) Y2 - sin(psi) Y3,
/// U = -sin(nu) Y1 + cos(nu) Y2.
struct Completion {
  Eigen::Vector3d w;
  Eigen::Vector3d u;
};
Completion orthonormal_completion(const AngleCoordinates& ac);

// --- Exact path for left-invariant V ---------------------------------------

template <class S>
struct MetricResiduals {
  S uu;     // <nabla_U U, V>
  S ww;     // <nabla_W W, V>
  S mixed;  // <nabla_U W + nabla_W U, V>
};

/// Index pairs (E2,E3), (E3,E1), (E1,E2) used for d(omega) reports.
inline constexpr std::array<std::array<int, 2>, 3> kFramePairs{{{1, 2}, {2, 0}, {0, 1}}};

/// Residuals for the completion U, W of the angle chart, evaluated with the
/// unnormalized left-invariant fields P = sin(psi) U = (-v2, v1, 0) and
/// Q = sin(psi) W = P x V, then divided by sin^2(psi) = v1^2 + v2^2 so every
/// step stays in the scalar field. For V = +-E3 the chart degenerates and
/// (U, W) = (E2, E2 x V) is used instead.
template <class S>
MetricResiduals<S> metric_residuals(const ChristoffelTable<S>& t, const Vec3<S>& v) {
  Vec3<S> p(-v(1), v(0), S(0));
  S norm2 = p.dot(p);
  if (is_zero(norm2)) {
    p = Vec3<S>(S(0), S(1), S(0));
    norm2 = S(1);
  }
  const Vec3<S> q = p.cross(v);
  return {t.covariant(p, p).dot(v) / norm2, t.covariant(q, q).dot(v) / norm2,
          (t.covariant(p, q) + t.covariant(q, p)).dot(v) / norm2};
}

/// Coefficients of the mean curvature form: omega_k = <nabla_V V, E_k>.
template <class S>
Vec3<S> mean_curvature(const ChristoffelTable<S>& t, const Vec3<S>& v) {
  return t.covariant(v, v);
}

/// d(omega)(A, B) for left-invariant omega, A, B: only -omega([A,B]) survives.
template <class S>
S exterior_derivative(const MilnorTriple<S>& m, const Vec3<S>& omega, const Vec3<S>& a, const Vec3<S>& b) {
  return -omega.dot(frame_bracket(m, a, b));
}

template <class S>
struct ExactFoliationAnalysis {
  MetricResiduals<S> residuals;
  Vec3<S> omega;
  /// d(omega) on kFramePairs.
  Vec3<S> d_omega;
  bool is_metric;
  bool is_closed;
};

template <class S>
ExactFoliationAnalysis<S> analyze_left_invariant(const MilnorTriple<S>& m, const Vec3<S>& v) {
  const ChristoffelTable<S> t = christoffel(m);
  ExactFoliationAnalysis<S> out{metric_residuals(t, v), mean_curvature(t, v), Vec3<S>::Zero(), false, false};
  for (int p = 0; p < 3; ++p) {
    out.d_omega(p) = exterior_derivative(m, out.omega, basis_vector<S>(kFramePairs[p][0]),
                                         basis_vector<S>(kFramePairs[p][1]));
  }
  out.is_metric = is_zero(out.residuals.uu) && is_zero(out.residuals.ww) && is_zero(out.residuals.mixed);
  out.is_closed = is_zero(out.d_omega(0)) && is_zero(out.d_omega(1)) && is_zero(out.d_omega(2));
  return out;
}

// --- The inhomogeneous foliation of a metric with x > y > z -----------------

/// V = v2 E2 + v3 E3 with v2 = sqrt((y-z)/(x-z)), v3 = sqrt((x-y)/(x-z)),
/// completed by U = E1, W = -v3 E2 + v2 E3. Satisfies v2^2 + v3^2 = 1 and
/// v2^2 (x - y) = v3^2 (y - z).
template <class S>
struct InhomogeneousFoliation {
  MilnorTriple<S> metric;
  S v2;
  S v3;

  Vec3<S> field() const { return {S(0), v2, v3}; }
  Vec3<S> u() const { return {S(1), S(0), S(0)}; }
  Vec3<S> w() const { return {S(0), -v3, v2}; }
  /// -4 v2 v3 y (x - z), the value of d(omega)(E2, E3).
  S predicted_d_omega() const { return S(-4) * v2 * v3 * metric.y * (metric.x - metric.z); }
};

/// Exact construction over Q(sqrt a)(sqrt b). Requires x > y > z > 0.
InhomogeneousFoliation<SurdNumber> build_inhomogeneous_foliation(const MilnorTriple<Rational>& m);
InhomogeneousFoliation<double> build_inhomogeneous_foliation(const MilnorTriple<double>& m);

// --- Homogeneity certificate ------------------------------------------------

enum class CertificateStatus { Success, NotClosed, NotKilling };
std::string to_string(CertificateStatus s);

template <class S>
struct ClosednessWitness {
  int first;   // frame index, 0-based
  int second;  // frame index, 0-based
  S value;     // d(omega)(E_first, E_second)
  std::size_t sample = 0;
};

template <class S>
struct ExactCertificate {
  CertificateStatus status;
  std::optional<ClosednessWitness<S>> witness;
  /// Symmetrized covariant derivative of X = V (f = 0) when omega is closed.
  Mat3<S> killing;
};

/// Left-invariant V: a closed left-invariant one-form on su(2) vanishes, so
/// f = 0 and the certificate reduces to V itself being Killing.
template <class S>
ExactCertificate<S> homogeneity_certificate(const MilnorTriple<S>& m, const Vec3<S>& v) {
  const ExactFoliationAnalysis<S> a = analyze_left_invariant(m, v);
  for (int p = 0; p < 3; ++p) {
    if (!is_zero(a.d_omega(p))) {
      return {CertificateStatus::NotClosed,
              ClosednessWitness<S>{kFramePairs[p][0], kFramePairs[p][1], a.d_omega(p), 0},
              Mat3<S>::Zero()};
    }
  }
  const Mat3<S> k = killing_residual(christoffel(m), v);
  bool zero = true;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) zero = zero && is_zero(k(i, j));
  return {zero ? CertificateStatus::Success : CertificateStatus::NotKilling, std::nullopt, k};
}

// --- Double path -------------------------------------------------------------

struct FoliationOptions {
  /// Differencing of V and other directly evaluated fields.
  DerivativeOptions inner{1e-5, true};
  /// Differencing of quantities that are themselves difference quotients.
  DerivativeOptions outer{1e-3, true};
};

struct SampleResiduals {
  Eigen::Vector3d metric;   // (uu, ww, mixed)
  Eigen::Vector3d omega;    // mean curvature coefficients
  Eigen::Vector3d d_omega;  // on kFramePairs
};

struct FoliationReport {
  std::vector<SampleResiduals> samples;
  double tolerance = 1e-6;
  double max_metric_residual = 0.0;
  double max_d_omega = 0.0;
  bool is_metric = false;
  bool is_closed = false;
  std::string certificate = "not_run";
};

/// Residuals at each sample (only the first sample is used for left-invariant
/// V). Throws DomainError for a general V evaluated outside O.
FoliationReport is_metric_foliation(const MilnorTriple<double>& m, const FrameField& v,
                                    std::span<const GroupPoint> samples, double tol = 1e-6,
                                    const FoliationOptions& opt = {});

/// Metric residuals at one point, from the covariant derivative of V alone:
/// for sections X, Y of V^perp, <nabla_X Y, V> = -<Y, nabla_X V>.
Eigen::Vector3d metric_residuals_at(const MilnorTriple<double>& m, const ChristoffelTable<double>& t,
                                    const FrameField& v, const GroupPoint& g, const DerivativeOptions& opt = {});

OneFormField mean_curvature(const MilnorTriple<double>& m, const FrameField& v, const DerivativeOptions& opt = {});

/// d(omega)(X, Y) = X(omega(Y)) - Y(omega(X)) - omega([X, Y]); the derivative
/// terms are skipped when the data are left-invariant.
double exterior_derivative(const MilnorTriple<double>& m, const OneFormField& omega, const FrameField& x,
                           const FrameField& y, const GroupPoint& g, const FoliationOptions& opt = {});

struct CertificateOptions {
  double closed_tolerance = 1e-6;
  double killing_tolerance = 1e-5;
  int simpson_panels = 64;
  FoliationOptions derivatives{};
};

struct HomogeneityCertificate {
  CertificateStatus status = CertificateStatus::NotClosed;
  std::optional<ClosednessWitness<double>> witness;
  double max_d_omega = 0.0;
  double max_killing_residual = 0.0;
  /// f at each sample, f(base) = 0.
  std::vector<double> potential;
  /// X = e^{-f} V. Meaningful when omega is closed.
  FrameField killing_field;
};

/// f(p) = integral of omega along s -> base exp(s log(base^-1 p)), s in [0,1],
/// by composite Simpson with `panels` panels.
double mean_curvature_potential(const MilnorTriple<double>& m, const OneFormField& omega, const GroupPoint& base,
                                const GroupPoint& p, int panels = 64);

/// Checks d(omega) = 0 at every sample (fails fast with a witness), builds f
/// with df = omega by line integration from `base`, and measures the Killing
/// residual of X = e^{-f} V at the samples.
HomogeneityCertificate homogeneity_certificate(const MilnorTriple<double>& m, const FrameField& v,
                                               const GroupPoint& base, std::span<const GroupPoint> samples,
                                               const CertificateOptions& opt = {});

// --- Killing foliations of Berger spheres -----------------------------------

/// K = (right-invariant field of xi) + hopf * Y3 on the Berger sphere h_eps.
struct KillingGenerator {
  AlgebraVectord xi = AlgebraVectord::Zero();
  double hopf = 0.0;
};

FrameField killing_field(double eps, const KillingGenerator& gen);
/// K / |K|; throws EvaluationError where K vanishes.
FrameField normalized_killing_field(double eps, const KillingGenerator& gen);

/// Random points base * exp(xi), |xi| <= radius, such that |K| > min_norm along
/// the whole segment from base and sin(psi) > min_sin_psi at the point.
std::vector<GroupPoint> sample_killing_region(double eps, const KillingGenerator& gen, const GroupPoint& base,
                                              std::size_t count, double radius, double min_norm,
                                              double min_sin_psi, std::mt19937_64& rng);

struct KillingFoliationSample {
  FrameField v;  // K / |K|
  GroupPoint base;
  std::vector<GroupPoint> points;
};

/// Picks a random base point where |K| and sin(psi) are comfortably away
/// from zero, then `count` points around it with sample_killing_region.
KillingFoliationSample killing_foliation_sample(double eps, const KillingGenerator& gen, std::size_t count,
                                                std::mt19937_64& rng);

/// Uniform point of S^3.
GroupPoint random_group_point(std::mt19937_64& rng);

// --- Identities satisfied by metric foliations of a Berger sphere -----------

struct LemmaOptions {
  /// Step of the differencing being measured.
  double step = 1e-4;
  bool richardson = false;
  /// Inner level of nested derivatives (always Richardson-refined).
  double inner_step = 1e-3;
};

struct LemmaEntry {
  std::string name;
  double max_abs = 0.0;
  /// Derivative of a difference quotient; its roundoff floor is higher.
  bool nested = false;
};

struct LemmaReport {
  std::vector<LemmaEntry> entries;
  double max_abs() const;
  const LemmaEntry& at(std::string_view name) const;
};

/// Max |residual| over samples, per identity:
///   Y3(psi), Y3(nu) + 2/eps, W(psi),
///   U(psi) + sin(psi) W(nu) + (2 - 2/eps) sin^2(psi), V(psi),
///   <U, [U,V]>, V(U(psi)), Y3(V(nu)), V(V(nu)),
///   [Y3,V], [Y3,U], [Y3,W] (norms)
///   nabla_V V - f U with f = V(nu) sin(psi) + (1/eps - 1) sin(2 psi).
/// Samples must lie in O.
LemmaReport lemma_equalities_check(double eps, const FrameField& v, std::span<const GroupPoint> samples,
                                   const LemmaOptions& opt = {});

struct ConvergenceEntry {
  std::string name;
  double coarse = 0.0;  // residual at the coarse step
  double fine = 0.0;    // residual at the fine step
  double order = 0.0;   // log(coarse/fine) / log(coarse_step/fine_step)
  bool at_noise_floor = false;
};

struct ConvergenceOptions {
  double coarse_step = 1e-3;
  double fine_step = 1e-4;
  /// Fine-step residuals below these are roundoff, not truncation error:
  /// about 1e-16 / h for one difference and 1e-16 / (h h_inner) for two,
  /// times the angle derivatives' 1/sin(psi) factor (up to 10 on the samples).
  double noise_floor = 1e-10;
  double nested_noise_floor = 1e-7;
};

/// Runs the identity check with plain central differences at two steps and
/// reports the observed order. Entries already at the noise floor at the fine
/// step are flagged instead of fitted.
std::vector<ConvergenceEntry> lemma_convergence(double eps, const FrameField& v, std::span<const GroupPoint> samples,
                                                const ConvergenceOptions& opt = {});

}  // namespace homsphere
