#include "homsphere/milnor.hpp"

#include <cmath>

namespace homsphere {

std::string to_string(IsometryKind kind) {
  switch (kind) {
    case IsometryKind::RoundSphere: return "RoundSphere";
    case IsometryKind::BergerHomothety: return "BergerHomothety";
    case IsometryKind::NonNaturallyReductive: return "NonNaturallyReductive";
  }
  return "Unknown";
}

Eigen::Vector3d frame_scales(const MilnorTriple<double>& m) {
  return {std::sqrt(m.z * m.x), std::sqrt(m.x * m.y), std::sqrt(m.y * m.z)};
}

AlgebraVectord frame_generator(const MilnorTriple<double>& m, int i) {
  AlgebraVectord e = AlgebraVectord::Zero();
  e(i) = frame_scales(m)(i);
  return e;
}

AlgebraVectord to_algebra(const MilnorTriple<double>& m, const Eigen::Vector3d& coeffs) {
  return frame_scales(m).cwiseProduct(coeffs);
}

Eigen::Vector3d from_algebra(const MilnorTriple<double>& m, const AlgebraVectord& a) {
  return a.cwiseQuotient(frame_scales(m));
}

Eigen::Vector3d frame_gradient(const MilnorTriple<double>& m, const ScalarField& f, const GroupPoint& g,
                               const DerivativeOptions& opt) {
  Eigen::Vector3d grad;
  for (int i = 0; i < 3; ++i) grad(i) = frame_derivative(f, g, frame_generator(m, i), opt);
  return grad;
}

Eigen::Matrix3d covariant_jacobian(const MilnorTriple<double>& m, const ChristoffelTable<double>& t,
                                   const FrameField& x, const GroupPoint& g, const DerivativeOptions& opt) {
  Eigen::Matrix3d d = t.connection_matrix(x(g));
  if (!x.is_left_invariant()) d += frame_jacobian(m, x, g, opt);
  return d;
}

Eigen::Vector3d nabla(const MilnorTriple<double>& m, const ChristoffelTable<double>& t, const FrameField& a,
                      const FrameField& b, const GroupPoint& g, const DerivativeOptions& opt) {
  return covariant_jacobian(m, t, b, g, opt) * a(g);
}

Eigen::Vector3d lie_bracket(const MilnorTriple<double>& m, const FrameField& a, const FrameField& b,
                            const GroupPoint& g, const DerivativeOptions& opt) {
  const Eigen::Vector3d av = a(g);
  const Eigen::Vector3d bv = b(g);
  Eigen::Vector3d out = frame_bracket(m, av, bv);
  if (!b.is_left_invariant()) out += frame_jacobian(m, b, g, opt) * av;
  if (!a.is_left_invariant()) out -= frame_jacobian(m, a, g, opt) * bv;
  return out;
}

Eigen::Matrix3d killing_residual(const MilnorTriple<double>& m, const ChristoffelTable<double>& t,
                                 const FrameField& x, const GroupPoint& g, const DerivativeOptions& opt) {
  const Eigen::Matrix3d d = covariant_jacobian(m, t, x, g, opt);
  return d + d.transpose();
}

FrameField right_invariant_field(const MilnorTriple<double>& m, const AlgebraVectord& xi) {
  const Eigen::Vector3d scales = frame_scales(m);
  return FrameField::general([xi, scales](const GroupPoint& g) -> Eigen::Vector3d {
    return adjoint(inverse(g), xi).cwiseQuotient(scales);
  });
}

}  // namespace homsphere
