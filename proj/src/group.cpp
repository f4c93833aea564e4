#include "homsphere/group.hpp"

#include <stdexcept>
#include <string>

namespace homsphere {

namespace {

constexpr double kUnitTolerance = 1e-12;

Eigen::Quaterniond normalized(const Eigen::Quaterniond& q) {
  const double n = q.norm();
  if (!std::isfinite(n) || n == 0.0) throw DomainError("GroupPoint: zero or non-finite quaternion");
  return Eigen::Quaterniond(q.coeffs() / n);
}

}  // namespace

GroupPoint::GroupPoint(const Eigen::Quaterniond& q) : q_(normalized(q)) {}

GroupPoint GroupPoint::from_matrix(const Eigen::Matrix2cd& m) {
  const std::complex<double> z = m(0, 0);
  const std::complex<double> w = m(1, 0);
  if (std::abs(m(1, 1) - std::conj(z)) > 1e-9 || std::abs(m(0, 1) + std::conj(w)) > 1e-9) {
    throw DomainError("GroupPoint::from_matrix: matrix is not of the form [[z, -conj(w)], [w, conj(z)]]");
  }
  const double det = std::norm(z) + std::norm(w);
  if (std::abs(det - 1.0) > 1e-9) throw DomainError("GroupPoint::from_matrix: determinant is not 1");
  return GroupPoint(z.real(), z.imag(), w.real(), -w.imag());
}

Eigen::Matrix2cd GroupPoint::matrix() const {
  using C = std::complex<double>;
  Eigen::Matrix2cd m;
  m << C(q_.w(), q_.x()), C(-q_.y(), -q_.z()),
       C(q_.y(), -q_.z()), C(q_.w(), -q_.x());
  return m;
}

GroupPoint operator*(const GroupPoint& g, const GroupPoint& h) {
  return GroupPoint(g.quaternion() * h.quaternion());
}

GroupPoint inverse(const GroupPoint& g) { return GroupPoint(g.quaternion().conjugate()); }

double distance(const GroupPoint& p, const GroupPoint& q) { return (p.coeffs() - q.coeffs()).norm(); }

Eigen::Quaterniond to_pure_quaternion(const AlgebraVectord& a) {
  return Eigen::Quaterniond(0.0, a(2), -a(0), -a(1));
}

AlgebraVectord from_pure_quaternion(const Eigen::Quaterniond& q) { return {-q.y(), -q.z(), q.x()}; }

Eigen::Matrix2cd basis_matrix(int i) {
  using C = std::complex<double>;
  Eigen::Matrix2cd m;
  switch (i) {
    case 0: m << C(0, 0), C(1, 0), C(-1, 0), C(0, 0); break;
    case 1: m << C(0, 0), C(0, 1), C(0, 1), C(0, 0); break;
    case 2: m << C(0, 1), C(0, 0), C(0, 0), C(0, -1); break;
    default: throw DomainError("basis_matrix: index must be 0, 1 or 2");
  }
  return m;
}

Eigen::Matrix2cd algebra_matrix(const AlgebraVectord& a) {
  return a(0) * basis_matrix(0) + a(1) * basis_matrix(1) + a(2) * basis_matrix(2);
}

GroupPoint alg_exp(const AlgebraVectord& a) {
  const double theta = a.norm();
  if (theta == 0.0) return GroupPoint::identity();
  // sin(theta)/theta is evaluated directly; theta > 0 and sin is accurate near 0.
  const double c = std::cos(theta);
  const double s = std::sin(theta) / theta;
  const Eigen::Quaterniond u = to_pure_quaternion(a);
  return GroupPoint(c, s * u.x(), s * u.y(), s * u.z());
}

AlgebraVectord alg_log(const GroupPoint& g) {
  const Eigen::Quaterniond& q = g.quaternion();
  const double v = q.vec().norm();
  if (v == 0.0) {
    if (q.w() > 0) return AlgebraVectord::Zero();
    throw DomainError("alg_log: logarithm at -identity is not unique");
  }
  const double theta = std::atan2(v, q.w());
  return (theta / v) * from_pure_quaternion(Eigen::Quaterniond(0.0, q.x(), q.y(), q.z()));
}

AlgebraVectord adjoint(const GroupPoint& g, const AlgebraVectord& a) {
  const Eigen::Quaterniond& q = g.quaternion();
  return from_pure_quaternion(q * to_pure_quaternion(a) * q.conjugate());
}

GroupPoint hopf_flow(double eps, double s, const GroupPoint& g) {
  if (!(eps > 0)) throw DomainError("hopf_flow: eps must be positive");
  return g * alg_exp(AlgebraVectord(0.0, 0.0, s / eps));
}

void isomorphism_self_test() {
  for (int i = 0; i < 3; ++i) {
    const Eigen::Matrix2cd xi = basis_matrix(i);
    const AlgebraVectord ei = basis_vector<double>(i);
    // x_i squares to -identity and maps to the matching pure quaternion.
    if (!(xi * xi + Eigen::Matrix2cd::Identity()).isZero(kUnitTolerance)) {
      throw std::logic_error("self test: x" + std::to_string(i + 1) + " does not square to -1");
    }
    const Eigen::Matrix2cd via_quaternion =
        GroupPoint(alg_exp((M_PI / 2) * ei)).matrix();  // exp(pi/2 x_i) = x_i
    if (!(via_quaternion - xi).isZero(kUnitTolerance)) {
      throw std::logic_error("self test: quaternion image of x" + std::to_string(i + 1) + " is wrong");
    }
    for (int j = 0; j < 3; ++j) {
      const Eigen::Matrix2cd xj = basis_matrix(j);
      const Eigen::Matrix2cd commutator = xi * xj - xj * xi;
      const Eigen::Matrix2cd table = algebra_matrix(bracket<double>(ei, basis_vector<double>(j)));
      if (!(commutator - table).isZero(kUnitTolerance)) {
        throw std::logic_error("self test: bracket table disagrees with matrix commutator");
      }
    }
  }
  const GroupPoint g(0.3, -0.2, 0.9, 0.1);
  const GroupPoint h(-0.5, 0.4, 0.2, 0.7);
  if (!((g * h).matrix() - g.matrix() * h.matrix()).isZero(kUnitTolerance)) {
    throw std::logic_error("self test: quaternion product is not the matrix product");
  }
}

}  // namespace homsphere
