#pragma once

// SU(2) and su(2).
//
// Algebra vectors are coefficients against the basis
//
//   x1 = [[0, 1], [-1, 0]],  x2 = [[0, i], [i, 0]],  x3 = [[i, 0], [0, -i]]
//
// with [x1,x2] = 2x3, [x2,x3] = 2x1, [x3,x1] = 2x2. Group points are unit
// quaternions q = w + x i + y j + z k. The fixed isomorphism to SU(2) is
//
//   q  ->  [[w + x i, -y - z i], [y - z i, w - x i]]
//
// which sends x1 -> -j, x2 -> -k, x3 -> i. `isomorphism_self_test` checks the
// bracket table and the homomorphism property against explicit 2x2 matrices.

#include <cmath>
#include <complex>
#include <concepts>
#include <type_traits>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "homsphere/errors.hpp"
#include "homsphere/scalar.hpp"

namespace homsphere {

template <class S>
using Vec3 = Eigen::Matrix<S, 3, 1>;
template <class S>
using Mat3 = Eigen::Matrix<S, 3, 3>;

/// Coefficients (a1, a2, a3) against x1, x2, x3.
template <class S>
using AlgebraVector = Vec3<S>;
using AlgebraVectord = AlgebraVector<double>;

/// su(2) bracket. With [x1,x2] = 2x3 (cyclic) this is twice the cross product.
template <class S>
AlgebraVector<S> bracket(const AlgebraVector<S>& a, const AlgebraVector<S>& b) {
  return S(2) * a.cross(b);
}

template <class S>
AlgebraVector<S> basis_vector(int i) {
  AlgebraVector<S> e = AlgebraVector<S>::Zero();
  e(i) = S(1);
  return e;
}

/// Point of SU(2) stored as a unit quaternion; renormalized on construction.
class GroupPoint {
 public:
  GroupPoint() : q_(Eigen::Quaterniond::Identity()) {}
  GroupPoint(double w, double x, double y, double z) : GroupPoint(Eigen::Quaterniond(w, x, y, z)) {}
  explicit GroupPoint(const Eigen::Quaterniond& q);

  static GroupPoint identity() { return GroupPoint(); }
  /// Inverse of `matrix()`; the input must be special unitary.
  static GroupPoint from_matrix(const Eigen::Matrix2cd& m);

  Eigen::Matrix2cd matrix() const;
  const Eigen::Quaterniond& quaternion() const { return q_; }
  /// (w, x, y, z)
  Eigen::Vector4d coeffs() const { return {q_.w(), q_.x(), q_.y(), q_.z()}; }

  double w() const { return q_.w(); }
  double x() const { return q_.x(); }
  double y() const { return q_.y(); }
  double z() const { return q_.z(); }

 private:
  Eigen::Quaterniond q_;
};

GroupPoint operator*(const GroupPoint& g, const GroupPoint& h);
GroupPoint inverse(const GroupPoint& g);

inline GroupPoint group_mul(const GroupPoint& g, const GroupPoint& h) { return g * h; }
inline GroupPoint group_inv(const GroupPoint& g) { return inverse(g); }

/// Euclidean distance |p - q| in R^4 (no identification of q with -q).
double distance(const GroupPoint& p, const GroupPoint& q);

/// Image of an algebra vector as a pure quaternion.
Eigen::Quaterniond to_pure_quaternion(const AlgebraVectord& a);
AlgebraVectord from_pure_quaternion(const Eigen::Quaterniond& q);

/// The matrix of x_i (i = 0, 1, 2 for x1, x2, x3).
Eigen::Matrix2cd basis_matrix(int i);
Eigen::Matrix2cd algebra_matrix(const AlgebraVectord& a);

/// exp(a) = cos|a| + sin|a| a/|a|, each x_i squaring to minus the identity.
GroupPoint alg_exp(const AlgebraVectord& a);
/// Principal logarithm, |result| <= pi. Throws DomainError at -identity.
AlgebraVectord alg_log(const GroupPoint& g);

/// Ad(g) a = g a g^-1.
AlgebraVectord adjoint(const GroupPoint& g, const AlgebraVectord& a);

/// g exp((s/eps) x3): the time-s flow of the unit Killing field Y3 = eps^-1 X3
/// of the Berger metric with parameter eps.
GroupPoint hopf_flow(double eps, double s, const GroupPoint& g);

/// Checks that the quaternion convention reproduces the su(2) bracket table and
/// that `GroupPoint::matrix` is a homomorphism. Throws std::logic_error on
/// mismatch; run once at program start.
void isomorphism_self_test();

namespace detail {

inline bool all_finite(double v) { return std::isfinite(v); }
template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
  return v.allFinite();
}

}  // namespace detail

struct DerivativeOptions {
  double step = 1e-5;
  bool richardson = true;
};

/// Derivative of F at g along the left-invariant field with value `generator`
/// at the identity:
///   (F(g exp(h e)) - F(g exp(-h e))) / 2h,
/// optionally refined once by Richardson extrapolation with h/2. F may return
/// a double or a fixed-size Eigen vector.
template <class F>
auto frame_derivative(const F& fn, const GroupPoint& g, const AlgebraVectord& generator,
                      const DerivativeOptions& opt = {}) {
  using Value = std::decay_t<decltype(fn(g))>;
  if (!(opt.step > 0)) throw DomainError("frame_derivative: step must be positive");
  auto central = [&](double h) -> Value {
    const Value fp = fn(g * alg_exp(h * generator));
    const Value fm = fn(g * alg_exp(-h * generator));
    if (!detail::all_finite(fp) || !detail::all_finite(fm)) {
      throw EvaluationError("frame_derivative: non-finite function value");
    }
    return Value((fp - fm) / (2.0 * h));
  };
  const Value coarse = central(opt.step);
  if (!opt.richardson) return coarse;
  const Value fine = central(0.5 * opt.step);
  return Value((4.0 * fine - coarse) / 3.0);
}

}  // namespace homsphere
