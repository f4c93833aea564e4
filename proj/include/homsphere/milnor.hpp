#pragma once

// Left-invariant metrics on SU(2) in Milnor frames.
//
// A Milnor triple (x, y, z) fixes an orthonormal left-invariant frame E1, E2, E3
// with
//   [E1,E2] = 2x E3,  [E2,E3] = 2y E1,  [E3,E1] = 2z E2.
// Realized inside su(2) as E_i = s_i x_i with s1 = sqrt(zx), s2 = sqrt(xy),
// s3 = sqrt(yz). The Berger metric h_eps has triple (1, 1/eps, 1/eps) and its
// frame is Y1 = eps^-1/2 X1, Y2 = eps^-1/2 X2, Y3 = eps^-1 X3.
//
// Indices are 0-based in code: gamma(i, j, k) = <nabla_{E_i} E_j, E_k>.

#include <algorithm>
#include <array>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "homsphere/fields.hpp"
#include "homsphere/group.hpp"
#include "homsphere/scalar.hpp"

namespace homsphere {

template <class S>
struct MilnorTriple {
  S x, y, z;

  MilnorTriple(S x_, S y_, S z_) : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {
    if (!(signum(x) > 0 && signum(y) > 0 && signum(z) > 0)) {
      throw DomainError("MilnorTriple: structure constants must be positive");
    }
  }

  template <class T>
  MilnorTriple<T> cast() const {
    if constexpr (std::floating_point<T>) {
      return {to_double(x), to_double(y), to_double(z)};
    } else {
      return {T(x), T(y), T(z)};
    }
  }

  Vec3<S> as_vector() const { return {x, y, z}; }

  friend bool operator==(const MilnorTriple& a, const MilnorTriple& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
  }
};

/// Triple of the Berger frame Y1, Y2, Y3: (1, 1/eps, 1/eps).
template <class S>
MilnorTriple<S> berger_triple(const S& eps) {
  if (!(signum(eps) > 0)) throw DomainError("berger_triple: eps must be positive");
  const S inv = S(1) / eps;
  return {S(1), inv, inv};
}

/// Scales s_i with E_i = s_i x_i.
Eigen::Vector3d frame_scales(const MilnorTriple<double>& m);
/// E_i(e) as an algebra vector.
AlgebraVectord frame_generator(const MilnorTriple<double>& m, int i);
/// Frame coefficients -> algebra vector, and back.
AlgebraVectord to_algebra(const MilnorTriple<double>& m, const Eigen::Vector3d& coeffs);
Eigen::Vector3d from_algebra(const MilnorTriple<double>& m, const AlgebraVectord& a);

/// Frame coefficients of [A, B] for left-invariant A, B.
template <class S>
Vec3<S> frame_bracket(const MilnorTriple<S>& m, const Vec3<S>& a, const Vec3<S>& b) {
  const Vec3<S> c = a.cross(b);
  return {S(2) * m.y * c(0), S(2) * m.z * c(1), S(2) * m.x * c(2)};
}

template <class S>
struct ChristoffelTable {
  /// gamma[i](j, k) = <nabla_{E_i} E_j, E_k>
  std::array<Mat3<S>, 3> gamma{Mat3<S>::Zero(), Mat3<S>::Zero(), Mat3<S>::Zero()};

  const S& operator()(int i, int j, int k) const { return gamma[i](j, k); }
  S& operator()(int i, int j, int k) { return gamma[i](j, k); }

  /// nabla_A B for left-invariant A, B.
  Vec3<S> covariant(const Vec3<S>& a, const Vec3<S>& b) const {
    Vec3<S> out = Vec3<S>::Zero();
    for (int i = 0; i < 3; ++i) out += a(i) * (gamma[i].transpose() * b);
    return out;
  }

  /// Column i holds nabla_{E_i} B for left-invariant B.
  Mat3<S> connection_matrix(const Vec3<S>& b) const {
    Mat3<S> d;
    for (int i = 0; i < 3; ++i) d.col(i) = gamma[i].transpose() * b;
    return d;
  }
};

/// Koszul formula specialized to a Milnor frame:
///   G(1,2,3) = x+z-y = -G(1,3,2),  G(2,3,1) = x+y-z = -G(2,1,3),
///   G(3,1,2) = y+z-x = -G(3,2,1), all other entries zero.
template <class S>
ChristoffelTable<S> christoffel(const MilnorTriple<S>& m) {
  ChristoffelTable<S> t;
  const S a = m.x + m.z - m.y;
  const S b = m.x + m.y - m.z;
  const S c = m.y + m.z - m.x;
  t(0, 1, 2) = a;
  t(0, 2, 1) = -a;
  t(1, 2, 0) = b;
  t(1, 0, 2) = -b;
  t(2, 0, 1) = c;
  t(2, 1, 0) = -c;
  return t;
}

/// R(i, j, k, l) = <R(E_i, E_j) E_k, E_l> with
/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
template <class S>
class CurvatureTensor {
 public:
  CurvatureTensor(const ChristoffelTable<S>& t, const MilnorTriple<S>& m) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const Vec3<S> brk = frame_bracket(m, basis_vector<S>(i), basis_vector<S>(j));
        for (int k = 0; k < 3; ++k) {
          const Vec3<S> ek = basis_vector<S>(k);
          const Vec3<S> r = t.covariant(basis_vector<S>(i), t.covariant(basis_vector<S>(j), ek)) -
                            t.covariant(basis_vector<S>(j), t.covariant(basis_vector<S>(i), ek)) -
                            t.covariant(brk, ek);
          for (int l = 0; l < 3; ++l) r_[index(i, j, k, l)] = r(l);
        }
      }
    }
  }

  const S& operator()(int i, int j, int k, int l) const { return r_[index(i, j, k, l)]; }

  /// <R(u,v)v,u> / (|u|^2 |v|^2 - <u,v>^2)
  S sectional(const Vec3<S>& u, const Vec3<S>& v) const {
    S num(0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) num += u(i) * v(j) * v(k) * u(l) * (*this)(i, j, k, l);
    const S area = u.dot(u) * v.dot(v) - u.dot(v) * u.dot(v);
    if (signum(area) == 0) throw DomainError("sectional curvature: vectors span no plane");
    return num / area;
  }

 private:
  static int index(int i, int j, int k, int l) { return ((i * 3 + j) * 3 + k) * 3 + l; }
  std::array<S, 81> r_;
};

/// K(E_i, E_j), i != j.
template <class S>
S sectional_curvature(const ChristoffelTable<S>& t, const MilnorTriple<S>& m, int i, int j) {
  if (i == j) throw DomainError("sectional_curvature: frame indices must differ");
  const CurvatureTensor<S> r(t, m);
  return r(i, j, j, i);
}

enum class IsometryKind { RoundSphere, BergerHomothety, NonNaturallyReductive };

std::string to_string(IsometryKind kind);

template <class S>
struct IsometryClass {
  IsometryKind kind;
  /// Triple sorted in decreasing order; identical for every permutation.
  MilnorTriple<S> canonical;
  /// distinct / repeated constant, when kind == BergerHomothety. Rescaling the
  /// triple to (1, 1/eps, 1/eps) puts it in the Berger frame pattern.
  std::optional<S> epsilon;
};

/// Isometry class of the metric from the Sym(3)-orbit of its triple. Ties are
/// decided with `nearly_equal(., ., tol)`; tol = 0 is exact.
template <class S>
IsometryClass<S> classify(const MilnorTriple<S>& m, const S& tol = S(0)) {
  std::array<S, 3> v{m.x, m.y, m.z};
  std::sort(v.begin(), v.end(), [](const S& a, const S& b) { return a > b; });
  const MilnorTriple<S> canonical(v[0], v[1], v[2]);
  const bool top = nearly_equal(v[0], v[1], tol);
  const bool bottom = nearly_equal(v[1], v[2], tol);
  if (nearly_equal(v[0], v[2], tol) || (top && bottom)) {
    return {IsometryKind::RoundSphere, canonical, std::nullopt};
  }
  if (top) return {IsometryKind::BergerHomothety, canonical, v[2] / v[0]};
  if (bottom) return {IsometryKind::BergerHomothety, canonical, v[0] / v[1]};
  return {IsometryKind::NonNaturallyReductive, canonical, std::nullopt};
}

/// K_ij = <nabla_{E_i} X, E_j> + <nabla_{E_j} X, E_i> for left-invariant X.
template <class S>
Mat3<S> killing_residual(const ChristoffelTable<S>& t, const Vec3<S>& x) {
  const Mat3<S> d = t.connection_matrix(x);
  return d + d.transpose();
}

// Naturally reductive structure of the Berger sphere as the coset space
// (R x SU(2)) / H. The complement m has basis (b1, b2, v) with
// v = (eps - 1) b0 + eps b3 and h is spanned by u = b0 + b3.

/// Coordinates in (b1, b2, v) of the m-component of r b0 + s1 b1 + s2 b2 + s3 b3,
/// splitting along h: the element equals s1 b1 + s2 b2 + p v + q u with
/// p = s3 - r, q = r - p (eps - 1).
template <class S>
Vec3<S> project_to_m(const S& r, const Vec3<S>& s) {
  return {s(0), s(1), s(2) - r};
}

/// [a, b]_m for a, b given in the (b1, b2, v) basis.
template <class S>
Vec3<S> reductive_bracket(const S& eps, const Vec3<S>& a, const Vec3<S>& b) {
  // c1 b1 + c2 b2 + c3 v has su(2) part (c1, c2, eps c3); R is central, so the
  // bracket has no b0 component.
  const Vec3<S> pa(a(0), a(1), eps * a(2));
  const Vec3<S> pb(b(0), b(1), eps * b(2));
  return project_to_m(S(0), bracket<S>(pa, pb));
}

/// <a, b> on m: b1, b2, v orthogonal with |b_i|^2 = eps, |v|^2 = eps^2.
template <class S>
S reductive_inner(const S& eps, const Vec3<S>& a, const Vec3<S>& b) {
  return eps * (a(0) * b(0) + a(1) * b(1)) + eps * eps * a(2) * b(2);
}

/// Max over basis triples of |<[a,b]_m, c> + <[a,c]_m, b>|. Zero iff the
/// decomposition is naturally reductive.
template <class S>
S nat_red_check(const S& eps) {
  if (!(signum(eps) > 0)) throw DomainError("nat_red_check: eps must be positive");
  S worst(0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        const Vec3<S> a = basis_vector<S>(i), b = basis_vector<S>(j), c = basis_vector<S>(k);
        const S res = reductive_inner(eps, reductive_bracket(eps, a, b), c) +
                      reductive_inner(eps, reductive_bracket(eps, a, c), b);
        worst = std::max(worst, abs_value(res));
      }
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Double layer: non-left-invariant fields, derivatives by finite differences.

/// J(k, i) = E_i(F^k) for a vector-valued function F.
template <class F>
Eigen::Matrix3d frame_jacobian(const MilnorTriple<double>& m, const F& fn, const GroupPoint& g,
                               const DerivativeOptions& opt = {}) {
  Eigen::Matrix3d j;
  for (int i = 0; i < 3; ++i) {
    j.col(i) = frame_derivative(fn, g, frame_generator(m, i), opt);
  }
  return j;
}

/// E_i(f), i = 0..2, for a scalar function f.
Eigen::Vector3d frame_gradient(const MilnorTriple<double>& m, const ScalarField& f, const GroupPoint& g,
                               const DerivativeOptions& opt = {});

/// Column i holds the frame coefficients of nabla_{E_i} X at g.
Eigen::Matrix3d covariant_jacobian(const MilnorTriple<double>& m, const ChristoffelTable<double>& t,
                                   const FrameField& x, const GroupPoint& g,
                                   const DerivativeOptions& opt = {});

/// Frame coefficients of nabla_A B at g. Exact (no differencing) when B is
/// left-invariant.
Eigen::Vector3d nabla(const MilnorTriple<double>& m, const ChristoffelTable<double>& t, const FrameField& a,
                      const FrameField& b, const GroupPoint& g, const DerivativeOptions& opt = {});

/// Lie bracket [A, B] at g: A(B^k) - B(A^k) plus the structure-constant term.
Eigen::Vector3d lie_bracket(const MilnorTriple<double>& m, const FrameField& a, const FrameField& b,
                            const GroupPoint& g, const DerivativeOptions& opt = {});

/// Symmetrized covariant derivative of X at g; X is Killing iff this vanishes
/// everywhere.
Eigen::Matrix3d killing_residual(const MilnorTriple<double>& m, const ChristoffelTable<double>& t,
                                 const FrameField& x, const GroupPoint& g, const DerivativeOptions& opt = {});

/// The right-invariant field g -> xi g, the generator of left translations by
/// exp(s xi). Left translations are isometries of every left-invariant metric.
FrameField right_invariant_field(const MilnorTriple<double>& m, const AlgebraVectord& xi);

}  // namespace homsphere
