#pragma once

// Scalar layers.
//
// Every algebraic routine in the library is templated on its scalar so the
// same code runs in two layers:
//   * double   - the float layer; comparisons always take an explicit tolerance
//   * Rational - exact arithmetic over Q, closed under + - * /
// plus an exact extension layer, SurdNumber = Q(sqrt a)(sqrt b), needed when a
// construction takes square roots of rationals (unit fields built from a
// rational Milnor triple).

#include <cmath>
#include <compare>
#include <concepts>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

#include "homsphere/errors.hpp"

namespace homsphere {

class Rational {
 public:
  using Int = boost::multiprecision::cpp_int;

  Rational() = default;
  template <std::integral I>
  Rational(I n) : v_(static_cast<long long>(n)) {}  // NOLINT: implicit by design of S(2)-style literals
  template <std::floating_point F>
  Rational(F) = delete;

  Rational(long long num, long long den) : Rational(Int(num), Int(den)) {}
  Rational(const Int& num, const Int& den) {
    if (den == 0) throw DomainError("Rational: zero denominator");
    v_ = Impl(num, den);
  }
  explicit Rational(const Int& n) : v_(n) {}

  /// Parses "7", "-3/4", "0.125", "2.5e-3" exactly.
  static Rational parse(std::string_view text);

  Int numerator() const { return boost::multiprecision::numerator(v_); }
  Int denominator() const { return boost::multiprecision::denominator(v_); }

  int sign() const { return v_.sign(); }
  double to_double() const { return v_.convert_to<double>(); }
  std::string str() const;

  Rational operator-() const { return Rational(-v_); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.sign() == 0) throw DomainError("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ > b.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  using Impl = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                             boost::multiprecision::et_off>;
  explicit Rational(Impl v) : v_(std::move(v)) {}
  Impl v_;
};

inline int signum(double x) { return (x > 0) - (x < 0); }
inline int signum(const Rational& x) { return x.sign(); }
inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.to_double(); }
inline std::string to_string(const Rational& x) { return x.str(); }

/// Square root of a rational that happens to be a perfect square.
std::optional<Rational> exact_sqrt(const Rational& r);

/// Element p + q*sqrt(r) of the quadratic extension K(sqrt r), r >= 0 in K.
///
/// K must be an ordered field with an exact `signum`. Elements that carry no
/// radical (q == 0) combine freely with any extension; two elements with
/// radicals must share the radicand. Signs are decided exactly, so equality
/// and ordering are exact as well.
template <class K>
class Surd;

namespace detail {
template <class T>
inline constexpr bool is_tower_scalar = std::same_as<T, Rational>;
template <class K>
inline constexpr bool is_tower_scalar<Surd<K>> = true;
}  // namespace detail

template <class K>
class Surd {
 public:
  using Base = K;

  Surd() = default;
  template <std::integral I>
  Surd(I n) : p_(n) {}  // NOLINT
  template <std::floating_point F>
  Surd(F) = delete;
  Surd(const K& p) : p_(p) {}  // NOLINT
  template <class T>
    requires(detail::is_tower_scalar<T> && !std::same_as<T, K> && !std::same_as<T, Surd> &&
             std::constructible_from<K, const T&>)
  Surd(const T& v) : p_(K(v)) {}  // NOLINT
  Surd(const K& p, const K& q, const K& r) : p_(p), q_(q), r_(r) {
    if (signum(r_) < 0) throw DomainError("Surd: negative radicand");
    normalize();
  }

  /// sqrt(r) as an element of K(sqrt r).
  static Surd sqrt_of(const K& r) { return Surd(K(0), K(1), r); }

  const K& rational_part() const { return p_; }
  const K& radical_coefficient() const { return q_; }
  const K& radicand() const { return r_; }
  bool has_radical() const { return signum(q_) != 0; }

  Surd operator-() const { return Surd(-p_, -q_, r_, Raw{}); }

  friend Surd operator+(const Surd& a, const Surd& b) {
    return Surd(a.p_ + b.p_, a.q_ + b.q_, common_radicand(a, b), Raw{});
  }
  friend Surd operator-(const Surd& a, const Surd& b) { return a + (-b); }
  friend Surd operator*(const Surd& a, const Surd& b) {
    const K r = common_radicand(a, b);
    return Surd(a.p_ * b.p_ + a.q_ * b.q_ * r, a.p_ * b.q_ + a.q_ * b.p_, r, Raw{});
  }
  friend Surd operator/(const Surd& a, const Surd& b) { return a * b.inverse(); }

  Surd& operator+=(const Surd& o) { return *this = *this + o; }
  Surd& operator-=(const Surd& o) { return *this = *this - o; }
  Surd& operator*=(const Surd& o) { return *this = *this * o; }
  Surd& operator/=(const Surd& o) { return *this = *this / o; }

  Surd inverse() const {
    if (signum(*this) == 0) throw DomainError("Surd: division by zero");
    if (!has_radical()) return Surd(K(1) / p_);
    const K norm = p_ * p_ - q_ * q_ * r_;
    // norm == 0 with a nonzero element means q sqrt(r) == p, so the value is 2p.
    if (signum(norm) == 0) return Surd(K(1) / (p_ + p_));
    return Surd(p_ / norm, -q_ / norm, r_, Raw{});
  }

  friend int signum(const Surd& x) {
    const int sp = signum(x.p_);
    const int sq = signum(x.q_);
    if (sq == 0) return sp;
    if (sp == 0 || sp == sq) return sq;
    return sp * signum(x.p_ * x.p_ - x.q_ * x.q_ * x.r_);
  }

  friend bool operator==(const Surd& a, const Surd& b) { return signum(a - b) == 0; }
  friend std::strong_ordering operator<=>(const Surd& a, const Surd& b) {
    const int s = signum(a - b);
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend double to_double(const Surd& x) {
    return to_double(x.p_) + to_double(x.q_) * std::sqrt(to_double(x.r_));
  }
  friend std::string to_string(const Surd& x) {
    using homsphere::to_string;
    if (!x.has_radical()) return to_string(x.p_);
    std::string out;
    if (signum(x.p_) != 0) out = to_string(x.p_) + " + ";
    return out + "(" + to_string(x.q_) + ")*sqrt(" + to_string(x.r_) + ")";
  }
  friend std::ostream& operator<<(std::ostream& os, const Surd& x) { return os << to_string(x); }

 private:
  struct Raw {};
  Surd(K p, K q, K r, Raw) : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)) { normalize(); }

  void normalize() {
    if (signum(q_) == 0 || signum(r_) == 0) {
      q_ = K(0);
      r_ = K(0);
    }
  }

  static K common_radicand(const Surd& a, const Surd& b) {
    if (!a.has_radical()) return b.r_;
    if (!b.has_radical()) return a.r_;
    if (signum(a.r_ - b.r_) != 0)
      throw DomainError("Surd: operands belong to different quadratic extensions");
    return a.r_;
  }

  K p_{0};
  K q_{0};
  K r_{0};
};

using Surd1 = Surd<Rational>;
/// Exact scalars of the biquadratic tower Q(sqrt a)(sqrt b).
using SurdNumber = Surd<Surd1>;

/// (sqrt a, sqrt b) in Q(sqrt a)(sqrt b), collapsing to a lower level whenever
/// a, b or a*b is a rational square, so that products like sqrt(a)*sqrt(b)
/// come out rational when they are.
std::pair<SurdNumber, SurdNumber> sqrt_pair(const Rational& a, const Rational& b);

template <class S>
S abs_value(const S& x) {
  if constexpr (std::floating_point<S>) {
    return std::abs(x);
  } else {
    return signum(x) < 0 ? -x : x;
  }
}

template <class S>
bool is_zero(const S& x) {
  return signum(x) == 0;
}

/// |a - b| <= tol * max(|a|, |b|). A zero tolerance is exact equality.
template <class S>
bool nearly_equal(const S& a, const S& b, const S& tol) {
  const S scale = std::max(abs_value(a), abs_value(b));
  return abs_value(a - b) <= tol * scale;
}

template <class S>
concept ExactScalar = !std::floating_point<S>;

}  // namespace homsphere

namespace Eigen {

template <>
struct NumTraits<homsphere::Rational> : GenericNumTraits<homsphere::Rational> {
  using Real = homsphere::Rational;
  using NonInteger = homsphere::Rational;
  using Nested = homsphere::Rational;
  using Literal = homsphere::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 64,
    MulCost = 128
  };
  static Real epsilon() { return Real(0); }
  static Real dummy_precision() { return Real(0); }
  static int digits10() { return 0; }
};

template <class K>
struct NumTraits<homsphere::Surd<K>> : GenericNumTraits<homsphere::Surd<K>> {
  using Real = homsphere::Surd<K>;
  using NonInteger = homsphere::Surd<K>;
  using Nested = homsphere::Surd<K>;
  using Literal = homsphere::Surd<K>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 24,
    AddCost = 256,
    MulCost = 1024
  };
  static Real epsilon() { return Real(0); }
  static Real dummy_precision() { return Real(0); }
  static int digits10() { return 0; }
};

}  // namespace Eigen
