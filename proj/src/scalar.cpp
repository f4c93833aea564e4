#include "homsphere/scalar.hpp"

#include <cctype>

namespace homsphere {

namespace {

Rational::Int parse_digits(std::string_view digits) {
  if (digits.empty()) return Rational::Int(0);
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw DomainError("Rational::parse: unexpected character '" + std::string(1, c) + "'");
    }
  }
  return Rational::Int(std::string(digits));
}

Rational::Int pow10(long long n) {
  Rational::Int r(1);
  for (long long i = 0; i < n; ++i) r *= 10;
  return r;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw DomainError("Rational::parse: empty input");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational num = parse(text.substr(0, slash));
    const Rational den = parse(text.substr(slash + 1));
    if (den.sign() == 0) throw DomainError("Rational::parse: zero denominator");
    return num / den;
  }

  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  long long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (exp_text.empty() || exp_text.size() > 6) throw DomainError("Rational::parse: bad exponent");
    exponent = parse_digits(exp_text).convert_to<long long>();
    if (exp_negative) exponent = -exponent;
    text = text.substr(0, e);
  }

  std::string_view int_part = text;
  std::string_view frac_part;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    int_part = text.substr(0, dot);
    frac_part = text.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) throw DomainError("Rational::parse: no digits");

  Int num = parse_digits(int_part) * pow10(static_cast<long long>(frac_part.size())) +
            parse_digits(frac_part);
  long long scale = static_cast<long long>(frac_part.size()) - exponent;
  Rational r = scale >= 0 ? Rational(num, pow10(scale)) : Rational(num * pow10(-scale), Int(1));
  return negative ? -r : r;
}

std::string Rational::str() const {
  const Int den = denominator();
  if (den == 1) return numerator().str();
  return numerator().str() + "/" + den.str();
}

std::optional<Rational> exact_sqrt(const Rational& r) {
  if (r.sign() < 0) return std::nullopt;
  const Rational::Int n = r.numerator();
  const Rational::Int d = r.denominator();
  const Rational::Int sn = boost::multiprecision::sqrt(n);
  const Rational::Int sd = boost::multiprecision::sqrt(d);
  if (sn * sn != n || sd * sd != d) return std::nullopt;
  return Rational(sn, sd);
}

std::pair<SurdNumber, SurdNumber> sqrt_pair(const Rational& a, const Rational& b) {
  if (a.sign() < 0 || b.sign() < 0) throw DomainError("sqrt_pair: negative argument");

  const std::optional<Rational> root_a = exact_sqrt(a);
  const Surd1 sa = root_a ? Surd1(*root_a) : Surd1::sqrt_of(a);

  if (auto root_b = exact_sqrt(b)) return {SurdNumber(sa), SurdNumber(*root_b)};
  if (!root_a && a.sign() != 0) {
    if (auto root_ab = exact_sqrt(a * b)) {
      // sqrt(b) = sqrt(ab) / sqrt(a) = (sqrt(ab) / a) * sqrt(a)
      return {SurdNumber(sa), SurdNumber(Surd1(Rational(0), *root_ab / a, a))};
    }
  }
  return {SurdNumber(sa), SurdNumber(Surd1(0), Surd1(1), Surd1(b))};
}

}  // namespace homsphere
