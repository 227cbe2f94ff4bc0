#include "rieszpart/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace rieszpart {

namespace {

using i128 = __int128;

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(i128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

i128 floor_div(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("floor_div: zero denominator");
  i128 q = num / den;
  i128 r = num % den;
  if (r != 0 && ((r < 0) != (den < 0))) --q;
  return q;
}

Rational Rational::from_wide(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (!fits64(num) || !fits64(den))
    throw RangeError("rational overflow: result does not fit in 64 bits");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  *this = from_wide(num, den);
}

std::int64_t Rational::floor() const {
  return static_cast<std::int64_t>(floor_div(num_, den_));
}

std::int64_t Rational::ceil() const {
  return static_cast<std::int64_t>(-floor_div(-static_cast<i128>(num_), den_));
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return from_wide(-static_cast<i128>(num_), den_); }

Rational operator+(const Rational& x, const Rational& y) {
  i128 g = gcd128(x.den_, y.den_);
  i128 num = static_cast<i128>(x.num_) * (y.den_ / g) + static_cast<i128>(y.num_) * (x.den_ / g);
  i128 den = static_cast<i128>(x.den_ / g) * y.den_;
  return Rational::from_wide(num, den);
}

Rational operator-(const Rational& x, const Rational& y) { return x + (-y); }

Rational operator*(const Rational& x, const Rational& y) {
  // cross-cancel first so products stay small
  i128 g1 = gcd128(x.num_, y.den_);
  i128 g2 = gcd128(y.num_, x.den_);
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  i128 num = (x.num_ / g1) * (y.num_ / g2);
  i128 den = (x.den_ / g2) * (y.den_ / g1);
  return Rational::from_wide(num, den);
}

Rational operator/(const Rational& x, const Rational& y) {
  if (y.num_ == 0) throw std::domain_error("rational division by zero");
  return x * Rational::from_wide(y.den_, y.num_);
}

std::strong_ordering operator<=>(const Rational& x, const Rational& y) {
  i128 l = static_cast<i128>(x.num_) * y.den_;
  i128 r = static_cast<i128>(y.num_) * x.den_;
  return l <=> r;
}

// ---- ExactScalar ----

ExactScalar ExactScalar::guarded(long double value, long double guard) {
  if (!(guard > 0)) throw std::invalid_argument("guard must be positive");
  if (!std::isfinite(value)) throw std::invalid_argument("guarded value must be finite");
  ExactScalar s;
  s.v_ = Guarded{value, guard};
  return s;
}

const Rational& ExactScalar::as_rational() const {
  if (!is_rational()) throw std::logic_error("scalar is not rational: " + str());
  return std::get<Rational>(v_);
}

long double ExactScalar::value() const {
  if (is_rational()) return std::get<Rational>(v_).to_long_double();
  return std::get<Guarded>(v_).value;
}

long double ExactScalar::guard() const {
  return is_rational() ? 0.0L : std::get<Guarded>(v_).guard;
}

std::string ExactScalar::str() const {
  if (is_rational()) return std::get<Rational>(v_).str();
  char buf[64];
  std::snprintf(buf, sizeof buf, "irr:%.21Lg", std::get<Guarded>(v_).value);
  return buf;
}

ExactScalar ExactScalar::operator-() const {
  if (is_rational()) return ExactScalar(-std::get<Rational>(v_));
  return guarded(-value(), guard());
}

namespace {
long double joint_guard(const ExactScalar& x, const ExactScalar& y) {
  return std::max(x.guard(), y.guard());
}
}  // namespace

ExactScalar operator+(const ExactScalar& x, const ExactScalar& y) {
  if (x.is_rational() && y.is_rational()) return x.as_rational() + y.as_rational();
  return ExactScalar::guarded(x.value() + y.value(), joint_guard(x, y));
}

ExactScalar operator-(const ExactScalar& x, const ExactScalar& y) {
  if (x.is_rational() && y.is_rational()) return x.as_rational() - y.as_rational();
  return ExactScalar::guarded(x.value() - y.value(), joint_guard(x, y));
}

ExactScalar operator*(const ExactScalar& x, const ExactScalar& y) {
  if (x.is_rational() && y.is_rational()) return x.as_rational() * y.as_rational();
  return ExactScalar::guarded(x.value() * y.value(), joint_guard(x, y));
}

ExactScalar operator/(const ExactScalar& x, const ExactScalar& y) {
  if (x.is_rational() && y.is_rational()) return x.as_rational() / y.as_rational();
  if (y.value() == 0) throw std::domain_error("division by zero");
  return ExactScalar::guarded(x.value() / y.value(), joint_guard(x, y));
}

bool operator==(const ExactScalar& x, const ExactScalar& y) {
  if (x.is_rational() != y.is_rational()) return false;
  if (x.is_rational()) return x.as_rational() == y.as_rational();
  return x.value() == y.value() && x.guard() == y.guard();
}

int ExactScalar::sign() const {
  if (is_rational()) {
    auto n = as_rational().num();
    return (n > 0) - (n < 0);
  }
  long double v = value();
  if (std::fabs(v) < guard()) return 0;
  return v > 0 ? 1 : -1;
}

bool less(const ExactScalar& x, const ExactScalar& y) {
  if (x.is_rational() && y.is_rational()) return x.as_rational() < y.as_rational();
  return x.value() < y.value();
}

// ---- floors ----

namespace {
FloorResult guarded_floor(long double v, long double guard) {
  if (!std::isfinite(v) || std::fabs(v) > 9.2e18L)
    throw RangeError("floor out of 64-bit range");
  long double f = std::floor(v);
  long double nearest = std::nearbyint(v);
  return {static_cast<std::int64_t>(f), std::fabs(v - nearest) < guard};
}
}  // namespace

FloorResult floor_scaled(const ExactScalar& x, const ExactScalar& beta) {
  if (x.is_rational() && beta.is_rational()) {
    const auto& p = x.as_rational();
    const auto& q = beta.as_rational();
    i128 v = floor_div(static_cast<i128>(p.num()) * q.num(), static_cast<i128>(p.den()) * q.den());
    if (!fits64(v)) throw RangeError("floor out of 64-bit range");
    return {static_cast<std::int64_t>(v), false};
  }
  return guarded_floor(x.value() * beta.value(), joint_guard(x, beta));
}

std::optional<std::pair<std::int64_t, std::int64_t>> lowest_terms_ratio(const ExactScalar& a,
                                                                       const ExactScalar& total) {
  if (!a.is_rational() || !total.is_rational()) return std::nullopt;
  const Rational& ra = a.as_rational();
  const Rational& rt = total.as_rational();
  if (!(Rational(0) < ra) || !(ra < rt)) return std::nullopt;
  Rational r = ra / rt;
  return std::make_pair(r.num(), r.den());
}

AffineFloor::AffineFloor(const ExactScalar& alpha, const ExactScalar& beta)
    : rational_(alpha.is_rational() && beta.is_rational()) {
  if (rational_) {
    ap_ = alpha.as_rational().num();
    aq_ = alpha.as_rational().den();
    bp_ = beta.as_rational().num();
    bq_ = beta.as_rational().den();
  } else {
    alpha_ = alpha.value();
    beta_ = beta.value();
    guard_ = joint_guard(alpha, beta);
  }
}

FloorResult AffineFloor::operator()(std::int64_t k) const {
  if (rational_) {
    i128 v = floor_div((k * aq_ + ap_) * bp_, aq_ * bq_);
    if (!fits64(v)) throw RangeError("floor out of 64-bit range");
    return {static_cast<std::int64_t>(v), false};
  }
  return guarded_floor((static_cast<long double>(k) + alpha_) * beta_, guard_);
}

bool AffineFloor::exact_integer(std::int64_t k) const {
  if (!rational_) return false;
  return ((k * aq_ + ap_) * bp_) % (aq_ * bq_) == 0;
}

// ---- constants ----

namespace constants {
ExactScalar sqrt2inv(long double guard) {
  return ExactScalar::guarded(std::sqrt(2.0L) / 2.0L, guard);
}
ExactScalar golden(long double guard) {
  return ExactScalar::guarded((std::sqrt(5.0L) - 1.0L) / 2.0L, guard);
}
ExactScalar inv_pi(long double guard) {
  return ExactScalar::guarded(1.0L / std::numbers::pi_v<long double>, guard);
}
}  // namespace constants

// ---- parsing ----

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("malformed length term in '" + std::string(whole) + "'");
  return v;
}

ExactScalar parse_term(std::string_view t, std::string_view whole, long double guard) {
  t = trim(t);
  if (t.empty()) throw std::invalid_argument("empty term in '" + std::string(whole) + "'");
  if (t == "sqrt2inv") return constants::sqrt2inv(guard);
  if (t == "golden") return constants::golden(guard);
  if (t == "invpi") return constants::inv_pi(guard);
  if (t.starts_with("irr:")) {
    std::string body(trim(t.substr(4)));
    if (body.empty()) throw std::invalid_argument("irr: without value in '" + std::string(whole) + "'");
    char* end = nullptr;
    long double v = std::strtold(body.c_str(), &end);
    if (end != body.c_str() + body.size() || !std::isfinite(v))
      throw std::invalid_argument("malformed irr: value in '" + std::string(whole) + "'");
    return ExactScalar::guarded(v, guard);
  }
  auto slash = t.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(t, whole));
  auto p = parse_int(trim(t.substr(0, slash)), whole);
  auto q = parse_int(trim(t.substr(slash + 1)), whole);
  if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
  return Rational(p, q);
}

}  // namespace

ExactScalar parse_scalar(std::string_view text, long double guard) {
  std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty length");
  ExactScalar acc = Rational(0);
  int sign = 1;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    sign = s[0] == '-' ? -1 : 1;
    i = 1;
  }
  std::size_t start = i;
  for (; i <= s.size(); ++i) {
    bool boundary = i == s.size();
    if (!boundary && (s[i] == '+' || s[i] == '-')) {
      // exponent sign inside an irr: decimal does not split terms
      bool exponent = i > start && (s[i - 1] == 'e' || s[i - 1] == 'E') &&
                      s.substr(start, i - start).find("irr:") != std::string_view::npos;
      boundary = !exponent;
    }
    if (!boundary) continue;
    ExactScalar term = parse_term(s.substr(start, i - start), s, guard);
    acc = sign > 0 ? acc + term : acc - term;
    if (i < s.size()) sign = s[i] == '-' ? -1 : 1;
    start = i + 1;
  }
  return acc;
}

}  // namespace rieszpart
