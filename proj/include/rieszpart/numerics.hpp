#pragma once

// Exact rationals and guarded extended-precision scalars.
//
// Every floor that decides lattice membership or a rounding target goes
// through floor_scaled() / AffineFloor so that rational inputs are handled
// exactly and irrational (guarded) inputs report near-integer ties instead of
// silently picking a side.

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace rieszpart {

/// Integer overflow in exact arithmetic.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// A floor landed within guard of an integer for data declared irrational.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr long double kDefaultGuard = 1e-12L;

/// p/q in lowest terms, q > 0. 64-bit storage, 128-bit intermediates; any
/// result that does not fit throws RangeError.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  std::int64_t floor() const;
  std::int64_t ceil() const;
  long double to_long_double() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }
  std::string str() const;

  Rational operator-() const;
  friend Rational operator+(const Rational& x, const Rational& y);
  friend Rational operator-(const Rational& x, const Rational& y);
  friend Rational operator*(const Rational& x, const Rational& y);
  friend Rational operator/(const Rational& x, const Rational& y);
  Rational& operator+=(const Rational& y) { return *this = *this + y; }
  Rational& operator-=(const Rational& y) { return *this = *this - y; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& x, const Rational& y);

  static Rational from_wide(__int128 num, __int128 den);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Floor division for 128-bit operands, den != 0.
__int128 floor_div(__int128 num, __int128 den);

struct Guarded {
  long double value = 0;
  long double guard = kDefaultGuard;
};

/// A length or offset: exact rational, or an extended-precision float with a
/// tie-detection guard. Arithmetic mixing the two yields a guarded value.
class ExactScalar {
 public:
  ExactScalar() : v_(Rational{}) {}
  ExactScalar(Rational r) : v_(r) {}  // NOLINT(google-explicit-constructor)

  static ExactScalar rational(std::int64_t num, std::int64_t den = 1) {
    return ExactScalar(Rational(num, den));
  }
  static ExactScalar guarded(long double value, long double guard = kDefaultGuard);

  bool is_rational() const { return std::holds_alternative<Rational>(v_); }
  /// Throws std::logic_error for guarded values.
  const Rational& as_rational() const;
  long double value() const;
  /// 0 for rationals.
  long double guard() const;
  std::string str() const;

  ExactScalar operator-() const;
  friend ExactScalar operator+(const ExactScalar& x, const ExactScalar& y);
  friend ExactScalar operator-(const ExactScalar& x, const ExactScalar& y);
  friend ExactScalar operator*(const ExactScalar& x, const ExactScalar& y);
  friend ExactScalar operator/(const ExactScalar& x, const ExactScalar& y);

  /// Structural equality: same kind and same stored value.
  friend bool operator==(const ExactScalar& x, const ExactScalar& y);

  /// Sign test; for guarded values a magnitude below guard counts as zero.
  int sign() const;

 private:
  std::variant<Rational, Guarded> v_;
};

bool less(const ExactScalar& x, const ExactScalar& y);

struct FloorResult {
  std::int64_t value = 0;
  bool tie = false;
  friend bool operator==(const FloorResult&, const FloorResult&) = default;
};

/// floor(beta * x). Exact for rationals (tie always false); for guarded
/// data, tie is set when beta*x is within guard of an integer.
FloorResult floor_scaled(const ExactScalar& x, const ExactScalar& beta);

/// a/total = N0/K0 in lowest terms, or nullopt unless both are rational
/// with 0 < a < total.
std::optional<std::pair<std::int64_t, std::int64_t>> lowest_terms_ratio(
    const ExactScalar& a, const ExactScalar& total);

/// floor((k + alpha) * beta) for many integers k with the scaling fixed.
/// Precomputes the exact 128-bit route for rational data.
class AffineFloor {
 public:
  AffineFloor(const ExactScalar& alpha, const ExactScalar& beta);
  FloorResult operator()(std::int64_t k) const;
  /// (k + alpha) * beta lands exactly on an integer (rational data only).
  bool exact_integer(std::int64_t k) const;
  bool is_rational() const { return rational_; }

 private:
  bool rational_;
  // rational: (k*aq + ap) * bp / (aq * bq)
  __int128 ap_ = 0, aq_ = 1, bp_ = 0, bq_ = 1;
  long double alpha_ = 0, beta_ = 0, guard_ = 0;
};

namespace constants {
/// 1/sqrt(2), computed with the extended-precision square root.
ExactScalar sqrt2inv(long double guard = kDefaultGuard);
/// (sqrt(5) - 1) / 2.
ExactScalar golden(long double guard = kDefaultGuard);
ExactScalar inv_pi(long double guard = kDefaultGuard);
}  // namespace constants

/// Parses a length expression: terms joined by '+' / '-', each term one of
/// `p/q`, an integer, `irr:<decimal>`, `sqrt2inv`, `golden`, `invpi`.
/// Throws std::invalid_argument on malformed input.
ExactScalar parse_scalar(std::string_view text, long double guard = kDefaultGuard);

}  // namespace rieszpart
