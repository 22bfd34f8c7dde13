#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>

namespace maxspec {

/// A nonnegative real in the max-times semiring.
///
/// The value is held as `mantissa * 2^exponent` with the mantissa normalized
/// to [0.5, 1). The exponent is an exact integer log2 part, so long products
/// such as 2^(-2^20) never underflow and linear <-> internal conversion is
/// exact for every finite double. Zero is the bottom element: annihilator for
/// multiplication and identity for max.
class MaxScalar {
 public:
  constexpr MaxScalar() = default;

  static constexpr MaxScalar zero() { return MaxScalar{}; }
  static MaxScalar one() { return exp2i(0); }
  /// Exact power of two.
  static MaxScalar exp2i(std::int64_t e);
  /// Throws ValidationError for negative, NaN or infinite input.
  static MaxScalar from_linear(double x);
  /// Natural-log input; -inf maps to zero.
  static MaxScalar from_log(double ln);
  static MaxScalar from_log2(double l2);

  bool is_zero() const { return m_ == 0.0; }
  double mantissa() const { return m_; }
  std::int64_t exponent() const { return is_zero() ? 0 : e_; }

  /// Linear value; underflows to 0 or overflows to +inf outside double range.
  double value() const;
  /// Natural log, -inf for zero.
  double log() const;
  double log2() const;

  /// x^(1/k), k >= 1.
  MaxScalar root(std::uint64_t k) const;
  /// x^k by repeated squaring; x^0 = 1.
  MaxScalar pow(std::uint64_t k) const;
  /// Throws ValidationError on zero.
  MaxScalar inverse() const;

  friend MaxScalar operator*(MaxScalar a, MaxScalar b);
  /// Throws ValidationError when dividing by zero.
  friend MaxScalar operator/(MaxScalar a, MaxScalar b);
  MaxScalar& operator*=(MaxScalar o) { return *this = *this * o; }

  // Member order makes the defaulted comparison lexicographic on
  // (exponent, mantissa); zero carries the smallest exponent.
  friend bool operator==(const MaxScalar&, const MaxScalar&) = default;
  friend std::partial_ordering operator<=>(const MaxScalar&, const MaxScalar&) = default;

 private:
  static constexpr std::int64_t kZeroExp = std::numeric_limits<std::int64_t>::min();
  constexpr MaxScalar(double m, std::int64_t e) : e_(e), m_(m) {}

  std::int64_t e_ = kZeroExp;
  double m_ = 0.0;
};

/// Semiring sum.
inline MaxScalar oplus(MaxScalar a, MaxScalar b) { return a < b ? b : a; }

/// |a - b| as a MaxScalar.
MaxScalar abs_diff(MaxScalar a, MaxScalar b);

/// Both zero, or |ln a - ln b| <= tol.
bool log_close(MaxScalar a, MaxScalar b, double tol);

std::ostream& operator<<(std::ostream& os, MaxScalar x);

}  // namespace maxspec
