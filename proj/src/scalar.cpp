#include "maxspec/scalar.hpp"

#include <cmath>
#include <utility>
#include <numbers>

#include "maxspec/errors.hpp"

namespace maxspec {

MaxScalar MaxScalar::exp2i(std::int64_t e) { return MaxScalar{0.5, e + 1}; }

MaxScalar MaxScalar::from_linear(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    throw ValidationError("max-algebra scalar must be finite and nonnegative");
  }
  if (x == 0.0) return zero();
  int e = 0;
  const double m = std::frexp(x, &e);
  return MaxScalar{m, e};
}

MaxScalar MaxScalar::from_log2(double l2) {
  if (std::isnan(l2)) throw ValidationError("log2 value is NaN");
  if (l2 == -std::numeric_limits<double>::infinity()) return zero();
  if (!std::isfinite(l2)) throw ValidationError("log2 value is +inf");
  const double fl = std::floor(l2);
  double m = std::exp2(l2 - fl - 1.0);
  auto e = static_cast<std::int64_t>(fl) + 1;
  if (m >= 1.0) {
    m *= 0.5;
    ++e;
  } else if (m < 0.5) {
    m *= 2.0;
    --e;
  }
  return MaxScalar{m, e};
}

MaxScalar MaxScalar::from_log(double ln) {
  if (ln == -std::numeric_limits<double>::infinity()) return zero();
  return from_log2(ln / std::numbers::ln2);
}

double MaxScalar::value() const {
  if (is_zero()) return 0.0;
  if (e_ > 2000) return std::numeric_limits<double>::infinity();
  if (e_ < -2200) return 0.0;
  return std::ldexp(m_, static_cast<int>(e_));
}

double MaxScalar::log() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return std::log(m_) + static_cast<double>(e_) * std::numbers::ln2;
}

double MaxScalar::log2() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return std::log2(m_) + static_cast<double>(e_);
}

MaxScalar MaxScalar::root(std::uint64_t k) const {
  if (k == 0) throw ValidationError("root of order 0");
  if (is_zero() || k == 1) return *this;
  // Split the exponent so the fractional part stays small and exact.
  const auto kk = static_cast<std::int64_t>(k);
  std::int64_t q = e_ / kk;
  std::int64_t r = e_ % kk;
  if (r < 0) {
    r += kk;
    --q;
  }
  const double frac = (static_cast<double>(r) + std::log2(m_)) / static_cast<double>(k);
  return exp2i(q) * from_log2(frac);
}

MaxScalar MaxScalar::pow(std::uint64_t k) const {
  MaxScalar result = one();
  MaxScalar base = *this;
  while (k > 0) {
    if (k & 1U) result *= base;
    k >>= 1U;
    if (k > 0) base *= base;
  }
  return result;
}

MaxScalar MaxScalar::inverse() const { return one() / *this; }

MaxScalar operator*(MaxScalar a, MaxScalar b) {
  if (a.is_zero() || b.is_zero()) return MaxScalar::zero();
  double m = a.m_ * b.m_;
  std::int64_t e = a.e_ + b.e_;
  if (m < 0.5) {
    m *= 2.0;
    --e;
  }
  return MaxScalar{m, e};
}

MaxScalar operator/(MaxScalar a, MaxScalar b) {
  if (b.is_zero()) throw ValidationError("division by max-algebra zero");
  if (a.is_zero()) return MaxScalar::zero();
  double m = a.m_ / b.m_;
  std::int64_t e = a.e_ - b.e_;
  if (m >= 1.0) {
    m *= 0.5;
    ++e;
  }
  return MaxScalar{m, e};
}

MaxScalar abs_diff(MaxScalar a, MaxScalar b) {
  if (a < b) std::swap(a, b);
  if (b.is_zero()) return a;
  const double ratio = (b / a).value();
  const double gap = 1.0 - ratio;
  if (gap <= 0.0) return MaxScalar::zero();
  return a * MaxScalar::from_linear(gap);
}

bool log_close(MaxScalar a, MaxScalar b, double tol) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  return std::abs(a.log() - b.log()) <= tol;
}

std::ostream& operator<<(std::ostream& os, MaxScalar x) {
  const double v = x.value();
  if (v == 0.0 && !x.is_zero()) return os << "2^" << x.log2();
  return os << v;
}

}  // namespace maxspec
