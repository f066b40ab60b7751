#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>

namespace fgclock {

// A real number extended with +inf and -inf. NaN is not representable, so
// the ordering is total and min()/shift arithmetic stay exact.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {  // NOLINT: implicit by intent
    if (v != v) throw std::domain_error("ExtendedReal: NaN is not representable");
  }

  static constexpr ExtendedReal plus_infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }
  static constexpr ExtendedReal minus_infinity() {
    return ExtendedReal(-std::numeric_limits<double>::infinity());
  }

  constexpr double value() const noexcept { return value_; }
  constexpr bool is_finite() const noexcept {
    return value_ != std::numeric_limits<double>::infinity() &&
           value_ != -std::numeric_limits<double>::infinity();
  }
  constexpr bool is_plus_infinity() const noexcept {
    return value_ == std::numeric_limits<double>::infinity();
  }
  constexpr bool is_minus_infinity() const noexcept {
    return value_ == -std::numeric_limits<double>::infinity();
  }

  // Shifting by a finite amount keeps infinities fixed.
  friend constexpr ExtendedReal operator+(ExtendedReal x, double shift) {
    return ExtendedReal(x.value_ + shift);
  }
  friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    return ExtendedReal(a.value_ + b.value_);
  }

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) noexcept {
    return a.value_ == b.value_;
  }
  friend constexpr std::strong_ordering operator<=>(ExtendedReal a,
                                                    ExtendedReal b) noexcept {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  double value_ = 0.0;
};

constexpr ExtendedReal min(ExtendedReal a, ExtendedReal b) noexcept {
  return b < a ? b : a;
}
constexpr ExtendedReal max(ExtendedReal a, ExtendedReal b) noexcept {
  return a < b ? b : a;
}

}  // namespace fgclock
