#include "fgclock/extended_real.hpp"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

namespace fgclock {
namespace {

TEST(ExtendedReal, OrderingIsTotalIncludingInfinities) {
  const auto inf = ExtendedReal::plus_infinity();
  const auto ninf = ExtendedReal::minus_infinity();
  EXPECT_LT(ninf, ExtendedReal(-1e308));
  EXPECT_LT(ExtendedReal(1e308), inf);
  EXPECT_EQ(min(inf, ExtendedReal(2.0)), ExtendedReal(2.0));
  EXPECT_EQ(max(ninf, ExtendedReal(2.0)), ExtendedReal(2.0));
}

TEST(ExtendedReal, ShiftKeepsInfinityFixed) {
  EXPECT_TRUE((ExtendedReal::plus_infinity() + 5.0).is_plus_infinity());
  EXPECT_TRUE((ExtendedReal::minus_infinity() + 5.0).is_minus_infinity());
  EXPECT_EQ(ExtendedReal(1.5) + 0.5, ExtendedReal(2.0));
}

TEST(ExtendedReal, RejectsNaN) {
  EXPECT_THROW(ExtendedReal(std::nan("")), std::domain_error);
  EXPECT_THROW(ExtendedReal::plus_infinity() + ExtendedReal::minus_infinity(),
               std::domain_error);
}

}  // namespace
}  // namespace fgclock
