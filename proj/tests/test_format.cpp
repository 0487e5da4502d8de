#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "betaest/format.hpp"

using betaest::format_real;

TEST(FormatReal, ShortestOrNineDigits) {
    EXPECT_EQ(format_real(0.0), "0");
    EXPECT_EQ(format_real(1.5), "1.5");
    EXPECT_EQ(format_real(-2.0), "-2");
    EXPECT_EQ(format_real(0.1 + 0.2), "0.3");
    EXPECT_EQ(format_real(1.0 / 3.0), "0.333333333");
    EXPECT_EQ(format_real(1.82047845325367), "1.82047845");
    EXPECT_EQ(format_real(1e-20), "1e-20");
    EXPECT_EQ(format_real(std::numeric_limits<double>::quiet_NaN()), "nan");
}
