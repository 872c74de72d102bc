#include <gtest/gtest.h>

#include "femsel/objective.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

using namespace femsel;

TEST(Residuals, MeasuredMinusFem) {
    const MeasuredData m = measured_h_beam();
    const std::vector<double> same(m.frequencies_hz.begin(), m.frequencies_hz.end());
    EXPECT_EQ(residuals(m, same), (Residuals{0, 0, 0, 0, 0}));

    const std::vector<double> fem{50, 117.3, 208.4, 254, 445};
    const Residuals r = residuals(m, fem);
    EXPECT_NEAR(r[0], 3.9, 1e-12);
    for (std::size_t i = 1; i < 5; ++i) EXPECT_EQ(r[i], 0.0);

    const std::vector<double> high{60, 117.3, 208.4, 254, 445};
    EXPECT_LT(residuals(m, high)[0], 0.0);
}

TEST(Residuals, LengthMismatchThrows) {
    const std::vector<double> four{1, 2, 3, 4};
    EXPECT_THROW(residuals(measured_h_beam(), four), std::invalid_argument);
}

TEST(Sse, Examples) {
    EXPECT_EQ(sse({0, 0, 0, 0, 0}).value, 0.0);
    EXPECT_DOUBLE_EQ(sse({1, 2, 3, 4, 5}).value, 27.5);
    EXPECT_DOUBLE_EQ(sse({-1, -2, -3, -4, -5}).value, 27.5);
    const ObjectiveValue v = sse({1, 2, 3, 4, 5});
    EXPECT_EQ(v.kind, ObjectiveKind::sse);
    EXPECT_EQ(v.n, 5u);
    EXPECT_DOUBLE_EQ(v.value, v.n * v.sigma_squared / 2.0);
}

TEST(Aic, Examples) {
    // sigma^2 = 1: five residuals of magnitude one.
    EXPECT_DOUBLE_EQ(aic({1, -1, 1, -1, 1}, 1).value, 2.0);

    const ObjectiveValue v = aic({1, 2, 3, 4, 5}, 2);
    EXPECT_DOUBLE_EQ(v.sigma_squared, 11.0);
    EXPECT_NEAR(v.value, 15.98948, 1e-5);
    EXPECT_EQ(v.d, 2u);
    EXPECT_EQ(v.kind, ObjectiveKind::aic);

    // Floor: 5 ln(1e-12) + 6.
    EXPECT_NEAR(aic({0, 0, 0, 0, 0}, 3).value, -132.15510557964274, 1e-12);
}

TEST(Aic, PropertiesOnRandomResiduals) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> r(-40.0, 40.0);
    for (int trial = 0; trial < 200; ++trial) {
        Residuals res;
        for (double& x : res) x = r(rng);
        const double s = sse(res).value;
        for (std::size_t d = 1; d <= 5; ++d) {
            const ObjectiveValue a = aic(res, d);
            ASSERT_GT(a.sigma_squared, kSigmaSquaredFloor);
            const double via_sse = 5.0 * std::log(2.0 * s / 5.0) + 2.0 * static_cast<double>(d);
            EXPECT_NEAR(a.value, via_sse, 1e-12 * std::max(1.0, std::abs(via_sse)));
            if (d < 5) {
                // Exact up to the rounding of the final sum.
                const double next = aic(res, d + 1).value;
                const double ulp = std::nextafter(std::max(std::abs(next), std::abs(a.value)),
                                                  std::numeric_limits<double>::infinity()) -
                                   std::max(std::abs(next), std::abs(a.value));
                EXPECT_LE(std::abs((next - a.value) - 2.0), 2.0 * ulp);
            }
        }
    }
}

TEST(Aic, PenaltyStepIsExactWithinABinade) {
    // sigma^2 = 11: the data-fit term is 11.989..., so d = 3..5 stays in [16, 32).
    const Residuals res{1, 2, 3, 4, 5};
    for (std::size_t d = 3; d < 5; ++d) EXPECT_EQ(aic(res, d + 1).value - aic(res, d).value, 2.0);
}

TEST(Aic, ComplexityPenaltyDoesNotTouchSse) {
    const Residuals res{2.0, -1.0, 0.5, 3.0, -4.0};
    EXPECT_EQ(evaluate_objective(ObjectiveKind::sse, res, 1).value,
              evaluate_objective(ObjectiveKind::sse, res, 5).value);
    EXPECT_EQ(evaluate_objective(ObjectiveKind::aic, res, 5).value -
                  evaluate_objective(ObjectiveKind::aic, res, 1).value,
              8.0);
}

TEST(ObjectiveKindText, RoundTrip) {
    EXPECT_EQ(parse_objective_kind("aic"), ObjectiveKind::aic);
    EXPECT_EQ(parse_objective_kind("SSE"), ObjectiveKind::sse);
    EXPECT_EQ(to_string(ObjectiveKind::aic), "AIC");
    EXPECT_THROW(parse_objective_kind("bic"), std::invalid_argument);
}
