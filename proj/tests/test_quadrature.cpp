#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "grainsteady/quadrature.hpp"

namespace q = grainsteady::quadrature;

TEST(Quadrature, Polynomial)
{
    // K15 integrates degree 22 exactly.
    auto f = [](double x) { return std::pow(x, 20) - 3 * x * x + 1; };
    const auto r = q::integrate(f, -1.0, 2.0);
    EXPECT_TRUE(r.converged);
    const double exact = (std::pow(2.0, 21) + 1) / 21 - (8.0 + 1.0) + 3.0;
    EXPECT_NEAR(r.value, exact, 1e-12 * exact);
}

TEST(Quadrature, Oscillatory)
{
    auto f = [](double x) { return std::cos(40 * x); };
    const auto r = q::integrate(f, 0.0, 3.0);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, std::sin(120.0) / 40, 1e-12);
}

TEST(Quadrature, PeakedIntegrandAdapts)
{
    const double c = 1e-4;
    auto f = [c](double x) { return c / (x * x + c * c); };
    const auto r = q::integrate(f, -1.0, 1.0);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 2 * std::atan(1 / c), 1e-11);
    EXPECT_GT(r.intervals, 10);
}

TEST(Quadrature, ReversedInterval)
{
    auto f = [](double x) { return std::exp(x); };
    EXPECT_NEAR(q::integrate(f, 1.0, 0.0).value, 1 - std::exp(1.0), 1e-14);
    EXPECT_EQ(q::integrate(f, 0.5, 0.5).value, 0.0);
}

TEST(Quadrature, InitialPanelsAgree)
{
    auto f = [](double x) { return std::sqrt(1 + x * x); };
    q::Options<double> one, many;
    many.initial_panels = 32;
    EXPECT_NEAR(q::integrate(f, 0.0, 4.0, one).value, q::integrate(f, 0.0, 4.0, many).value, 1e-13);
}

TEST(Quadrature, CapReportsFailure)
{
    auto f = [](double x) { return 1 / std::sqrt(std::abs(x - 0.3)); };
    q::Options<double> opt;
    opt.abs_tol = 1e-15;
    opt.max_subdivisions = 10;
    EXPECT_FALSE(q::integrate(f, 0.0, 1.0, opt).converged);
    EXPECT_THROW(q::integrate_checked(f, 0.0, 1.0, opt), grainsteady::NumericalFailure);
}

TEST(Quadrature, LongDouble)
{
    auto f = [](long double x) { return std::exp(-x * x); };
    q::Options<long double> opt;
    opt.abs_tol = 1e-18L;
    const auto r = q::integrate(f, 0.0L, 1.0L, opt);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(double(r.value - std::sqrt(std::numbers::pi_v<long double>) / 2 * std::erf(1.0L)), 0.0, 1e-18);
}
