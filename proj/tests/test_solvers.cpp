#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "grainsteady/asymptotics.hpp"
#include "grainsteady/solvers.hpp"
#include "support.hpp"

using namespace grainsteady;
using std::numbers::pi;

namespace {

const double tc_fig = 11 * pi / 18;

SolveOptions coarse(double step)
{
    SolveOptions o;
    o.continuation_step = step;
    return o;
}

} // namespace

TEST(ThetaC, FrozenValues)
{
    EXPECT_NEAR(*theta_c_of(FreeParams<double>{0.9, 0.05}, 1.72), 0.53804486509331284504, 1e-12);
    EXPECT_NEAR(*theta_c_of(FreeParams<double>{0.99, 0.05}, 1.72), 1.1801968825073246773, 1e-12);
}

TEST(ThetaC, InfeasibleWhenHeightAtPiPositive)
{
    int seen = 0;
    for (const auto& d : testsupport::random_valid_states(300, 41)) {
        if (curves::z1(pi, d) > 0) {
            EXPECT_FALSE(theta_c_of(d).has_value());
            ++seen;
        }
    }
    EXPECT_GT(seen, 0);
    EXPECT_FALSE(theta_c_of(FreeParams<double>{0.9, 0.5}, 1.72).has_value());
}

TEST(ThetaC, ResidualOnRandomStates)
{
    for (const auto& d : testsupport::random_valid_states(300, 43)) {
        const auto tc = theta_c_of(d);
        if (!tc) continue;
        EXPECT_GT(*tc, 0.0);
        EXPECT_LE(*tc, pi);
        EXPECT_LE(std::abs(curves::z1(*tc, d)), 1e-11);
    }
}

TEST(ThetaC, OnThePiLocus)
{
    SolveOptions o;
    o.check_constraints = false;
    const auto r = solve_sigma(0.999, PhysicalAngles<double>{1.72, pi}, o);
    ASSERT_EQ(r.status, SolveStatus::ok);
    const auto d = derive_parameters(FreeParams<double>{0.999, r.sigma}, 1.72);
    EXPECT_LE(std::abs(curves::z1(pi, d)), 1e-12);
    const auto tc = theta_c_of(d);
    if (tc) {
        EXPECT_NEAR(*tc, pi, 1e-6);
    }
}

TEST(Scan, FractionsSortedAndClusteredAtEnds)
{
    const auto u = scan_fractions(64);
    EXPECT_EQ(u.size(), 64u);
    EXPECT_TRUE(std::is_sorted(u.begin(), u.end()));
    EXPECT_LT(u.front(), 1e-11);
    EXPECT_GT(u.back(), 1 - 1e-11);
    EXPECT_GT(u.front(), 0.0);
    EXPECT_LT(u.back(), 1.0);
    EXPECT_GE(scan_fractions(2).size(), 8u);
}

TEST(Scan, AdmissibleIntervalsAreExact)
{
    for (double beta : {1.72, 2.0, 2.5}) {
        for (double A : {0.3, 0.5, 0.72, 0.9, 0.95, 0.999}) {
            for (const auto& [lo, hi] : admissible_sigma_intervals(A, beta)) {
                ASSERT_LT(lo, hi);
                for (double u : {1e-9, 0.5, 1 - 1e-9}) {
                    EXPECT_TRUE(derive_parameters(FreeParams<double>{A, lo + (hi - lo) * u}, beta).ok());
                }
                if (hi < std::sqrt(1 - A * A)) {
                    EXPECT_FALSE(derive_parameters(FreeParams<double>{A, hi * (1 + 1e-9)}, beta).ok());
                }
            }
        }
    }
}

TEST(SolveSigma, PiBranchNearCornerFollowsSlope)
{
    const double A = 1 - 1e-4;
    const auto r = solve_sigma(A, PhysicalAngles<double>{1.72, pi});
    ASSERT_EQ(r.status, SolveStatus::ok) << ::testing::PrintToString(r.report.failed());
    EXPECT_NEAR(r.sigma / (asymptotic_slope(1.72) * (1 - A)), 1.0, 0.02);
    EXPECT_EQ(r.roots.size(), 1u);
    EXPECT_LE(r.residual, 1e-11);
}

TEST(SolveSigma, BracketEndsHaveOppositeSigns)
{
    for (double beta : {1.72, 2.0, 2.5}) {
        const double A = 1 - max_eps(beta) / 2;
        const double smax = std::sqrt(1 - A * A);
        const double lo = branch_function(A, 1e-10 * smax, PhysicalAngles<double>{beta, pi});
        const double hi = branch_function(A, (1 - 1e-10) * smax, PhysicalAngles<double>{beta, pi});
        EXPECT_LT(lo, 0.0);
        EXPECT_GT(hi, 0.0);
    }
}

TEST(SolveSigma, FigureContactAngle)
{
    const PhysicalAngles<double> pa{1.72, tc_fig};
    for (double A : {0.8, 0.9, 0.95, 0.99}) {
        const auto r = solve_sigma(A, pa);
        ASSERT_EQ(r.status, SolveStatus::ok) << A;
        EXPECT_NEAR(*theta_c_of(FreeParams<double>{A, r.sigma}, 1.72), tc_fig, 1e-10);
        EXPECT_TRUE(r.report.all_satisfied());
        EXPECT_GT(r.sigma, 0.0);
        EXPECT_LT(r.sigma, std::sqrt(1 - A * A));
    }
}

TEST(SolveSigma, RightAngleHasNoSolution)
{
    const auto r = solve_sigma(0.9, PhysicalAngles<double>{pi / 2, pi});
    EXPECT_EQ(r.status, SolveStatus::not_found);
    EXPECT_TRUE(std::isnan(r.sigma));
}

TEST(SolveSigma, LocalSolveAgreesWithCold)
{
    const PhysicalAngles<double> pa{2.0, tc_fig};
    const auto cold = solve_sigma(0.93, pa);
    ASSERT_EQ(cold.status, SolveStatus::ok);
    const auto warm = solve_sigma_local(0.93, pa, cold.sigma * 1.01, cold.sigma * 0.001);
    ASSERT_EQ(warm.status, SolveStatus::ok);
    EXPECT_NEAR(warm.sigma, cold.sigma, 1e-12);
}

TEST(Trace, RecordsIncreasingAndAdmissible)
{
    const auto c = trace_branch(PhysicalAngles<double>{1.72, tc_fig}, 0.8, 1 - 1e-5, coarse(0.01));
    EXPECT_TRUE(c.complete()) << ::testing::PrintToString(c.gaps);
    ASSERT_GE(c.points.size(), 20u);
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        EXPECT_TRUE(c.points[i].report.all_satisfied());
        if (i > 0) {
            EXPECT_GT(c.points[i].A, c.points[i - 1].A);
        }
    }
    EXPECT_NEAR(c.points.back().A, 1 - 1e-5, 1e-15);
    EXPECT_LT(c.points.back().sigma, 1e-3);
}

TEST(Trace, ColdRestartsReproduceRecords)
{
    const PhysicalAngles<double> pa{2.0, pi};
    const auto c = trace_branch(pa, 0.9, 0.999, coarse(0.01));
    for (std::size_t i = 0; i < c.points.size(); i += 3) {
        const auto r = solve_sigma(c.points[i].A, pa);
        ASSERT_EQ(r.status, SolveStatus::ok);
        EXPECT_NEAR(r.sigma, c.points[i].sigma, 1e-9);
    }
}

TEST(Trace, HalvingStepLeavesRecordsUnchanged)
{
    const PhysicalAngles<double> pa{2.5, tc_fig};
    const auto a = trace_branch(pa, 0.9, 0.99, coarse(0.01));
    const auto b = trace_branch(pa, 0.9, 0.99, coarse(0.005));
    int matched = 0;
    for (const auto& p : a.points) {
        for (const auto& q : b.points) {
            if (std::abs(p.A - q.A) < 1e-12) {
                EXPECT_NEAR(p.sigma, q.sigma, 1e-9);
                ++matched;
            }
        }
    }
    EXPECT_GE(matched, 8);
}

TEST(Trace, SmallerContactAngleEnclosed)
{
    const auto inner = trace_branch(PhysicalAngles<double>{1.72, tc_fig}, 0.75, 0.999, coarse(0.01));
    const auto outer = trace_branch(PhysicalAngles<double>{1.72, pi}, 0.75, 0.999, coarse(0.01));
    int common = 0;
    for (const auto& p : inner.points) {
        for (const auto& q : outer.points) {
            if (std::abs(p.A - q.A) < 1e-12) {
                EXPECT_LT(p.sigma, q.sigma) << p.A;
                ++common;
            }
        }
    }
    EXPECT_GE(common, 20);
}

TEST(Trace, RejectsEmptyRange)
{
    EXPECT_THROW(trace_branch(PhysicalAngles<double>{1.72, pi}, 0.9, 0.8), std::invalid_argument);
}
