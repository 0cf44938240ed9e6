#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "grainsteady/constraints.hpp"
#include "grainsteady/solvers.hpp"
#include "support.hpp"

using namespace grainsteady;
using std::numbers::pi;

namespace {

const double theta_c_frozen = 0.53804486509331284504;  // (0.9, 0.05, 1.72)

std::vector<std::string> names_of(const ConstraintReport<double>& r)
{
    std::vector<std::string> out;
    for (const auto& x : r.records) out.push_back(x.name);
    return out;
}

} // namespace

TEST(Constraints, RecordOrderPerMode)
{
    const FreeParams<double> fp{0.9, 0.05};
    for (auto mode : {ConstraintMode::sufficient, ConstraintMode::necessary_and_sufficient}) {
        const auto rep = check_constraints(fp, PhysicalAngles<double>{1.72, theta_c_frozen}, mode);
        EXPECT_EQ(names_of(rep), constraint_names(mode));
    }
}

TEST(Constraints, FrozenStatePasses)
{
    const auto rep = check_constraints(FreeParams<double>{0.9, 0.05}, PhysicalAngles<double>{1.72, theta_c_frozen},
                                       ConstraintMode::necessary_and_sufficient);
    EXPECT_TRUE(rep.all_satisfied()) << ::testing::PrintToString(rep.failed());
    EXPECT_GT(rep.find("C6")->margin, 0.0);
    EXPECT_GT(rep.find("C8")->margin, 0.0);
    // a_ell < A here
    EXPECT_NEAR(rep.find("C8")->margin, 0.9 - 0.63652062065794994286, 1e-14);
}

TEST(Constraints, WrongContactAngleFailsC6)
{
    const auto rep = check_constraints(FreeParams<double>{0.9, 0.05}, PhysicalAngles<double>{1.72, 1.0},
                                       ConstraintMode::necessary_and_sufficient);
    EXPECT_FALSE(rep.find("C6")->satisfied);
    EXPECT_LT(rep.find("C6")->margin, 0.0);
    EXPECT_EQ(rep.failed(), std::vector<std::string>{"C6"});
}

TEST(Constraints, NonexistenceAtRightAngleAndZeroContact)
{
    for (auto mode : {ConstraintMode::sufficient, ConstraintMode::necessary_and_sufficient}) {
        auto r1 = check_constraints(FreeParams<double>{0.9, 0.05}, PhysicalAngles<double>{pi / 2, pi}, mode);
        EXPECT_FALSE(r1.all_satisfied());
        EXPECT_FALSE(r1.find("beta_range")->satisfied);
        EXPECT_FALSE(r1.find("C2")->satisfied);
    }
    auto r2 = check_constraints(FreeParams<double>{0.9, 0.05}, PhysicalAngles<double>{1.72, 0.0},
                                ConstraintMode::necessary_and_sufficient);
    EXPECT_FALSE(r2.all_satisfied());
    EXPECT_FALSE(r2.find("theta_c_range")->satisfied);
    EXPECT_EQ(r2.find("theta_c_range")->margin, 0.0);
    // no theta_c condition among the sufficient ones, but the range still applies
    auto r3 = check_constraints(FreeParams<double>{0.9, 0.05}, PhysicalAngles<double>{1.72, 0.0},
                                ConstraintMode::sufficient);
    EXPECT_FALSE(r3.all_satisfied());
    EXPECT_EQ(r3.failed(), std::vector<std::string>{"theta_c_range"});
}

TEST(Constraints, OutsideOmegaZero)
{
    const auto rep = check_constraints(FreeParams<double>{0.9, 0.5}, PhysicalAngles<double>{1.72, pi},
                                       ConstraintMode::necessary_and_sufficient);
    EXPECT_FALSE(rep.find("C1")->satisfied);
    EXPECT_LT(rep.find("C1")->margin, 0.0);
    EXPECT_TRUE(std::isnan(rep.find("C2")->margin));
}

TEST(Constraints, C7VacuousMarginIsInfinite)
{
    // cos(beta) >= -A / r_bar: the condition does not apply.
    const auto rep = check_constraints(FreeParams<double>{0.9, 0.05}, PhysicalAngles<double>{1.72, theta_c_frozen},
                                       ConstraintMode::necessary_and_sufficient);
    EXPECT_TRUE(rep.find("C7")->satisfied);
    EXPECT_TRUE(std::isinf(rep.find("C7")->margin));
}

TEST(Constraints, C7ActiveBranch)
{
    // beta near pi, A small: cos(beta) < -A / r_bar and cos(beta) > -1/(2A) fails.
    const double beta = 3.0, A = 0.3, sigma = 0.2;
    const double r = std::hypot(A, sigma);
    ASSERT_LT(std::cos(beta), -A / r);
    const auto rep = check_constraints(FreeParams<double>{A, sigma}, PhysicalAngles<double>{beta, pi},
                                       ConstraintMode::sufficient);
    const auto* c7 = rep.find("C7");
    EXPECT_NEAR(c7->margin, -1 / (2 * A) - std::cos(beta), 1e-15);
    EXPECT_EQ(c7->satisfied, c7->margin > 0);
}

TEST(Constraints, C3MarginMatchesEllipticRadius)
{
    // C3 holds exactly when a_ell^2 > 0.
    for (const auto& d : testsupport::random_valid_states(200, 21)) {
        const auto rep = check_constraints(FreeParams<double>{d.A, d.sigma}, PhysicalAngles<double>{d.beta, pi},
                                           ConstraintMode::sufficient);
        EXPECT_TRUE(rep.find("C3")->satisfied);
        EXPECT_GT(rep.find("C3")->margin, 0.0);
        // C8' is the closed form of a_ell < A
        EXPECT_EQ(rep.find("C8_prime")->satisfied, d.a_ell < d.A) << d.A << " " << d.sigma << " " << d.beta;
    }
}

TEST(Constraints, SufficientImpliesNecessaryOnThetaPiLocus)
{
    PhysicalAngles<double> pa{2.0, pi};
    SolveOptions opt;
    opt.check_constraints = false;
    for (double A : {0.95, 0.99, 0.999}) {
        const auto r = solve_sigma(A, pa, opt);
        ASSERT_EQ(r.status, SolveStatus::ok);
        const FreeParams<double> fp{A, r.sigma};
        const auto suff = check_constraints(fp, pa, ConstraintMode::sufficient);
        const auto ns = check_constraints(fp, pa, ConstraintMode::necessary_and_sufficient);
        if (suff.all_satisfied()) {
            EXPECT_TRUE(ns.all_satisfied()) << A << ::testing::PrintToString(ns.failed());
        }
    }
}

TEST(Intersection, SegmentPredicate)
{
    using P = Point<double>;
    EXPECT_TRUE(segments_intersect(P{0, 0}, P{1, 1}, P{0, 1}, P{1, 0}));
    EXPECT_FALSE(segments_intersect(P{0, 0}, P{1, 0}, P{0, 1}, P{1, 1}));
    // Touching at an endpoint is not a proper crossing.
    EXPECT_FALSE(segments_intersect(P{0, 0}, P{1, 1}, P{1, 1}, P{2, 0}));
}

TEST(Intersection, PolylineCrossingIgnoresJunction)
{
    using P = Point<double>;
    const P j{1, 1};
    std::vector<P> a{{0, 0}, {0.5, 0.5}, j};
    std::vector<P> b{{1, 0}, {1, 0.5}, j};
    EXPECT_FALSE(detail::polylines_cross(a, b, j, 0.0));
    std::vector<P> c{{2, 0}, {0.5, 0.8}, j};
    EXPECT_TRUE(detail::polylines_cross(c, b, j, 0.0));
}

TEST(Intersection, FastAcceptWhenEllipticRadiusBelowNeck)
{
    const auto d = derive_parameters(FreeParams<double>{0.9, 0.05}, 1.72);
    const auto ix = intersection_check(d, theta_c_frozen);
    EXPECT_TRUE(ix.fast_accept);
    EXPECT_TRUE(ix.separated);
    EXPECT_NEAR(ix.margin, d.A - d.a_ell, 1e-15);
}

TEST(Intersection, ClearanceAgreesWithPolylines)
{
    // States with a_ell >= A take the clearance path; the polyline test must
    // agree without raising the resolution flag.
    int checked = 0;
    for (const auto& d : testsupport::random_valid_states(60000, 9)) {
        if (d.a_ell < d.A) continue;
        for (double t : {1.0, 2.0, pi}) {
            const auto ix = intersection_check(d, t, 1u << 12);
            EXPECT_FALSE(ix.fast_accept);
            EXPECT_FALSE(ix.resolution_warning) << d.A << " " << d.sigma << " " << d.beta << " " << t;
            EXPECT_EQ(ix.separated, ix.margin > 0);
        }
        if (++checked == 40) break;
    }
    EXPECT_EQ(checked, 40);
}
