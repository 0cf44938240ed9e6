#pragma once

// Admissibility conditions for a parameter set (A, sigma, beta, theta_c).
//
// Each condition is reported with a signed margin: positive when it holds
// strictly, zero on its boundary, negative when violated. Identity-type
// conditions (C4, C5, C6) report tolerance minus residual.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "curves.hpp"
#include "params.hpp"
#include "profile.hpp"

namespace grainsteady {

enum class ConstraintMode {
    sufficient,               // C1-C5, C7, z1(pi) <= 0, C8'
    necessary_and_sufficient  // C1-C7 with z1(theta_c) = 0, geometric C8
};

template <std::floating_point Real>
struct ConstraintRecord {
    std::string name;
    bool satisfied = false;
    // +inf when the condition is vacuous, NaN when it could not be evaluated.
    Real margin = 0;
};

template <std::floating_point Real>
struct ConstraintReport {
    ConstraintMode mode = ConstraintMode::sufficient;
    std::vector<ConstraintRecord<Real>> records;

    bool all_satisfied() const
    {
        return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.satisfied; });
    }

    const ConstraintRecord<Real>* find(const std::string& name) const
    {
        for (const auto& r : records) {
            if (r.name == name) return &r;
        }
        return nullptr;
    }

    std::vector<std::string> failed() const
    {
        std::vector<std::string> out;
        for (const auto& r : records) {
            if (!r.satisfied) out.push_back(r.name);
        }
        return out;
    }
};

template <std::floating_point Real>
struct ConstraintTolerances {
    Real identity = Real(1e-10);   // C4, C5, C6 residuals
    Real z1_pi = Real(1e-12);      // slack on z1(pi) <= 0
};

// Record names in the order they are reported, per mode.
inline std::vector<std::string> constraint_names(ConstraintMode mode)
{
    if (mode == ConstraintMode::sufficient) {
        return {"beta_range", "theta_c_range", "C1", "C2", "C3", "C4", "C5", "C7", "z1_pi", "C8_prime"};
    }
    return {"beta_range", "theta_c_range", "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8"};
}

template <std::floating_point Real>
struct IntersectionResult {
    bool separated = false;        // Gamma_1 meets Gamma_3 only at the junction
    bool fast_accept = false;      // decided by a_ell < A
    bool resolution_warning = false;
    Real margin = 0;               // signed clearance, see intersection_check
    std::size_t samples = 0;       // polyline resolution used for the cross-check
};

namespace detail {

template <std::floating_point Real>
bool polylines_cross(std::vector<Point<Real>> a, std::vector<Point<Real>> b, Point<Real> junction, Real r_floor)
{
    // Both curves end exactly at the junction so the shared endpoint is never
    // counted as a proper crossing.
    a.back() = junction;
    b.back() = junction;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        if (std::max(a[i].r, a[i + 1].r) < r_floor) continue;
        const Real zlo = std::min(a[i].z, a[i + 1].z), zhi = std::max(a[i].z, a[i + 1].z);
        const Real rlo = std::min(a[i].r, a[i + 1].r), rhi = std::max(a[i].r, a[i + 1].r);
        for (std::size_t j = 0; j + 1 < b.size(); ++j) {
            if (std::max(b[j].z, b[j + 1].z) < zlo || std::min(b[j].z, b[j + 1].z) > zhi) continue;
            if (std::max(b[j].r, b[j + 1].r) < rlo || std::min(b[j].r, b[j + 1].r) > rhi) continue;
            if (segments_intersect(a[i], a[i + 1], b[j], b[j + 1])) return true;
        }
    }
    return false;
}

// Angle in (lo, hi) where r1 = target, r1 monotone on the interval.
template <std::floating_point Real>
Real r1_crossing(const DerivedParams<Real>& dp, Real target, Real lo, Real hi)
{
    Real flo = curves::r1(lo, dp) - target;
    for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<Real>::epsilon(); ++it) {
        const Real mid = (lo + hi) / 2;
        const Real fm = curves::r1(mid, dp) - target;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / 2;
}

} // namespace detail

// Does Gamma_1 meet Gamma_3 anywhere but the junction?
//
// On [theta1_bar, 0] Gamma_1 stays above z_bar, which is above all of Gamma_3,
// and on [0, theta_c] it starts above Gamma_3 and ends on the substrate. So a
// crossing happens iff the clearance
//     d(t) = z1(t) - A acosh(r1(t) / A),   t in [0, theta_c], r1(t) >= A,
// reaches zero. The margin is min d, or A - max r1 when Gamma_1 never gets
// out to r = A. A segment-intersection test on refined polylines is run as
// an independent check; disagreement at the finest level sets
// resolution_warning.
template <std::floating_point Real>
IntersectionResult<Real> intersection_check(const DerivedParams<Real>& dp, Real theta_c,
                                            std::size_t max_samples = 1u << 14)
{
    dp.require_ok();
    IntersectionResult<Real> res;
    const Real pi = std::numbers::pi_v<Real>;
    const Real A = dp.A;

    if (dp.a_ell < A) {
        res.fast_accept = true;
        res.separated = true;
        res.margin = A - dp.a_ell;
        return res;
    }

    // r1 falls from a_ell at 0 to its minimum at pi/2 and climbs back to
    // a_ell at pi, so {r1 >= A} is [0, t_a] u [t_b, pi].
    const Real t_a = detail::r1_crossing(dp, A, Real(0), pi / 2);
    const Real t_b = detail::r1_crossing(dp, A, pi / 2, pi);
    auto clearance = [&](Real t) {
        const Real r = std::max(curves::r1(t, dp), A);
        return curves::z1(t, dp) - curves::catenoid_height_at(r, A);
    };

    Real margin = std::numeric_limits<Real>::infinity();
    auto scan = [&](Real lo, Real hi) {
        if (!(hi > lo)) return;
        const int n = 256;
        Real best_t = lo, best = clearance(lo);
        for (int i = 1; i <= n; ++i) {
            const Real t = lo + (hi - lo) * Real(i) / Real(n);
            const Real v = clearance(t);
            if (v < best) {
                best = v;
                best_t = t;
            }
        }
        const Real step = (hi - lo) / Real(n);
        const Real a = std::max(lo, best_t - step), b = std::min(hi, best_t + step);
        std::uintmax_t iters = 100;
        const auto m = boost::math::tools::brent_find_minima(clearance, a, b,
                                                             std::numeric_limits<Real>::digits / 2, iters);
        margin = std::min({margin, best, m.second});
    };
    scan(Real(0), std::min(t_a, theta_c));
    if (theta_c > t_b) scan(t_b, theta_c);
    if (!std::isfinite(margin)) {
        // theta_c < t_a is impossible here (z1 > 0 on [0, t_a] would be
        // needed), but keep a defined answer.
        margin = A - curves::r1(theta_c, dp);
    }
    res.margin = margin;
    const bool analytic_separated = margin > 0;

    // Polyline cross-check with refinement.
    const Point<Real> junction{dp.r_bar, dp.z_bar};
    std::size_t n = 512;
    bool agree = false;
    for (; n <= max_samples; n *= 2) {
        auto prof = sample_profile(dp, theta_c, n);
        const bool cross = detail::polylines_cross(prof.gamma1.points, prof.gamma3.points, junction, A);
        if (cross != analytic_separated) {
            agree = true;
            break;
        }
    }
    res.samples = std::min(n, max_samples);
    res.resolution_warning = !agree;
    res.separated = analytic_separated;
    return res;
}

// Evaluate every condition for the given mode.
template <std::floating_point Real>
ConstraintReport<Real> check_constraints(const FreeParams<Real>& fp, const PhysicalAngles<Real>& pa,
                                         ConstraintMode mode, const ConstraintTolerances<Real>& tol = {})
{
    ConstraintReport<Real> rep;
    rep.mode = mode;
    const Real pi = std::numbers::pi_v<Real>;
    const Real nan = std::numeric_limits<Real>::quiet_NaN();
    const Real inf = std::numeric_limits<Real>::infinity();
    auto add = [&](const std::string& name, bool ok, Real margin) {
        rep.records.push_back({name, ok && !std::isnan(margin), margin});
    };

    const Real beta = pa.beta;
    const Real A = fp.A, sigma = fp.sigma;
    const Real c = std::cos(beta);

    {
        const Real m = std::min(beta - pi / 2, pi - beta);
        add("beta_range", m > 0, m);
    }
    {
        const Real m = std::min(pa.theta_c, pi - pa.theta_c);
        add("theta_c_range", pa.theta_c_in_range(), m);
    }

    const auto dp = derive_parameters(fp, beta);
    const Real r_bar = std::hypot(A, sigma);
    {
        const Real m = std::min({A, sigma * sigma / (r_bar + A), fp.one_minus_rbar2() / (1 + r_bar)});
        add("C1", fp.in_omega0(), m);
    }
    const bool omega0 = fp.in_omega0();
    {
        // lambda < 0
        const Real m = omega0 ? -dp.lambda : nan;
        add("C2", omega0 && dp.lambda < 0, m);
    }
    {
        // 0 < a_ell < 1, as tan(beta) > (A / sigma)(1 - 2A^2 - 2 sigma^2)
        const Real m = omega0 ? std::tan(beta) - A / sigma * (1 - 2 * A * A - 2 * sigma * sigma) : nan;
        add("C3", omega0 && m > 0 && dp.ok(), m);
    }
    const bool ok = dp.ok();
    {
        const Real res = ok ? std::abs(curves::r2(dp.theta2_bar, dp) - dp.r_bar) : nan;
        add("C4", ok && res <= tol.identity, tol.identity - res);
    }
    {
        const Real res = ok ? std::abs(curves::r1(dp.theta1_bar, dp) - dp.r_bar) : nan;
        add("C5", ok && res <= tol.identity, tol.identity - res);
    }
    if (mode == ConstraintMode::necessary_and_sufficient) {
        Real res = nan;
        if (ok && pa.theta_c_in_range()) res = std::abs(curves::z1(pa.theta_c, dp));
        add("C6", ok && res <= tol.identity, tol.identity - res);
    }
    {
        // cos(beta) < -1/(2A) if cos(beta) < -A / r_bar
        if (!omega0) {
            add("C7", false, nan);
        } else if (c < -A / r_bar) {
            const Real m = -1 / (2 * A) - c;
            add("C7", m > 0, m);
        } else {
            add("C7", true, inf);
        }
    }
    if (mode == ConstraintMode::sufficient) {
        const Real z = ok ? curves::z1(pi, dp) : nan;
        add("z1_pi", ok && z <= tol.z1_pi, -z);
        // a_ell < A, as tan(beta) < A (1 - A^2 - 2 sigma^2) / (sigma (1 - A^2))
        const Real m = omega0 ? A * (1 - A * A - 2 * sigma * sigma) / (sigma * (1 - A) * (1 + A)) - std::tan(beta)
                              : nan;
        add("C8_prime", omega0 && m > 0, m);
    } else {
        if (ok && pa.theta_c_in_range()) {
            const auto ix = intersection_check(dp, pa.theta_c);
            add("C8", ix.separated, ix.margin);
        } else {
            add("C8", false, nan);
        }
    }
    return rep;
}

} // namespace grainsteady
