#pragma once

// Root finding on the admissible region:
//   theta_c_of   contact angle implied by (A, sigma, beta), root of z1 on (0, pi]
//   solve_sigma  sigma on the (beta, theta_c) branch at fixed A
//   trace_branch continuation of that branch over an A interval

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "constraints.hpp"
#include "curves.hpp"
#include "errors.hpp"
#include "gfunction.hpp"
#include "params.hpp"

namespace grainsteady {

struct SolveOptions {
    double residual_tol = 1e-11;      // bracket width accepted for the solved variable
    int max_iterations = 200;
    int bracket_scan_points = 64;     // >= 8, log-spaced toward both ends of (0, sigma_max)
    double continuation_step = 1e-3;
    double step_floor = 1e-9;
    bool check_constraints = true;    // run the full admissibility report on every solution
};

enum class SolveStatus { ok, not_found, constraint_violation, iteration_limit };

inline const char* to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::ok: return "ok";
    case SolveStatus::not_found: return "not_found";
    case SolveStatus::constraint_violation: return "constraint_violation";
    case SolveStatus::iteration_limit: return "iteration_limit";
    }
    return "unknown";
}

namespace detail {

template <std::floating_point Real>
struct Bracketed {
    Real x = 0;
    Real width = 0;
    bool converged = false;
};

// TOMS 748 on [a, b] with f(a), f(b) of opposite sign, run to full precision
// or the iteration cap.
template <std::floating_point Real, class F>
Bracketed<Real> toms748(F&& f, Real a, Real b, Real fa, Real fb, int max_iterations)
{
    std::uintmax_t iters = static_cast<std::uintmax_t>(max_iterations);
    const Real eps = std::numeric_limits<Real>::epsilon();
    auto tol = [eps](Real lo, Real hi) {
        return std::abs(hi - lo) <= 4 * eps * std::min(std::abs(lo), std::abs(hi));
    };
    const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
    Bracketed<Real> out;
    out.x = (r.first + r.second) / 2;
    out.width = std::abs(r.second - r.first);
    out.converged = iters < static_cast<std::uintmax_t>(max_iterations) || tol(r.first, r.second);
    return out;
}

} // namespace detail

// theta_c for (A, sigma, beta): the unique root of z1 on (0, pi], which
// exists iff z1(pi) <= 0. Empty when the parameters are invalid or z1(pi) > 0.
template <std::floating_point Real>
std::optional<Real> theta_c_of(const DerivedParams<Real>& dp, int max_iterations = 200)
{
    if (!dp.ok()) return std::nullopt;
    const Real pi = std::numbers::pi_v<Real>;
    const Real zpi = curves::z1(pi, dp);
    if (zpi > 0) return std::nullopt;
    if (zpi == 0) return pi;
    auto f = [&](Real t) { return curves::z1(t, dp); };
    const Real z0 = f(Real(0));
    const auto r = detail::toms748(f, Real(0), pi, z0, zpi, max_iterations);
    if (!r.converged) throw NumericalFailure("theta_c_of: root finder hit the iteration cap");
    return r.x;
}

template <std::floating_point Real>
std::optional<Real> theta_c_of(const FreeParams<Real>& fp, Real beta, int max_iterations = 200)
{
    return theta_c_of(derive_parameters(fp, beta), max_iterations);
}

template <std::floating_point Real>
struct SolveResult {
    SolveStatus status = SolveStatus::not_found;
    Real A = 0;
    Real sigma = std::numeric_limits<Real>::quiet_NaN();
    Real residual = std::numeric_limits<Real>::quiet_NaN();  // final bracket width in sigma
    std::vector<Real> roots;                                  // all roots found by the scan
    ConstraintReport<Real> report;
};

// Branch function whose zeros in sigma are the solutions at fixed A:
// G for theta_c = pi, theta_c(A, sigma) - target otherwise. NaN where the
// parameters are invalid. Where z1(pi) > 0 no theta_c exists; the value
// pi - target keeps the function continuous across z1(pi) = 0.
template <std::floating_point Real>
Real branch_function(Real A, Real sigma, const PhysicalAngles<Real>& pa, int max_iterations = 200)
{
    const auto dp = derive_parameters(FreeParams<Real>{A, sigma}, pa.beta);
    if (!dp.ok()) return std::numeric_limits<Real>::quiet_NaN();
    const Real pi = std::numbers::pi_v<Real>;
    if (pa.theta_c >= pi) return G_value(dp);
    const auto tc = theta_c_of(dp, max_iterations);
    return (tc ? *tc : pi) - pa.theta_c;
}

// Scan points in (0, 1): half log-spaced toward 0, half toward 1.
inline std::vector<double> scan_fractions(int n)
{
    n = std::max(n, 8);
    const int half = n / 2;
    std::vector<double> u;
    u.reserve(n);
    for (int i = 0; i < half; ++i) u.push_back(std::pow(10.0, -12.0 + 11.7 * i / (half - 1)));
    for (int i = n - half - 1; i >= 0; --i) u.push_back(1 - std::pow(10.0, -12.0 + 11.7 * i / (n - half - 1)));
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    return u;
}

// Sub-intervals of (0, sqrt(1 - A^2)) on which derive_parameters succeeds.
// The status can only change where lambda changes sign (sigma = -A cot beta)
// or where a_ell^2 does, i.e. at the roots of
//   2 A sigma^2 + tan(beta) sigma - A (1 - 2 A^2) = 0.
template <std::floating_point Real>
std::vector<std::pair<Real, Real>> admissible_sigma_intervals(Real A, Real beta)
{
    const Real smax = FreeParams<Real>{A, 0}.sigma_max();
    std::vector<Real> cuts{Real(0), smax};
    auto add = [&](Real s) {
        if (s > 0 && s < smax) cuts.push_back(s);
    };
    add(-A * std::cos(beta) / std::sin(beta));
    const Real qa = 2 * A, qb = std::tan(beta), qc = -A * (1 - 2 * A * A);
    const Real disc = qb * qb - 4 * qa * qc;
    if (disc >= 0) {
        const Real sq = std::sqrt(disc);
        // cancellation-free pair of roots
        const Real t = -(qb + std::copysign(sq, qb)) / 2;
        add(t / qa);
        if (t != 0) add(qc / t);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::pair<Real, Real>> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Real lo = cuts[i], hi = cuts[i + 1];
        if (!(hi > lo)) continue;
        if (!derive_parameters(FreeParams<Real>{A, (lo + hi) / 2}, beta).ok()) continue;
        if (!out.empty() && out.back().second == lo) {
            out.back().second = hi;
        } else {
            out.emplace_back(lo, hi);
        }
    }
    return out;
}

namespace detail {

template <std::floating_point Real>
SolveResult<Real> finish(SolveResult<Real> res, Real A, const PhysicalAngles<Real>& pa, const SolveOptions& opt)
{
    res.A = A;
    if (!opt.check_constraints) {
        res.status = SolveStatus::ok;
        return res;
    }
    res.report = check_constraints(FreeParams<Real>{A, res.sigma}, pa, ConstraintMode::necessary_and_sufficient);
    res.status = res.report.all_satisfied() ? SolveStatus::ok : SolveStatus::constraint_violation;
    return res;
}

// Refine inside [lo, hi] (known sign change) and polish with Newton on G.
template <std::floating_point Real>
Bracketed<Real> refine(Real A, const PhysicalAngles<Real>& pa, Real lo, Real hi, Real flo, Real fhi,
                       const SolveOptions& opt)
{
    auto f = [&](Real s) { return branch_function(A, s, pa, opt.max_iterations); };
    auto r = toms748(f, lo, hi, flo, fhi, opt.max_iterations);
    if (pa.theta_c >= std::numbers::pi_v<Real>) {
        for (int it = 0; it < 2; ++it) {
            const auto dp = derive_parameters(FreeParams<Real>{A, r.x}, pa.beta);
            if (!dp.ok()) break;
            const Real g = G_value(dp);
            const Real gs = G_gradient(dp).dsigma;
            const Real next = r.x - g / gs;
            if (!(next > lo && next < hi)) break;
            const auto dn = derive_parameters(FreeParams<Real>{A, next}, pa.beta);
            if (!dn.ok() || std::abs(G_value(dn)) >= std::abs(g)) break;
            r.x = next;
        }
    }
    return r;
}

} // namespace detail

// sigma on the (beta, theta_c) branch at fixed A. All sign changes found by
// the scan are refined and returned in `roots`; the reported sigma is the
// one closest to `hint` when given, otherwise the smallest.
template <std::floating_point Real>
SolveResult<Real> solve_sigma(Real A, const PhysicalAngles<Real>& pa, const SolveOptions& opt = {},
                              std::optional<Real> hint = std::nullopt)
{
    SolveResult<Real> res;
    res.A = A;
    if (!pa.valid() || !(A > 0 && A < 1)) return res;
    // Scan each admissible sub-interval, log-spaced toward both of its ends.
    const auto u = scan_fractions(opt.bracket_scan_points);
    std::vector<Real> s, f;
    for (const auto& [lo, hi] : admissible_sigma_intervals(A, pa.beta)) {
        for (double ui : u) {
            const Real si = lo + (hi - lo) * Real(ui);
            if (!(si > lo && si < hi)) continue;
            s.push_back(si);
            f.push_back(branch_function(A, si, pa, opt.max_iterations));
        }
        // NaN separator so no bracket spans two sub-intervals
        s.push_back(hi);
        f.push_back(std::numeric_limits<Real>::quiet_NaN());
    }

    std::vector<Real> widths;
    bool capped = false;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (std::isnan(f[i]) || std::isnan(f[i + 1])) continue;
        if (f[i] == 0) {
            res.roots.push_back(s[i]);
            widths.push_back(0);
            continue;
        }
        if ((f[i] < 0) == (f[i + 1] < 0)) continue;
        const auto r = detail::refine(A, pa, s[i], s[i + 1], f[i], f[i + 1], opt);
        capped = capped || !r.converged;
        res.roots.push_back(r.x);
        widths.push_back(r.width);
    }
    if (res.roots.empty()) {
        res.status = SolveStatus::not_found;
        return res;
    }

    std::size_t pick = 0;
    for (std::size_t i = 1; i < res.roots.size(); ++i) {
        const bool better = hint ? std::abs(res.roots[i] - *hint) < std::abs(res.roots[pick] - *hint)
                                 : res.roots[i] < res.roots[pick];
        if (better) pick = i;
    }
    res.sigma = res.roots[pick];
    res.residual = widths[pick];
    if (capped && res.residual > opt.residual_tol) {
        res.status = SolveStatus::iteration_limit;
        return res;
    }
    return detail::finish(res, A, pa, opt);
}

// Solve near a predicted sigma by growing a bracket around it.
template <std::floating_point Real>
SolveResult<Real> solve_sigma_local(Real A, const PhysicalAngles<Real>& pa, Real predicted, Real width,
                                    const SolveOptions& opt = {})
{
    SolveResult<Real> res;
    res.A = A;
    const Real smax = FreeParams<Real>{A, 0}.sigma_max();
    if (!(predicted > 0 && predicted < smax)) return res;
    auto f = [&](Real s) { return branch_function(A, s, pa, opt.max_iterations); };
    width = std::max(width, predicted * Real(1e-6));
    for (int grow = 0; grow < 12; ++grow, width *= 4) {
        const Real lo = std::max(predicted - width, predicted * Real(1e-3));
        const Real hi = std::min(predicted + width, predicted + (smax - predicted) * Real(0.999));
        const Real flo = f(lo), fhi = f(hi);
        if (std::isnan(flo) || std::isnan(fhi)) continue;
        if ((flo < 0) == (fhi < 0)) continue;
        const auto r = detail::refine(A, pa, lo, hi, flo, fhi, opt);
        res.sigma = r.x;
        res.residual = r.width;
        res.roots = {r.x};
        if (!r.converged && r.width > opt.residual_tol) {
            res.status = SolveStatus::iteration_limit;
            return res;
        }
        return detail::finish(res, A, pa, opt);
    }
    return res;
}

template <std::floating_point Real>
struct BranchPoint {
    Real A = 0;
    Real sigma = 0;
    Real residual = 0;
    DerivedParams<Real> params;
    ConstraintReport<Real> report;
};

template <std::floating_point Real>
struct ASigmaCurve {
    PhysicalAngles<Real> angles;
    std::vector<BranchPoint<Real>> points;  // increasing A
    std::vector<Real> gaps;                 // grid values of A where no admissible solution was found
    bool step_floor_reached = false;

    bool complete() const { return gaps.empty(); }
};

// Natural continuation in A from A_max down to A_min on the grid
// A_max - j * step, warm-started by a linear predictor. A failed step is
// halved toward the last good point until step_floor; the grid value is then
// recorded as a gap and the next grid value is tried cold.
template <std::floating_point Real>
ASigmaCurve<Real> trace_branch(const PhysicalAngles<Real>& pa, Real A_min, Real A_max, const SolveOptions& opt = {})
{
    ASigmaCurve<Real> curve;
    curve.angles = pa;
    if (!(A_max > A_min) || !(opt.continuation_step > 0)) {
        throw std::invalid_argument("trace_branch: need A_min < A_max and a positive step");
    }
    const Real step = Real(opt.continuation_step);
    const auto n_steps = static_cast<long>(std::ceil(double((A_max - A_min) / step) - 1e-9));

    std::vector<BranchPoint<Real>> found;  // decreasing A
    auto record = [&](const SolveResult<Real>& r) {
        BranchPoint<Real> p;
        p.A = r.A;
        p.sigma = r.sigma;
        p.residual = r.residual;
        p.params = derive_parameters(FreeParams<Real>{r.A, r.sigma}, pa.beta);
        p.report = r.report;
        found.push_back(p);
    };
    auto attempt = [&](Real A) -> SolveResult<Real> {
        if (found.size() >= 2) {
            const auto& p1 = found[found.size() - 1];
            const auto& p0 = found[found.size() - 2];
            const Real slope = (p1.sigma - p0.sigma) / (p1.A - p0.A);
            const Real pred = p1.sigma + slope * (A - p1.A);
            const Real width = std::abs(pred - p1.sigma) + Real(1e-12);
            auto r = solve_sigma_local(A, pa, pred, width, opt);
            if (r.status == SolveStatus::ok) return r;
        }
        std::optional<Real> hint;
        if (!found.empty()) hint = found.back().sigma;
        return solve_sigma(A, pa, opt, hint);
    };

    bool previous_ok = false;
    for (long j = 0; j <= n_steps; ++j) {
        const Real A = (j == n_steps) ? A_min : A_max - step * Real(j);
        auto r = attempt(A);
        if (r.status == SolveStatus::ok) {
            record(r);
            previous_ok = true;
            continue;
        }
        // Halve toward the previous grid value to pin down where the branch
        // stops being admissible.
        bool recovered = false;
        if (previous_ok) {
            const Real A_prev = found.back().A;
            Real h = (A_prev - A) / 2;
            while (h >= Real(opt.step_floor)) {
                const Real Am = found.back().A - h;
                if (!(Am > A)) break;
                auto rm = attempt(Am);
                if (rm.status == SolveStatus::ok) {
                    record(rm);
                    auto again = attempt(A);
                    if (again.status == SolveStatus::ok) {
                        record(again);
                        recovered = true;
                        break;
                    }
                    h = (found.back().A - A) / 2;
                } else {
                    h /= 2;
                }
            }
            if (h < Real(opt.step_floor)) curve.step_floor_reached = true;
        }
        if (!recovered) curve.gaps.push_back(A);
        previous_ok = recovered;
    }

    std::reverse(found.begin(), found.end());
    curve.points = std::move(found);
    std::sort(curve.gaps.begin(), curve.gaps.end());
    return curve;
}

} // namespace grainsteady
