#pragma once

// Behaviour of the theta_c = pi branch near (A, sigma) = (1, 0), where
//   sigma ~ (1 + sin beta) / (-cos beta) * (1 - A).

#include <cmath>
#include <concepts>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "constraints.hpp"
#include "params.hpp"
#include "solvers.hpp"

namespace grainsteady {

template <std::floating_point Real>
Real asymptotic_slope(Real beta)
{
    if (!(beta > std::numbers::pi_v<Real> / 2 && beta < std::numbers::pi_v<Real>)) {
        throw std::domain_error("asymptotic_slope: beta must lie in (pi/2, pi)");
    }
    return (1 + std::sin(beta)) / (-std::cos(beta));
}

// Largest eps for which the corner neighbourhood Omega_eps satisfies
//   eps < 1 - 1/sqrt(2),
//   -(1 - 8 eps) / (2 sqrt(eps)) < tan(beta) - 1   (implies the tan(beta) bound),
//   eps < 1 + 1 / (2 cos(beta))                    when beta > 2 pi / 3.
// The middle condition is monotone in eps on (0, 1/8), so it is bisected.
// The value returned is strictly feasible.
template <std::floating_point Real>
Real max_eps(Real beta)
{
    const Real pi = std::numbers::pi_v<Real>;
    if (!(beta > pi / 2 && beta < pi)) throw std::domain_error("max_eps: beta must lie in (pi/2, pi)");
    Real hi = 1 - 1 / std::sqrt(Real(2));
    if (beta > 2 * pi / 3) hi = std::min(hi, 1 + 1 / (2 * std::cos(beta)));
    hi = std::min(hi, Real(0.125));
    const Real t = std::tan(beta) - 1;
    auto ok = [t](Real e) { return -(1 - 8 * e) / (2 * std::sqrt(e)) < t; };
    if (ok(hi)) return hi * (1 - 4 * std::numeric_limits<Real>::epsilon());
    Real lo = 0;
    for (int it = 0; it < 200 && hi - lo > std::numeric_limits<Real>::epsilon() * hi; ++it) {
        const Real mid = (lo + hi) / 2;
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

template <std::floating_point Real>
struct SlopeFit {
    Real beta = 0;
    Real formula_slope = 0;
    Real fitted_slope = 0;
    Real relative_gap = 0;
    std::vector<Real> grid;    // A values
    std::vector<Real> sigma;   // solved sigma at each A (NaN where not found)
    bool all_solved = true;
    bool c8_prime_ok = true;   // every solution has a_ell < A
    bool sigma_bounds_ok = true;   // 0 < sigma < 2 (1 - A) / (-cos beta)
};

// Solve the theta_c = pi branch on an A grid and fit sigma = s (1 - A)
// through the origin.
template <std::floating_point Real>
SlopeFit<Real> verify_slope(Real beta, const std::vector<Real>& A_grid, SolveOptions opt = {})
{
    SlopeFit<Real> fit;
    fit.beta = beta;
    fit.formula_slope = asymptotic_slope(beta);
    fit.grid = A_grid;
    const Real eps = max_eps(beta);
    const PhysicalAngles<Real> pa{beta, std::numbers::pi_v<Real>};
    opt.check_constraints = false;

    Real sxy = 0, sxx = 0;
    std::optional<Real> hint;
    for (Real A : A_grid) {
        if (!(A > 1 - eps && A < 1)) throw std::domain_error("verify_slope: grid point outside the corner neighbourhood");
        const auto r = solve_sigma(A, pa, opt, hint);
        if (r.status != SolveStatus::ok) {
            fit.all_solved = false;
            fit.sigma.push_back(std::numeric_limits<Real>::quiet_NaN());
            continue;
        }
        hint = r.sigma;
        fit.sigma.push_back(r.sigma);
        const auto rep = check_constraints(FreeParams<Real>{A, r.sigma}, pa, ConstraintMode::sufficient);
        if (!rep.find("C8_prime")->satisfied) fit.c8_prime_ok = false;
        if (!(r.sigma > 0 && r.sigma < 2 * (1 - A) / (-std::cos(beta)))) fit.sigma_bounds_ok = false;
        const Real x = 1 - A;
        sxy += x * r.sigma;
        sxx += x * x;
    }
    fit.fitted_slope = sxx > 0 ? sxy / sxx : std::numeric_limits<Real>::quiet_NaN();
    fit.relative_gap = std::abs(fit.fitted_slope - fit.formula_slope) / std::abs(fit.formula_slope);
    return fit;
}

// Evenly spaced grid in 1 - A on [1 - far, 1 - near].
template <std::floating_point Real>
std::vector<Real> corner_grid(Real near, Real far, int n)
{
    std::vector<Real> g;
    for (int i = 0; i < n; ++i) g.push_back(1 - (far + (near - far) * Real(i) / Real(n - 1)));
    return g;
}

} // namespace grainsteady
