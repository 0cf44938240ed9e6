#pragma once

// Physical angles, free parameters (A, sigma) and everything derived from
// them: junction position, junction angles, lambda, a_ell, modulus k.
//
// Near the corner (A, sigma) -> (1, 0) lambda blows up. All quantities are
// therefore formed from mu = 1/lambda, which stays small and smooth there.

#include <cmath>
#include <concepts>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace grainsteady {

template <std::floating_point Real>
struct PhysicalAngles {
    Real beta = 0;     // cell wall / grain boundary angle, in (pi/2, pi)
    Real theta_c = std::numbers::pi_v<Real>;  // contact angle at the substrate, in (0, pi]

    Real m() const { return -2 * std::cos(beta); }

    static PhysicalAngles from_m(Real m, Real theta_c = std::numbers::pi_v<Real>)
    {
        return {std::acos(-m / 2), theta_c};
    }

    bool beta_in_range() const
    {
        return beta > std::numbers::pi_v<Real> / 2 && beta < std::numbers::pi_v<Real>;
    }
    bool theta_c_in_range() const { return theta_c > 0 && theta_c <= std::numbers::pi_v<Real>; }
    bool valid() const { return beta_in_range() && theta_c_in_range(); }

    void require_valid() const
    {
        if (!beta_in_range()) throw std::domain_error("beta must lie in (pi/2, pi)");
        if (!theta_c_in_range()) throw std::domain_error("theta_c must lie in (0, pi]");
    }
};

template <std::floating_point Real>
struct FreeParams {
    Real A = 0;      // catenoid neck radius
    Real sigma = 0;  // catenoid arc length

    // 1 - A^2 - sigma^2, formed without cancellation for A near 1.
    Real one_minus_rbar2() const { return (1 - A) * (1 + A) - sigma * sigma; }
    Real sigma_max() const { return std::sqrt((1 - A) * (1 + A)); }

    // (A, sigma) in Omega_0: 0 < A < r_bar < 1.
    bool in_omega0() const { return A > 0 && A < 1 && sigma > 0 && one_minus_rbar2() > 0; }
};

enum class DerivedStatus {
    ok,
    outside_omega0,
    lambda_nonnegative,        // A cos(beta) + sigma sin(beta) >= 0
    a_ell_radicand_negative,   // a_ell^2 <= 0
};

inline const char* to_string(DerivedStatus s)
{
    switch (s) {
    case DerivedStatus::ok: return "ok";
    case DerivedStatus::outside_omega0: return "outside_omega0";
    case DerivedStatus::lambda_nonnegative: return "lambda_nonnegative";
    case DerivedStatus::a_ell_radicand_negative: return "a_ell_radicand_negative";
    }
    return "unknown";
}

template <std::floating_point Real>
struct DerivedParams {
    DerivedStatus status = DerivedStatus::outside_omega0;

    Real A = 0, sigma = 0, beta = 0;
    Real r_bar = 0, z_bar = 0;
    Real theta1_bar = 0, theta2_bar = 0, theta3_bar = 0;
    Real lambda = 0;
    Real mu = 0;         // 1 / lambda
    Real a_ell = 0;
    Real k = 0, k_prime = 0;     // modulus for Gamma_1
    Real k2 = 0, k2_prime = 0;   // modulus for Gamma_2 (a = 1)
    Real lambda_k = 0;           // lambda * k, tends to -1/2 at the corner
    Real z2_star = 0;            // height of Gamma_2 at the cell wall

    // Filled once theta_c is known.
    std::optional<Real> theta_c;
    std::optional<Real> r1_star;

    bool ok() const { return status == DerivedStatus::ok; }

    void require_ok() const
    {
        if (!ok()) throw std::domain_error(std::string("derived parameters invalid: ") + to_string(status));
    }
};

// Junction geometry only; valid for any (A, sigma) in Omega_0.
template <std::floating_point Real>
void fill_junction(DerivedParams<Real>& d, const FreeParams<Real>& fp, Real beta)
{
    d.A = fp.A;
    d.sigma = fp.sigma;
    d.beta = beta;
    d.r_bar = std::hypot(fp.A, fp.sigma);
    // A acosh(r_bar / A) written as A asinh(sigma / A).
    d.z_bar = fp.A * std::asinh(fp.sigma / fp.A);
    d.theta3_bar = std::atan2(fp.A, fp.sigma);
    d.theta1_bar = d.theta3_bar - beta;
    d.theta2_bar = d.theta3_bar + beta - std::numbers::pi_v<Real>;
}

// Everything except z2_star, which needs the curve module.
template <std::floating_point Real>
DerivedParams<Real> derive_algebraic(const FreeParams<Real>& fp, Real beta)
{
    DerivedParams<Real> d;
    if (!fp.in_omega0()) {
        d.status = DerivedStatus::outside_omega0;
        d.A = fp.A;
        d.sigma = fp.sigma;
        d.beta = beta;
        return d;
    }
    fill_junction(d, fp, beta);

    const Real c = std::cos(beta), s = std::sin(beta);
    const Real num = fp.A * c + fp.sigma * s;
    const Real den = fp.one_minus_rbar2();
    if (!(num < 0)) {
        d.status = DerivedStatus::lambda_nonnegative;
        d.lambda = num / den;
        return d;
    }
    d.mu = den / num;
    d.lambda = num / den;

    // a_ell^2 = r_bar^2 - sin(theta1_bar) r_bar / lambda = 1 - 2 A cos(beta) mu
    const Real a2 = 1 - 2 * fp.A * c * d.mu;
    if (!(a2 > 0)) {
        d.status = DerivedStatus::a_ell_radicand_negative;
        return d;
    }
    d.a_ell = std::sqrt(a2);

    // 1/k^2 = 1 + 4 lambda^2 a^2; scaled by mu^2 this is q = mu^2 + 4 a^2.
    const Real q = d.mu * d.mu + 4 * a2;
    const Real sq = std::sqrt(q);
    d.k = -d.mu / sq;
    d.k_prime = 2 * d.a_ell / sq;
    d.lambda_k = -1 / sq;
    if (!(d.k < 1)) {
        // a_ell too small to resolve in k; treated as a_ell = 0
        d.status = DerivedStatus::a_ell_radicand_negative;
        return d;
    }

    const Real q2 = std::sqrt(d.mu * d.mu + 4);
    d.k2 = -d.mu / q2;
    d.k2_prime = 2 / q2;

    d.status = DerivedStatus::ok;
    return d;
}

} // namespace grainsteady
