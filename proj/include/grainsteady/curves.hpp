#pragma once

// Meridian curves of the steady state, parametrized by tangent angle.
//
//   Gamma_1, Gamma_2: nodoids with mean curvature lambda,
//       r(t) = (sin t - sqrt(sin^2 t + 4 lambda^2 a^2)) / (2 lambda)
//       z(t) = z_bar - 1/(2 lambda) int_{t_bar}^{t} (sin^2 x / sqrt(sin^2 x + c^2) - sin x) dx
//     with a = a_ell, c^2 = 4 lambda^2 a_ell^2 for Gamma_1 and a = 1 for Gamma_2.
//   Gamma_3: catenoid r = A / sin t, z = A log((1 + cos t) / sin t).
//
// Heights are evaluated in closed form through F and E; quadrature versions
// are kept for cross-checking.

#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "elliptic.hpp"
#include "params.hpp"
#include "quadrature.hpp"

namespace grainsteady {

template <std::floating_point Real>
struct Point {
    Real r = 0;
    Real z = 0;
};

namespace curves {

namespace detail {

template <std::floating_point Real>
Real angle_slack()
{
    return 64 * std::numeric_limits<Real>::epsilon();
}

template <std::floating_point Real>
void require_range(Real t, Real lo, Real hi, const char* what)
{
    const Real slack = angle_slack<Real>() * (1 + std::abs(lo) + std::abs(hi));
    if (!(t >= lo - slack && t <= hi + slack)) {
        throw std::domain_error(std::string(what) + ": angle " + std::to_string(double(t)) +
                                " outside [" + std::to_string(double(lo)) + ", " +
                                std::to_string(double(hi)) + "]");
    }
}

// I(x) = int_x^0 sin^2 u / sqrt(sin^2 u + c^2) du for x in [-pi, 0], with
// c = k'/k. Written as (1/k)[(F-E)(phi) - (K-E)] - k (F(phi) - K), phi = x + pi/2,
// and F - E taken from R_D directly.
template <std::floating_point Real>
Real reduced_integral(Real x, Real k)
{
    const Real phi = x + std::numbers::pi_v<Real> / 2;
    const Real K = elliptic::complete_K(k);
    const Real kme = elliptic::complete_K_minus_E(k);
    const Real fme = elliptic::F_minus_E(phi, k);
    const Real f = elliptic::F(phi, k);
    return (fme - kme) / k - k * (f - K);
}

} // namespace detail

// Antiderivative P(t) = int_0^t sin^2 u / sqrt(sin^2 u + c^2) du, t in [-pi, pi].
template <std::floating_point Real>
Real nodoid_antiderivative(Real t, Real k)
{
    if (t == 0) return 0;
    return std::copysign(detail::reduced_integral(-std::abs(t), k), t);
}

// Positive root of r^2 - mu sin(t) r - a^2 = 0, i.e. the nodoid radius.
template <std::floating_point Real>
Real nodoid_radius(Real t, Real a, Real mu)
{
    const Real ms = mu * std::sin(t);
    const Real root = std::sqrt(ms * ms + 4 * a * a);
    if (ms < 0) return 2 * a * a / (root - ms);
    return (ms + root) / 2;
}

// dr/dt for the nodoid.
template <std::floating_point Real>
Real nodoid_radius_derivative(Real t, Real a, Real mu)
{
    const Real ms = mu * std::sin(t);
    const Real r = nodoid_radius(t, a, mu);
    return r * mu * std::cos(t) / std::sqrt(ms * ms + 4 * a * a);
}

// |d(r, z)/dt| for the nodoid.
template <std::floating_point Real>
Real nodoid_speed(Real t, Real a, Real mu)
{
    const Real ms = mu * std::sin(t);
    return nodoid_radius(t, a, mu) * std::abs(mu) / std::sqrt(ms * ms + 4 * a * a);
}

// dz/dt for the nodoid: -(mu/2) (w(t) - sin t).
template <std::floating_point Real>
Real nodoid_height_derivative(Real t, Real a, Real mu)
{
    const Real s = std::sin(t);
    const Real am = std::abs(mu);
    const Real root = std::sqrt(mu * mu * s * s + 4 * a * a);
    Real w_minus_s;
    if (s > 0) {
        w_minus_s = -s * 4 * a * a / (root * (am * s + root));
    } else {
        w_minus_s = am * s * s / root - s;
    }
    return -mu / 2 * w_minus_s;
}

// z(t) = z0 - (mu/2) (P(t) - P(t0) + cos t - cos t0)
template <std::floating_point Real>
Real nodoid_height(Real t, Real t0, Real z0, Real k, Real mu)
{
    const Real dp = nodoid_antiderivative(t, k) - nodoid_antiderivative(t0, k);
    const Real dcos = -2 * std::sin((t + t0) / 2) * std::sin((t - t0) / 2);
    return z0 - mu / 2 * (dp + dcos);
}

template <std::floating_point Real>
Real nodoid_height_quadrature(Real t, Real t0, Real z0, Real a, Real mu,
                              const quadrature::Options<Real>& opt = {})
{
    auto f = [&](Real x) { return nodoid_height_derivative(x, a, mu); };
    if (t0 < 0 && t > 0) {
        return z0 + quadrature::integrate_checked(f, t0, Real(0), opt) +
               quadrature::integrate_checked(f, Real(0), t, opt);
    }
    return z0 + quadrature::integrate_checked(f, t0, t, opt);
}

// ---- Gamma_1 -------------------------------------------------------------

template <std::floating_point Real>
Real gamma1_upper_angle(const DerivedParams<Real>& dp)
{
    return dp.theta_c ? *dp.theta_c : std::numbers::pi_v<Real>;
}

template <std::floating_point Real>
Real r1(Real t, const DerivedParams<Real>& dp)
{
    return nodoid_radius(t, dp.a_ell, dp.mu);
}

// z_1 on [theta1_bar, pi], closed form.
template <std::floating_point Real>
Real z1(Real t, const DerivedParams<Real>& dp)
{
    dp.require_ok();
    detail::require_range(t, dp.theta1_bar, std::numbers::pi_v<Real>, "z1");
    return nodoid_height(t, dp.theta1_bar, dp.z_bar, dp.k, dp.mu);
}

// z_1 for t in (0, pi] via F, E, K and E(k).
template <std::floating_point Real>
Real z1_legendre(Real t, const DerivedParams<Real>& dp)
{
    if (!(t > 0)) throw std::domain_error("z1_legendre: requires theta in (0, pi]");
    return z1(t, dp);
}

template <std::floating_point Real>
Real z1_quadrature(Real t, const DerivedParams<Real>& dp, const quadrature::Options<Real>& opt = {})
{
    dp.require_ok();
    detail::require_range(t, dp.theta1_bar, std::numbers::pi_v<Real>, "z1_quadrature");
    return nodoid_height_quadrature(t, dp.theta1_bar, dp.z_bar, dp.a_ell, dp.mu, opt);
}

template <std::floating_point Real>
Point<Real> gamma1_point(Real t, const DerivedParams<Real>& dp)
{
    dp.require_ok();
    detail::require_range(t, dp.theta1_bar, gamma1_upper_angle(dp), "gamma1_point");
    return {r1(t, dp), z1(t, dp)};
}

// ---- Gamma_2 -------------------------------------------------------------

template <std::floating_point Real>
Real r2(Real t, const DerivedParams<Real>& dp)
{
    return nodoid_radius(t, Real(1), dp.mu);
}

template <std::floating_point Real>
Real z2(Real t, const DerivedParams<Real>& dp)
{
    dp.require_ok();
    detail::require_range(t, Real(0), dp.theta2_bar, "z2");
    return nodoid_height(t, dp.theta2_bar, dp.z_bar, dp.k2, dp.mu);
}

template <std::floating_point Real>
Real z2_quadrature(Real t, const DerivedParams<Real>& dp, const quadrature::Options<Real>& opt = {})
{
    dp.require_ok();
    detail::require_range(t, Real(0), dp.theta2_bar, "z2_quadrature");
    return nodoid_height_quadrature(t, dp.theta2_bar, dp.z_bar, Real(1), dp.mu, opt);
}

template <std::floating_point Real>
Point<Real> gamma2_point(Real t, const DerivedParams<Real>& dp)
{
    dp.require_ok();
    detail::require_range(t, Real(0), dp.theta2_bar, "gamma2_point");
    return {r2(t, dp), z2(t, dp)};
}

// ---- Gamma_3 -------------------------------------------------------------

template <std::floating_point Real>
Point<Real> catenoid_point(Real t, Real A)
{
    const Real s = std::sin(t), c = std::cos(t);
    return {A / s, A * std::asinh(c / s)};
}

template <std::floating_point Real>
Point<Real> gamma3_point(Real t, const DerivedParams<Real>& dp)
{
    detail::require_range(t, dp.theta3_bar, std::numbers::pi_v<Real> / 2, "gamma3_point");
    return catenoid_point(t, dp.A);
}

// Height of the catenoid over radius r >= A.
template <std::floating_point Real>
Real catenoid_height_at(Real r, Real A)
{
    return A * std::acosh(r / A);
}

} // namespace curves

// Full derived-parameter record, including z2_star.
template <std::floating_point Real>
DerivedParams<Real> derive_parameters(const FreeParams<Real>& fp, Real beta)
{
    auto d = derive_algebraic(fp, beta);
    if (d.ok()) d.z2_star = curves::z2(Real(0), d);
    return d;
}

template <std::floating_point Real>
DerivedParams<Real> derive_parameters(const FreeParams<Real>& fp, const PhysicalAngles<Real>& pa)
{
    return derive_parameters(fp, pa.beta);
}

} // namespace grainsteady
