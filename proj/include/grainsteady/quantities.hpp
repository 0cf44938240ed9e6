#pragma once

// Effective energy and enclosed volume of a steady state, by adaptive
// quadrature in the tangent-angle variables.
//
//   E_eff = 2 ( int_{t1b}^{tc} r1 |g1'| + int_0^{t2b} r2 |g2'| ) + cos(tc) r1(tc)^2
//           + 2 m int_{t3b}^{pi/2} r3 |g3'|
//   V     = 2 pi ( int_{tc}^{t1b} z1 r1 r1' + int_{t2b}^{0} z2 r2 r2' )

#include <cmath>
#include <concepts>
#include <numbers>

#include "curves.hpp"
#include "params.hpp"
#include "quadrature.hpp"

namespace grainsteady {

template <std::floating_point Real>
struct QuantityOptions {
    quadrature::Options<Real> quad{Real(1e-13), Real(0), 4000, 4};
};

template <std::floating_point Real>
struct SteadyDiagnostics {
    Real E_eff = 0;
    Real V = 0;
    Real r1_star = 0;
    Real z2_star = 0;
    Real arclen_gamma3 = 0;
};

namespace detail {

// Integrate over [a, b] split at 0 when it lies inside; z1 and the stable
// integrand forms switch branch there.
template <std::floating_point Real, class F>
Real integrate_split(F&& f, Real a, Real b, const quadrature::Options<Real>& opt)
{
    const Real lo = std::min(a, b), hi = std::max(a, b);
    Real v;
    if (lo < 0 && hi > 0) {
        v = quadrature::integrate_checked(f, lo, Real(0), opt) + quadrature::integrate_checked(f, Real(0), hi, opt);
    } else {
        v = quadrature::integrate_checked(f, lo, hi, opt);
    }
    return a <= b ? v : -v;
}

} // namespace detail

template <std::floating_point Real>
Real effective_energy(const DerivedParams<Real>& dp, const PhysicalAngles<Real>& pa, const QuantityOptions<Real>& opt = {})
{
    dp.require_ok();
    const Real tc = pa.theta_c;
    const Real a = dp.a_ell, mu = dp.mu;
    auto e1 = [&](Real t) { return curves::nodoid_radius(t, a, mu) * curves::nodoid_speed(t, a, mu); };
    auto e2 = [&](Real t) { return curves::nodoid_radius(t, Real(1), mu) * curves::nodoid_speed(t, Real(1), mu); };
    auto e3 = [&](Real t) {
        const Real s = std::sin(t);
        return dp.A * dp.A / (s * s * s);
    };
    const Real I1 = detail::integrate_split(e1, dp.theta1_bar, tc, opt.quad);
    const Real I2 = detail::integrate_split(e2, Real(0), dp.theta2_bar, opt.quad);
    const Real I3 = detail::integrate_split(e3, dp.theta3_bar, std::numbers::pi_v<Real> / 2, opt.quad);
    const Real r1s = curves::r1(tc, dp);
    return 2 * (I1 + I2) + std::cos(tc) * r1s * r1s + 2 * pa.m() * I3;
}

template <std::floating_point Real>
Real total_volume(const DerivedParams<Real>& dp, const PhysicalAngles<Real>& pa, const QuantityOptions<Real>& opt = {})
{
    dp.require_ok();
    const Real a = dp.a_ell, mu = dp.mu;
    auto v1 = [&](Real t) {
        return curves::z1(t, dp) * curves::nodoid_radius(t, a, mu) * curves::nodoid_radius_derivative(t, a, mu);
    };
    auto v2 = [&](Real t) {
        return curves::z2(t, dp) * curves::nodoid_radius(t, Real(1), mu) *
               curves::nodoid_radius_derivative(t, Real(1), mu);
    };
    const Real J1 = detail::integrate_split(v1, pa.theta_c, dp.theta1_bar, opt.quad);
    const Real J2 = detail::integrate_split(v2, dp.theta2_bar, Real(0), opt.quad);
    return 2 * std::numbers::pi_v<Real> * (J1 + J2);
}

template <std::floating_point Real>
Real gamma3_arc_length(const DerivedParams<Real>& dp, const QuantityOptions<Real>& opt = {})
{
    auto ds = [&](Real t) {
        const Real s = std::sin(t);
        return dp.A / (s * s);
    };
    return detail::integrate_split(ds, dp.theta3_bar, std::numbers::pi_v<Real> / 2, opt.quad);
}

template <std::floating_point Real>
SteadyDiagnostics<Real> steady_diagnostics(const DerivedParams<Real>& dp, const PhysicalAngles<Real>& pa,
                                           const QuantityOptions<Real>& opt = {})
{
    SteadyDiagnostics<Real> d;
    d.E_eff = effective_energy(dp, pa, opt);
    d.V = total_volume(dp, pa, opt);
    d.r1_star = curves::r1(pa.theta_c, dp);
    d.z2_star = dp.z2_star;
    d.arclen_gamma3 = gamma3_arc_length(dp, opt);
    return d;
}

} // namespace grainsteady
