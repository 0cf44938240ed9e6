#pragma once

// Legendre elliptic integrals of the first and second kind, computed from
// Carlson's symmetric forms R_F and R_D by duplication.
//
//   F(phi, k) = int_0^phi du / sqrt(1 - k^2 sin^2 u)
//   E(phi, k) = int_0^phi sqrt(1 - k^2 sin^2 u) du
//
// Everything is templated on the floating point type so the same code runs
// in double and long double.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace grainsteady::elliptic {

namespace detail {

template <std::floating_point Real>
void require_modulus(Real k)
{
    if (!(k >= Real(0) && k < Real(1))) {
        throw std::domain_error("elliptic: modulus must lie in [0, 1), got " + std::to_string(double(k)));
    }
}

// |phi| may exceed pi/2 by a few ulps when phi is assembled from other angles.
template <std::floating_point Real>
Real clamp_amplitude(Real phi)
{
    const Real half_pi = std::numbers::pi_v<Real> / 2;
    const Real slack = 8 * std::numeric_limits<Real>::epsilon() * half_pi;
    if (!(std::abs(phi) <= half_pi + slack)) {
        throw std::domain_error("elliptic: amplitude outside [-pi/2, pi/2]: " + std::to_string(double(phi)));
    }
    if (phi > half_pi) return half_pi;
    if (phi < -half_pi) return -half_pi;
    return phi;
}

} // namespace detail

// Carlson R_F(x, y, z), x, y, z >= 0 with at most one zero.
template <std::floating_point Real>
Real carlson_rf(Real x, Real y, Real z)
{
    const Real eps = std::numeric_limits<Real>::epsilon();
    Real a0 = (x + y + z) / 3;
    Real q = std::pow(3 * eps, Real(-1) / 6) *
             std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
    Real a = a0;
    Real x0 = x, y0 = y;
    Real pow4 = 1;
    for (int it = 0; it < 200 && q * pow4 >= std::abs(a); ++it) {
        const Real sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const Real lam = sx * sy + sy * sz + sz * sx;
        x = (x + lam) / 4;
        y = (y + lam) / 4;
        z = (z + lam) / 4;
        a = (a + lam) / 4;
        pow4 /= 4;
    }
    const Real X = (a0 - x0) * pow4 / a;
    const Real Y = (a0 - y0) * pow4 / a;
    const Real Z = -(X + Y);
    const Real e2 = X * Y - Z * Z;
    const Real e3 = X * Y * Z;
    return (1 - e2 / 10 + e3 / 14 + e2 * e2 / 24 - 3 * e2 * e3 / 44) / std::sqrt(a);
}

// Carlson R_D(x, y, z) = R_J(x, y, z, z).
template <std::floating_point Real>
Real carlson_rd(Real x, Real y, Real z)
{
    const Real eps = std::numeric_limits<Real>::epsilon();
    Real a0 = (x + y + 3 * z) / 5;
    Real q = std::pow(eps / 4, Real(-1) / 6) *
             std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
    Real a = a0;
    Real x0 = x, y0 = y;
    Real pow4 = 1;
    Real sum = 0;
    for (int it = 0; it < 200 && q * pow4 >= std::abs(a); ++it) {
        const Real sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const Real lam = sx * sy + sy * sz + sz * sx;
        sum += pow4 / (sz * (z + lam));
        x = (x + lam) / 4;
        y = (y + lam) / 4;
        z = (z + lam) / 4;
        a = (a + lam) / 4;
        pow4 /= 4;
    }
    const Real X = (a0 - x0) * pow4 / a;
    const Real Y = (a0 - y0) * pow4 / a;
    const Real Z = -(X + Y) / 3;
    const Real xy = X * Y, z2 = Z * Z;
    const Real e2 = xy - 6 * z2;
    const Real e3 = (3 * xy - 8 * z2) * Z;
    const Real e4 = 3 * (xy - z2) * z2;
    const Real e5 = xy * z2 * Z;
    const Real series = 1 - 3 * e2 / 14 + e3 / 6 + 9 * e2 * e2 / 88 - 3 * e4 / 22 -
                        9 * e2 * e3 / 52 + 3 * e5 / 26;
    return pow4 * series / (a * std::sqrt(a)) + 3 * sum;
}

// Pieces shared by F, E and their differences at one (phi, k).
template <std::floating_point Real>
struct AmplitudeTerms {
    Real s;      // sin phi
    Real c;      // cos phi
    Real delta;  // sqrt(1 - k^2 sin^2 phi)
    Real rf;     // R_F(c^2, delta^2, 1)
    Real rd;     // R_D(c^2, delta^2, 1)
};

template <std::floating_point Real>
AmplitudeTerms<Real> amplitude_terms(Real phi, Real k)
{
    detail::require_modulus(k);
    phi = detail::clamp_amplitude(phi);
    AmplitudeTerms<Real> t{};
    t.s = std::sin(phi);
    t.c = std::cos(phi);
    if (std::abs(phi) == std::numbers::pi_v<Real> / 2) t.c = 0;
    const Real d2 = (1 - k * t.s) * (1 + k * t.s);
    t.delta = std::sqrt(d2);
    t.rf = carlson_rf(t.c * t.c, d2, Real(1));
    t.rd = carlson_rd(t.c * t.c, d2, Real(1));
    return t;
}

template <std::floating_point Real>
Real complete_K(Real k)
{
    detail::require_modulus(k);
    return carlson_rf(Real(0), (1 - k) * (1 + k), Real(1));
}

template <std::floating_point Real>
Real complete_E(Real k)
{
    detail::require_modulus(k);
    const Real kp2 = (1 - k) * (1 + k);
    return carlson_rf(Real(0), kp2, Real(1)) - k * k / 3 * carlson_rd(Real(0), kp2, Real(1));
}

// K(k) - E(k) without subtracting two O(1) numbers.
template <std::floating_point Real>
Real complete_K_minus_E(Real k)
{
    detail::require_modulus(k);
    return k * k / 3 * carlson_rd(Real(0), (1 - k) * (1 + k), Real(1));
}

template <std::floating_point Real>
Real F(Real phi, Real k)
{
    detail::require_modulus(k);
    phi = detail::clamp_amplitude(phi);
    if (std::abs(phi) == std::numbers::pi_v<Real> / 2) return std::copysign(complete_K(k), phi);
    const auto t = amplitude_terms(phi, k);
    return t.s * t.rf;
}

template <std::floating_point Real>
Real E(Real phi, Real k)
{
    detail::require_modulus(k);
    phi = detail::clamp_amplitude(phi);
    if (std::abs(phi) == std::numbers::pi_v<Real> / 2) return std::copysign(complete_E(k), phi);
    const auto t = amplitude_terms(phi, k);
    return t.s * t.rf - k * k / 3 * t.s * t.s * t.s * t.rd;
}

// F(phi, k) - E(phi, k), accurate for small k.
template <std::floating_point Real>
Real F_minus_E(Real phi, Real k)
{
    detail::require_modulus(k);
    phi = detail::clamp_amplitude(phi);
    if (std::abs(phi) == std::numbers::pi_v<Real> / 2) return std::copysign(complete_K_minus_E(k), phi);
    const auto t = amplitude_terms(phi, k);
    return k * k / 3 * t.s * t.s * t.s * t.rd;
}

template <std::floating_point Real>
struct SeriesPair {
    Real F;
    Real E;
};

// Leading small-modulus expansion, error O(k^4).
template <std::floating_point Real>
SeriesPair<Real> series_small_k(Real phi, Real k)
{
    const Real d = (phi - std::sin(phi) * std::cos(phi)) * k * k / 4;
    return {phi + d, phi - d};
}

template <std::floating_point Real>
struct Derivatives {
    Real dF_dphi;
    Real dE_dphi;
    Real dF_dk;
    Real dE_dk;
    Real dK_dk;
    Real dEc_dk;
};

// Partial derivatives in phi and k. The k-derivatives are written through
// R_D so they stay finite and accurate as k -> 0 (all tend to 0 there).
template <std::floating_point Real>
Derivatives<Real> derivatives(Real phi, Real k)
{
    detail::require_modulus(k);
    const auto t = amplitude_terms(phi, k);
    const Real kp2 = (1 - k) * (1 + k);
    const Real Fv = std::abs(phi) >= std::numbers::pi_v<Real> / 2 ? std::copysign(complete_K(k), phi)
                                                                  : t.s * t.rf;
    const Real s3rd = t.s * t.s * t.s * t.rd;
    const Real rd0 = carlson_rd(Real(0), kp2, Real(1));
    const Real K = complete_K(k);

    Derivatives<Real> d{};
    d.dF_dphi = 1 / t.delta;
    d.dE_dphi = t.delta;
    d.dF_dk = k * (Fv - s3rd / 3) / kp2 - k * t.s * t.c / (kp2 * t.delta);
    d.dE_dk = -k / 3 * s3rd;
    d.dK_dk = k * (K - rd0 / 3) / kp2;
    d.dEc_dk = -k / 3 * rd0;
    return d;
}

} // namespace grainsteady::elliptic
