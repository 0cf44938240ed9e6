#pragma once

// G(A, sigma; beta) = -2 lambda k z1(pi). Its zero set in Omega_0 is the
// theta_c = pi branch, and sign(G) = sign(z1(pi)) because lambda k < 0.

#include <cmath>
#include <concepts>
#include <numbers>

#include "curves.hpp"
#include "elliptic.hpp"
#include "params.hpp"

namespace grainsteady {

template <std::floating_point Real>
Real G_value(const DerivedParams<Real>& dp)
{
    dp.require_ok();
    return -2 * dp.lambda_k * curves::z1(std::numbers::pi_v<Real>, dp);
}

template <std::floating_point Real>
Real G_value(const FreeParams<Real>& fp, Real beta)
{
    return G_value(derive_parameters(fp, beta));
}

template <std::floating_point Real>
struct GGradient {
    Real dA = 0;
    Real dsigma = 0;
};

// Analytic gradient. With phi = theta1_bar + pi/2 and
// Delta = sqrt(1 - k^2 sin^2 phi),
//   G_x = -(k^2 cos^2 phi / Delta) phi_x - k (F(phi) + sin phi cos phi / Delta - 3K) k_x
//         - 2 (lambda k)_x z_bar - 2 lambda k z_bar_x - k_x (1 + cos theta1_bar)
//         + k sin(theta1_bar) theta1_bar_x.
// lambda, k and lambda k are differentiated through mu = 1/lambda and
// q = mu^2 + 4 - 8 A cos(beta) mu, where k = -mu / sqrt(q), lambda k = -1 / sqrt(q).
template <std::floating_point Real>
GGradient<Real> G_gradient(const DerivedParams<Real>& dp)
{
    dp.require_ok();
    const Real A = dp.A, sigma = dp.sigma;
    const Real c = std::cos(dp.beta), s = std::sin(dp.beta);
    const Real num = A * c + sigma * s;
    const Real den = (1 - A) * (1 + A) - sigma * sigma;
    const Real mu = dp.mu, k = dp.k;
    const Real q = mu * mu + 4 - 8 * A * c * mu;
    const Real sq = std::sqrt(q);
    const Real r2 = A * A + sigma * sigma;

    const Real phi = dp.theta1_bar + std::numbers::pi_v<Real> / 2;
    const Real sp = std::sin(phi), cp = std::cos(phi);
    const Real delta = std::sqrt((1 - k * sp) * (1 + k * sp));
    const Real Fphi = elliptic::F(phi, k);
    const Real K = elliptic::complete_K(k);

    auto partial = [&](Real dA_dx, Real dnum, Real dden, Real dtheta1, Real dzbar) {
        const Real dmu = (dden * num - den * dnum) / (num * num);
        const Real dq = 2 * mu * dmu - 8 * c * (dA_dx * mu + A * dmu);
        const Real dk = -dmu / sq + mu * dq / (2 * q * sq);
        const Real dlk = dq / (2 * q * sq);
        return -(k * k * cp * cp / delta) * dtheta1 - k * (Fphi + sp * cp / delta - 3 * K) * dk -
               2 * dlk * dp.z_bar - 2 * dp.lambda_k * dzbar - dk * (1 + std::cos(dp.theta1_bar)) +
               k * std::sin(dp.theta1_bar) * dtheta1;
    };

    GGradient<Real> g;
    g.dA = partial(Real(1), c, -2 * A, sigma / r2, std::asinh(sigma / A) - sigma / dp.r_bar);
    g.dsigma = partial(Real(0), s, -2 * sigma, -A / r2, A / dp.r_bar);
    return g;
}

template <std::floating_point Real>
GGradient<Real> G_gradient(const FreeParams<Real>& fp, Real beta)
{
    return G_gradient(derive_parameters(fp, beta));
}

} // namespace grainsteady
