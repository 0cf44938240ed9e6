#pragma once

// Sampled meridian profiles and the discrete operators applied to them:
// mean curvature, arc length, polyline intersection.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "curves.hpp"
#include "params.hpp"

namespace grainsteady {

template <std::floating_point Real>
struct Polyline {
    std::vector<Real> theta;          // tangent angle at each sample
    std::vector<Point<Real>> points;  // in curve-parameter order

    std::size_t size() const { return points.size(); }
};

template <std::floating_point Real>
struct Profile {
    DerivedParams<Real> params;
    Real theta_c = 0;
    // Gamma_1 runs from the substrate contact up to the junction, Gamma_2
    // from the junction out to the cell wall, Gamma_3 from the substrate
    // (neck) up to the junction. With this orientation the discrete mean
    // curvature is lambda, lambda, 0.
    Polyline<Real> gamma1, gamma2, gamma3;

    Point<Real> junction() const { return {params.r_bar, params.z_bar}; }
    Point<Real> substrate_contact() const { return gamma1.points.front(); }
    Point<Real> wall_contact() const { return gamma2.points.back(); }
    Point<Real> neck() const { return gamma3.points.front(); }
};

constexpr std::size_t min_samples_per_curve = 16;

namespace detail {

template <std::floating_point Real, class Fn>
Polyline<Real> sample_curve(Real t_start, Real t_end, std::size_t n, Fn&& point)
{
    Polyline<Real> p;
    p.theta.resize(n);
    p.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Real t;
        if (i == 0) {
            t = t_start;
        } else if (i + 1 == n) {
            t = t_end;
        } else {
            t = t_start + (t_end - t_start) * Real(i) / Real(n - 1);
        }
        p.theta[i] = t;
        p.points[i] = point(t);
    }
    return p;
}

} // namespace detail

template <std::floating_point Real>
Profile<Real> sample_profile(DerivedParams<Real> dp, Real theta_c, std::size_t n)
{
    if (n < min_samples_per_curve) throw std::invalid_argument("sample_profile: need at least 16 samples per curve");
    dp.require_ok();
    dp.theta_c = theta_c;
    dp.r1_star = curves::r1(theta_c, dp);

    Profile<Real> p;
    p.params = dp;
    p.theta_c = theta_c;
    p.gamma1 = detail::sample_curve(theta_c, dp.theta1_bar, n, [&](Real t) {
        return Point<Real>{curves::r1(t, dp), curves::z1(t, dp)};
    });
    p.gamma2 = detail::sample_curve(dp.theta2_bar, Real(0), n, [&](Real t) {
        return Point<Real>{curves::r2(t, dp), curves::z2(t, dp)};
    });
    p.gamma3 = detail::sample_curve(std::numbers::pi_v<Real> / 2, dp.theta3_bar, n,
                                    [&](Real t) { return curves::catenoid_point(t, dp.A); });
    p.gamma3.points.front() = {dp.A, 0};
    return p;
}

// Polyline length, Richardson-extrapolated from the full and the every-other
// point polylines. Exact to O(h^4) for smooth uniformly parametrized curves.
template <std::floating_point Real>
Real arc_length(const Polyline<Real>& p)
{
    const auto& pts = p.points;
    if (pts.size() < 2) return 0;
    auto seg = [&](std::size_t i, std::size_t j) {
        return std::hypot(pts[j].r - pts[i].r, pts[j].z - pts[i].z);
    };
    if (pts.size() < 3) return seg(0, 1);
    const std::size_t last = (pts.size() - 1) % 2 == 0 ? pts.size() - 1 : pts.size() - 2;
    Real fine = 0, coarse = 0;
    for (std::size_t i = 0; i < last; ++i) fine += seg(i, i + 1);
    for (std::size_t i = 0; i < last; i += 2) coarse += seg(i, i + 2);
    Real total = (4 * fine - coarse) / 3;
    if (last + 1 < pts.size()) total += seg(last, last + 1);
    return total;
}

template <std::floating_point Real>
Real raw_polyline_length(const Polyline<Real>& p)
{
    Real total = 0;
    for (std::size_t i = 1; i < p.points.size(); ++i) {
        total += std::hypot(p.points[i].r - p.points[i - 1].r, p.points[i].z - p.points[i - 1].z);
    }
    return total;
}

struct CurvatureOptions {
    // Stride override for the finite differences; 0 picks one from the
    // sampling density and the precision of Real.
    std::size_t stride = 0;
};

// Discrete mean curvature
//   H = (r' z'' - z' r'') / (2 |g'|^3) + z' / (2 r |g'|)
// with fourth-order central differences in the sample index. Returns
// max |H - expected_H| over interior samples.
//
// Second differences lose about eps / h^2 to rounding, so the stride is set
// from eps^(1/6) times a feature length: the smaller of the smallest radius
// and the largest radius of curvature seen on a 64-chord coarsening. It is
// then capped so at least one interior point remains.
template <std::floating_point Real>
Real curvature_residual(const Polyline<Real>& p, Real expected_H, CurvatureOptions opt = {})
{
    const auto& pts = p.points;
    const std::size_t n = pts.size();
    if (n < min_samples_per_curve) throw std::invalid_argument("curvature_residual: need at least 16 samples");

    std::size_t m = opt.stride;
    if (m == 0) {
        const Real len = raw_polyline_length(p);
        Real feature = std::numeric_limits<Real>::infinity();
        for (const auto& q : pts) feature = std::min(feature, q.r);
        const std::size_t c = std::max<std::size_t>(1, (n - 1) / 64);
        for (std::size_t i = c; i + c < n; i += c) {
            const Real ar = pts[i].r - pts[i - c].r, az = pts[i].z - pts[i - c].z;
            const Real br = pts[i + c].r - pts[i].r, bz = pts[i + c].z - pts[i].z;
            const Real turn = std::abs(std::atan2(ar * bz - az * br, ar * br + az * bz));
            const Real ds = (std::hypot(ar, az) + std::hypot(br, bz)) / 2;
            if (turn > 0) feature = std::min(feature, ds / turn);
        }
        const Real h_target = std::pow(std::numeric_limits<Real>::epsilon(), Real(1) / 6) * feature;
        const Real h = len / Real(n - 1);
        m = h > 0 ? static_cast<std::size_t>(std::lround(double(h_target / h))) : 1;
    }
    m = std::clamp<std::size_t>(m, 1, (n - 1) / 4);

    Real worst = 0;
    const Real mm = Real(m);
    for (std::size_t i = 2 * m; i + 2 * m < n; ++i) {
        const auto& a = pts[i - 2 * m];
        const auto& b = pts[i - m];
        const auto& c = pts[i];
        const auto& d = pts[i + m];
        const auto& e = pts[i + 2 * m];
        const Real r1 = (a.r - 8 * b.r + 8 * d.r - e.r) / (12 * mm);
        const Real z1 = (a.z - 8 * b.z + 8 * d.z - e.z) / (12 * mm);
        const Real r2 = (-a.r + 16 * b.r - 30 * c.r + 16 * d.r - e.r) / (12 * mm * mm);
        const Real z2 = (-a.z + 16 * b.z - 30 * c.z + 16 * d.z - e.z) / (12 * mm * mm);
        const Real speed = std::hypot(r1, z1);
        const Real H = (r1 * z2 - z1 * r2) / (2 * speed * speed * speed) + z1 / (2 * c.r * speed);
        worst = std::max(worst, std::abs(H - expected_H));
    }
    return worst;
}

// Proper intersection of segments pq and uv (shared endpoints excluded by
// the caller).
template <std::floating_point Real>
bool segments_intersect(Point<Real> p, Point<Real> q, Point<Real> u, Point<Real> v)
{
    auto cross = [](Point<Real> o, Point<Real> a, Point<Real> b) {
        return (a.r - o.r) * (b.z - o.z) - (a.z - o.z) * (b.r - o.r);
    };
    const Real d1 = cross(u, v, p), d2 = cross(u, v, q);
    const Real d3 = cross(p, q, u), d4 = cross(p, q, v);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

} // namespace grainsteady
