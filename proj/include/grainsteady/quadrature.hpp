#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature with an absolute and a
// relative tolerance and a hard cap on the number of subintervals. The rule
// constants come from Boost.Math; the subdivision loop is ours so the
// stopping test can be absolute.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "errors.hpp"

namespace grainsteady::quadrature {

template <std::floating_point Real>
struct Options {
    Real abs_tol = Real(1e-12);
    Real rel_tol = Real(0);
    int max_subdivisions = 2000;
    // Number of equal panels the interval is split into before adapting.
    int initial_panels = 1;
};

template <std::floating_point Real>
struct Result {
    Real value = 0;
    Real error = 0;
    int intervals = 0;
    bool converged = false;
};

namespace detail {

template <std::floating_point Real>
struct Panel {
    Real a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <std::floating_point Real, class F>
Panel<Real> gk15(F& f, Real a, Real b)
{
    using kronrod = boost::math::quadrature::gauss_kronrod<Real, 15>;
    using gauss = boost::math::quadrature::gauss<Real, 7>;
    const auto& xk = kronrod::abscissa();
    const auto& wk = kronrod::weights();
    const auto& wg = gauss::weights();

    const Real c = (a + b) / 2;
    const Real h = (b - a) / 2;
    const Real fc = f(c);
    Real sk = wk[0] * fc;
    Real sg = wg[0] * fc;
    // Boost stores abscissae for the non-negative half; odd indices are the
    // Gauss nodes.
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const Real fx = f(c - h * xk[i]) + f(c + h * xk[i]);
        sk += wk[i] * fx;
        if (i % 2 == 0) sg += wg[i / 2] * fx;
    }
    return {a, b, sk * h, std::abs((sk - sg) * h)};
}

} // namespace detail

template <std::floating_point Real, class F>
Result<Real> integrate(F&& f, Real a, Real b, const Options<Real>& opt = {})
{
    Result<Real> res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    const int panels = std::max(1, opt.initial_panels);
    std::vector<detail::Panel<Real>> heap;
    heap.reserve(panels + opt.max_subdivisions + 1);
    const Real width = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        const Real lo = a + width * i;
        const Real hi = (i + 1 == panels) ? b : a + width * (i + 1);
        heap.push_back(detail::gk15(f, lo, hi));
    }
    std::make_heap(heap.begin(), heap.end());

    auto totals = [&] {
        Real v = 0, e = 0;
        for (const auto& p : heap) {
            v += p.value;
            e += p.error;
        }
        return std::pair{v, e};
    };

    auto [value, error] = totals();
    int splits = 0;
    while (error > std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) {
        if (splits >= opt.max_subdivisions) break;
        std::pop_heap(heap.begin(), heap.end());
        const auto worst = heap.back();
        heap.pop_back();
        const Real mid = (worst.a + worst.b) / 2;
        if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b)) {
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end());
            break;
        }
        heap.push_back(detail::gk15(f, worst.a, mid));
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(detail::gk15(f, mid, worst.b));
        std::push_heap(heap.begin(), heap.end());
        ++splits;
        std::tie(value, error) = totals();
    }
    std::tie(value, error) = totals();
    res.value = value;
    res.error = error;
    res.intervals = static_cast<int>(heap.size());
    res.converged = error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
    return res;
}

// Same as integrate() but throws NumericalFailure instead of returning an
// unconverged estimate.
template <std::floating_point Real, class F>
Real integrate_checked(F&& f, Real a, Real b, const Options<Real>& opt = {})
{
    const auto r = integrate(std::forward<F>(f), a, b, opt);
    if (!r.converged || !std::isfinite(r.value)) {
        throw NumericalFailure("quadrature: no convergence on [" + std::to_string(double(a)) + ", " +
                               std::to_string(double(b)) + "], error estimate " +
                               std::to_string(double(r.error)));
    }
    return r.value;
}

} // namespace grainsteady::quadrature
