#pragma once

// Random parameter sets shared by the unit and acceptance tests.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "grainsteady/constraints.hpp"
#include "grainsteady/params.hpp"
#include "grainsteady/solvers.hpp"

namespace testsupport {

using namespace grainsteady;

// Uniform over Omega_0 x (pi/2, pi), kept when derive_parameters succeeds.
inline std::vector<DerivedParams<double>> random_valid_states(int n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0, 1);
    std::vector<DerivedParams<double>> out;
    while (int(out.size()) < n) {
        const double A = U(rng);
        const double sigma = U(rng) * std::sqrt(1 - A * A);
        const double beta = std::numbers::pi / 2 + U(rng) * std::numbers::pi / 2;
        auto d = derive_parameters(FreeParams<double>{A, sigma}, beta);
        if (d.ok()) out.push_back(d);
    }
    return out;
}

struct Admissible {
    double A, sigma, beta, theta_c;
};

// Valid states whose implied contact angle passes the full
// necessary-and-sufficient report.
inline std::vector<Admissible> random_admissible(int n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0, 1);
    std::vector<Admissible> out;
    while (int(out.size()) < n) {
        const double A = U(rng);
        const double sigma = U(rng) * std::sqrt(1 - A * A);
        const double beta = std::numbers::pi / 2 + U(rng) * std::numbers::pi / 2;
        const FreeParams<double> fp{A, sigma};
        const auto tc = theta_c_of(fp, beta);
        if (!tc) continue;
        const auto rep = check_constraints(fp, PhysicalAngles<double>{beta, *tc}, ConstraintMode::necessary_and_sufficient);
        if (rep.all_satisfied()) out.push_back({A, sigma, beta, *tc});
    }
    return out;
}

} // namespace testsupport
