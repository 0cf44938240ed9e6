// grainsteady: audit, solve, trace and plot steady states.
//
//   grainsteady check   --beta B --A A --sigma S [--theta-c T]
//   grainsteady profile --m M --A A [--sigma S] [--theta-c T] [--format json|csv|svg]
//   grainsteady trace   --beta B --A-min a --A-max b [--theta-c T ...] [--steps n]
//   grainsteady asym    --beta B [--A-min a --A-max b --steps n]
//
// Exit codes: 0 success, 1 usage, 2 infeasible or constraint failure,
// 3 numerical failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grainsteady/asymptotics.hpp"
#include "grainsteady/constraints.hpp"
#include "grainsteady/errors.hpp"
#include "grainsteady/io.hpp"
#include "grainsteady/profile.hpp"
#include "grainsteady/quantities.hpp"
#include "grainsteady/solvers.hpp"

namespace {

using namespace grainsteady;
constexpr double pi = std::numbers::pi;

enum Exit { ok = 0, usage = 1, infeasible = 2, numerical = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::optional<double> beta, m, A, sigma, A_min, A_max;
    std::vector<double> theta_c;
    int steps = 0;
    double tol = 1e-11;
    int samples = 400;
    std::string format;
    std::string out;
    bool deg = false;
    bool sufficient = false;
};

double resolve_beta(const RunConfig& c)
{
    const double scale = c.deg ? pi / 180 : 1.0;
    if (!c.beta && !c.m) throw UsageError("one of --beta or --m is required");
    if (c.m && c.beta) {
        const double from_m = std::acos(-*c.m / 2);
        if (std::abs(from_m - *c.beta * scale) > 1e-9) {
            throw UsageError("--beta and --m disagree: arccos(-m/2) = " + io::fmt(from_m));
        }
    }
    if (c.beta) return *c.beta * scale;
    if (!(*c.m >= -2 && *c.m <= 2)) throw UsageError("--m must lie in [-2, 2]");
    return std::acos(-*c.m / 2);
}

std::optional<double> single_theta_c(const RunConfig& c)
{
    if (c.theta_c.empty()) return std::nullopt;
    if (c.theta_c.size() > 1) throw UsageError("only trace accepts several --theta-c values");
    return c.theta_c.front() * (c.deg ? pi / 180 : 1.0);
}

double require(const std::optional<double>& v, const char* flag)
{
    if (!v) throw UsageError(std::string(flag) + " is required");
    return *v;
}

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw UsageError("cannot open " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

std::string pick_format(const RunConfig& c, const char* fallback, std::initializer_list<const char*> allowed)
{
    const std::string f = c.format.empty() ? fallback : c.format;
    for (const char* a : allowed) {
        if (f == a) return f;
    }
    throw UsageError("format " + f + " is not available for this command");
}

bool angle_notes(double beta, std::optional<double> theta_c)
{
    bool feasible = true;
    if (!(beta > pi / 2 && beta < pi)) {
        std::cerr << "infeasible: beta must lie in (pi/2, pi); beta = pi/2 admits no steady state\n";
        feasible = false;
    }
    if (theta_c && !(*theta_c > 0 && *theta_c <= pi)) {
        std::cerr << "infeasible: theta_c must lie in (0, pi]; theta_c = 0 admits no steady state\n";
        feasible = false;
    }
    return feasible;
}

int cmd_check(const RunConfig& c)
{
    const double beta = resolve_beta(c);
    const double A = require(c.A, "--A"), sigma = require(c.sigma, "--sigma");
    auto tc = single_theta_c(c);
    std::cerr << "beta = " << io::fmt(beta) << "  m = " << io::fmt(-2 * std::cos(beta)) << "\n";
    const bool angles_ok = angle_notes(beta, tc);
    const FreeParams<double> fp{A, sigma};
    if (!tc) {
        const auto implied = angles_ok ? theta_c_of(fp, beta) : std::nullopt;
        if (implied) {
            std::cerr << "theta_c = " << io::fmt(*implied) << " (implied by A, sigma, beta)\n";
        } else {
            std::cerr << "no contact angle: z1(pi) > 0 or parameters invalid; checking theta_c = pi\n";
        }
        tc = implied.value_or(pi);
    }
    const auto mode = c.sufficient ? ConstraintMode::sufficient : ConstraintMode::necessary_and_sufficient;
    const auto rep = check_constraints(fp, PhysicalAngles<double>{beta, *tc}, mode);
    Output out(c.out);
    if (pick_format(c, "csv", {"csv", "json"}) == "csv") {
        io::write_report_csv(out.stream(), rep);
    } else {
        auto j = io::report_to_json(rep);
        j["A"] = A;
        j["sigma"] = sigma;
        j["beta"] = beta;
        j["m"] = -2 * std::cos(beta);
        j["theta_c"] = *tc;
        out.stream() << j.dump(2) << "\n";
    }
    return rep.all_satisfied() ? ok : infeasible;
}

int cmd_profile(const RunConfig& c)
{
    const double beta = resolve_beta(c);
    const double A = require(c.A, "--A");
    if (c.samples < int(min_samples_per_curve)) throw UsageError("--samples must be at least 16");
    auto tc = single_theta_c(c);
    if (!angle_notes(beta, tc)) return infeasible;

    double sigma;
    if (c.sigma) {
        sigma = *c.sigma;
        if (!tc) {
            tc = theta_c_of(FreeParams<double>{A, sigma}, beta);
            if (!tc) {
                std::cerr << "infeasible: no contact angle for these parameters\n";
                return infeasible;
            }
        }
    } else {
        if (!tc) tc = pi;
        SolveOptions opt;
        opt.residual_tol = c.tol;
        const auto r = solve_sigma(A, PhysicalAngles<double>{beta, *tc}, opt);
        if (r.status != SolveStatus::ok) {
            std::cerr << "solve_sigma: " << to_string(r.status) << "\n";
            return r.status == SolveStatus::iteration_limit ? numerical : infeasible;
        }
        sigma = r.sigma;
    }
    const PhysicalAngles<double> pa{beta, *tc};
    const FreeParams<double> fp{A, sigma};
    const auto rep = check_constraints(fp, pa, ConstraintMode::necessary_and_sufficient);
    if (!rep.all_satisfied()) {
        std::cerr << "constraints failed:";
        for (const auto& n : rep.failed()) std::cerr << " " << n;
        std::cerr << "\n";
        return infeasible;
    }

    // Curvature gate on a long double resampling.
    {
        using L = long double;
        const auto dl = derive_parameters(FreeParams<L>{L(A), L(sigma)}, L(beta));
        const auto pl = sample_profile(dl, L(*tc), std::max<std::size_t>(std::size_t(c.samples), 2000));
        const double h1 = double(curvature_residual(pl.gamma1, dl.lambda));
        const double h2 = double(curvature_residual(pl.gamma2, dl.lambda));
        const double h3 = double(curvature_residual(pl.gamma3, L(0)));
        if (!(h1 <= 1e-6 && h2 <= 1e-6 && h3 <= 1e-8)) {
            std::cerr << "curvature check failed: " << h1 << " " << h2 << " " << h3 << "\n";
            return numerical;
        }
    }

    const auto d = derive_parameters(fp, beta);
    const auto prof = sample_profile(d, *tc, std::size_t(c.samples));
    if (!(prof.substrate_contact().r < A)) {
        std::cerr << "infeasible: hole radius not below the neck radius\n";
        return infeasible;
    }
    const auto rec = io::profile_record(prof, steady_diagnostics(d, pa));
    Output out(c.out);
    const auto f = pick_format(c, "json", {"json", "csv", "svg"});
    if (f == "json") {
        out.stream() << io::profile_to_json(rec).dump(1) << "\n";
    } else if (f == "csv") {
        io::write_profile_csv(out.stream(), rec);
    } else {
        out.stream() << io::profile_svg(rec);
    }
    return ok;
}

int cmd_trace(const RunConfig& c)
{
    const double beta = resolve_beta(c);
    const double a = require(c.A_min, "--A-min"), b = require(c.A_max, "--A-max");
    if (!(a > 0 && b < 1 && a < b)) throw UsageError("need 0 < A-min < A-max < 1");
    const int steps = c.steps > 0 ? c.steps : 100;
    std::vector<double> tcs = c.theta_c;
    if (tcs.empty()) tcs.push_back(c.deg ? 180.0 : pi);
    for (double& t : tcs) t *= c.deg ? pi / 180 : 1.0;
    for (double t : tcs) {
        if (!angle_notes(beta, t)) return infeasible;
    }

    SolveOptions opt;
    opt.residual_tol = c.tol;
    opt.continuation_step = (b - a) / steps;
    std::vector<ASigmaCurve<double>> curves;
    bool gaps = false;
    for (double t : tcs) {
        curves.push_back(trace_branch(PhysicalAngles<double>{beta, t}, a, b, opt));
        if (!curves.back().complete()) {
            gaps = true;
            std::cerr << "theta_c = " << io::fmt(t) << ": " << curves.back().gaps.size() << " grid values without an admissible solution\n";
        }
    }
    const auto table = io::trace_table(curves);
    Output out(c.out);
    const auto f = pick_format(c, "csv", {"csv", "json", "svg"});
    if (f == "csv") {
        io::write_trace_csv(out.stream(), table);
    } else if (f == "json") {
        auto j = io::trace_to_json(table);
        j["beta"] = beta;
        j["residual_tol"] = c.tol;
        out.stream() << j.dump(1) << "\n";
    } else {
        out.stream() << io::trace_svg(table);
    }
    return gaps ? infeasible : ok;
}

int cmd_asym(const RunConfig& c)
{
    const double beta = resolve_beta(c);
    if (auto tc = single_theta_c(c); tc && *tc != pi) std::cerr << "note: asym always uses theta_c = pi\n";
    if (!angle_notes(beta, std::nullopt)) return infeasible;
    const double a = c.A_min.value_or(1 - 1e-4), b = c.A_max.value_or(1 - 1e-5);
    const int n = c.steps > 0 ? c.steps : 20;
    if (!(a < b) || n < 2) throw UsageError("need A-min < A-max and at least 2 grid points");
    const double eps = max_eps(beta);
    if (!(a > 1 - eps && b < 1)) {
        throw UsageError("grid must lie in (1 - max_eps, 1) = (" + io::fmt(1 - eps) + ", 1)");
    }
    SolveOptions opt;
    opt.residual_tol = c.tol;
    const auto fit = verify_slope(beta, corner_grid(1 - b, 1 - a, n), opt);
    Output out(c.out);
    if (pick_format(c, "json", {"json", "csv"}) == "json") {
        out.stream() << io::fit_to_json(fit).dump(2) << "\n";
    } else {
        io::write_fit_csv(out.stream(), fit);
    }
    std::cerr << "relative gap " << io::fmt(fit.relative_gap) << "\n";
    return fit.all_solved ? ok : infeasible;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Steady states of two axisymmetric grains on a substrate"};
    app.set_config("--config", "", "Flat key = value file with the same names as the flags; flags win");
    app.require_subcommand(1);

    RunConfig c;
    app.add_option("--beta", c.beta, "Dihedral angle beta in (pi/2, pi)");
    app.add_option("--m", c.m, "Surface tension ratio m = gamma_gb / gamma_ex; beta = arccos(-m/2)");
    app.add_option("--theta-c", c.theta_c, "Contact angle in (0, pi]; trace accepts several");
    app.add_option("--A", c.A, "Catenoid neck radius");
    app.add_option("--sigma", c.sigma, "Grain boundary arc length");
    app.add_option("--A-min", c.A_min, "Lower end of the A range");
    app.add_option("--A-max", c.A_max, "Upper end of the A range");
    app.add_option("--steps", c.steps, "Grid intervals for trace, grid points for asym");
    app.add_option("--tol", c.tol, "Root bracket tolerance")->check(CLI::PositiveNumber);
    app.add_option("--samples", c.samples, "Samples per curve in profiles (>= 16)");
    app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json", "svg"}));
    app.add_option("--out", c.out, "Output file (default stdout)");
    app.add_flag("--deg", c.deg, "Angles given in degrees");
    app.add_flag("--sufficient", c.sufficient, "check: report the sufficient conditions instead");

    auto* check = app.add_subcommand("check", "Report every admissibility condition with its margin")->fallthrough();
    auto* profile = app.add_subcommand("profile", "Emit the meridian profile of a steady state")->fallthrough();
    auto* trace = app.add_subcommand("trace", "Trace sigma(A) branches over an A range")->fallthrough();
    auto* asym = app.add_subcommand("asym", "Fit the branch slope near A = 1 for theta_c = pi")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ok : usage;
    }

    try {
        if (check->parsed()) return cmd_check(c);
        if (profile->parsed()) return cmd_profile(c);
        if (trace->parsed()) return cmd_trace(c);
        if (asym->parsed()) return cmd_asym(c);
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return usage;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return numerical;
    } catch (const std::domain_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return infeasible;
    }
    return usage;
}
