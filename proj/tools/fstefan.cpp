// fstefan: command-line front end for the two-phase fractional Stefan solver.
//
// Exit status: 0 success, 2 invalid configuration or arguments,
// 3 solver did not converge, 1 anything else.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <utility>

#include "fstefan.hpp"

namespace {

int exit_code(fstefan::ErrorCode c) {
    using fstefan::ErrorCode;
    switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::InvalidInput:
        return 2;
    case ErrorCode::NonConvergence:
    case ErrorCode::MaxIterations:
    case ErrorCode::NoSignChange:
    case ErrorCode::DegenerateInput:
        return 3;
    default:
        return 1;
    }
}

int cmd_exact(const fstefan::RunConfig& cfg) {
    const auto sol = fstefan::solve_exact(cfg.params, cfg.bracket);
    std::printf("p_exact = %.10g\n", sol.p);
    std::printf("tau_n = %.10g\n", fstefan::final_time(sol.p, cfg.params.alpha));
    std::printf("residual = %.3e\n", fstefan::transcendental_residual(sol.p, cfg.params));
    return 0;
}

int cmd_numeric(const fstefan::RunConfig& cfg) {
    const auto res = fstefan::bisection_solve(cfg.params, cfg.mesh, cfg.bracket, cfg.eps, cfg.max_iter);
    std::printf("p_numeric = %.10g\n", res.p);
    std::printf("S(tau_n) = %.10g\n", res.s_final);
    std::printf("tau_n = %.10g\n", res.tau_final);
    std::printf("iterations = %d\n", res.iterations);
    if (!res.converged) {
        std::fprintf(stderr, "error: bisection did not reach |1 - S| < %g in %d iterations\n", cfg.eps,
                     cfg.max_iter);
        return 3;
    }
    return 0;
}

int cmd_tables(const fstefan::RunConfig& cfg) {
    const auto t = fstefan::run_tables(cfg);
    fstefan::write_run_info(cfg);
    std::cout << fstefan::render_tables(t);
    return 0;
}

int cmd_profiles(const fstefan::RunConfig& cfg) {
    const auto rep = fstefan::run_profiles(cfg);
    fstefan::write_run_info(cfg);
    std::printf("p_numeric = %.10g (%d iterations)\n", rep.solve.p, rep.solve.iterations);
    if (rep.p_exact) std::printf("p_exact = %.10g\n", *rep.p_exact);
    std::printf("max |u_numeric - u_exact| = %.3e over emitted nodes (%zu exact gaps)\n", rep.max_discrepancy,
                rep.exact_gaps);
    std::printf("bound violations = %zu\n", rep.bound_violations);
    return 0;
}

int cmd_convergence(const fstefan::RunConfig& cfg) {
    const auto levels = fstefan::run_convergence(cfg);
    fstefan::write_run_info(cfg);
    std::cout << fstefan::convergence_csv(levels);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-phase fractional Stefan problem: exact and front-fixing numerical solutions"};
    app.set_version_flag("--version", std::string(fstefan::kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::map<std::string, std::string> overrides;
    app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);

    const std::pair<const char*, const char*> flags[] = {
        {"--alpha", "alpha"},         {"--lambda1", "lambda1"}, {"--lambda2", "lambda2"},
        {"--kappa1", "kappa1"},       {"--kappa2", "kappa2"},   {"--theta-inf", "theta_inf"},
        {"--ratio", "ratio"},         {"--m1", "m1"},           {"--m2", "m2"},
        {"--n", "n"},                 {"--eps", "epsilon"},     {"--out", "output_dir"},
        {"--levels", "levels"},       {"--max-iter", "max_iter"},
    };
    for (const auto& [flag, key] : flags) {
        app.add_option_function<std::string>(
            flag, [&overrides, key = std::string(key)](const std::string& v) { overrides[key] = v; },
            "overrides '" + std::string(key) + "'");
    }

    using Mode = fstefan::RunMode;
    Mode mode = Mode::Numeric;
    const std::pair<const char*, std::pair<Mode, const char*>> subs[] = {
        {"exact", {Mode::Exact, "p from the closed-form solution"}},
        {"numeric", {Mode::Numeric, "p from bisection on the finite-difference scheme"}},
        {"tables", {Mode::Tables, "table1.csv, table2.csv, table3.csv"}},
        {"profiles", {Mode::Profiles, "profiles.csv and front.csv"}},
        {"convergence", {Mode::Convergence, "convergence.csv for refined meshes"}},
    };
    for (const auto& [name, info] : subs) {
        const Mode m = info.first;
        app.add_subcommand(name, info.second)->callback([&mode, m] { mode = m; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        auto cfg = config_path.empty() ? fstefan::parse_config("", overrides)
                                       : fstefan::load_config(config_path, overrides);
        cfg.mode = mode;
        switch (mode) {
        case Mode::Exact: return cmd_exact(cfg);
        case Mode::Numeric: return cmd_numeric(cfg);
        case Mode::Tables: return cmd_tables(cfg);
        case Mode::Profiles: return cmd_profiles(cfg);
        case Mode::Convergence: return cmd_convergence(cfg);
        }
    } catch (const fstefan::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
