#pragma once

// Table, profile and convergence runners plus their CSV writers. Numbers are
// written with 10 significant digits so reruns are byte-identical.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fstefan/analytic.hpp"
#include "fstefan/config.hpp"
#include "fstefan/error.hpp"
#include "fstefan/fronttrack.hpp"
#include "fstefan/scheme.hpp"

namespace fstefan {

inline constexpr std::string_view kVersion = "1.0.0";

inline std::string format_number(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.10g", v);
    return buf.data();
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

inline std::vector<TableRow> standard_rows() { return {{1, 1, 1, 1}, {1, 2, 1, 1}, {1, 1, 2, 1}}; }

inline std::vector<double> table_alphas() { return {0.25, 0.5, 0.75, 1.0}; }

inline PhysicalParams row_params(const TableRow& row, double alpha, double theta_inf) {
    return {alpha, row.kappa1, row.kappa2, row.lambda1, row.lambda2, theta_inf};
}

/// Maximum-principle check used for every emitted temperature.
inline bool within_bounds(double u, int phase, double theta_inf, double slack = 1e-8) {
    if (phase == 1) return u >= -slack && u <= 1.0 + slack;
    return u >= theta_inf - slack && u <= slack;
}

// ---------------------------------------------------------------- tables

struct TableCell {
    double value = std::numeric_limits<double>::quiet_NaN();
    std::optional<ErrorCode> status;  ///< set when the cell failed or did not converge
    std::string message;
};

struct TableSet {
    std::vector<TableRow> rows;
    std::vector<double> alphas;
    std::vector<std::vector<TableCell>> exact;       ///< p from the closed form
    std::vector<std::vector<TableCell>> numeric;     ///< p from bisection on the scheme
    std::vector<std::vector<TableCell>> final_time;  ///< tau with S(tau) = 1
};

inline TableSet compute_tables(const RunConfig& cfg) {
    TableSet t;
    t.rows = standard_rows();
    t.rows.insert(t.rows.end(), cfg.extra_rows.begin(), cfg.extra_rows.end());
    t.alphas = table_alphas();

    for (const auto& row : t.rows) {
        auto& ex = t.exact.emplace_back();
        auto& nu = t.numeric.emplace_back();
        auto& ft = t.final_time.emplace_back();
        for (double a : t.alphas) {
            const auto pp = row_params(row, a, cfg.params.theta_inf);

            TableCell ce;
            try {
                ce.value = solve_p_exact(pp, cfg.bracket);
            } catch (const Error& e) {
                ce.status = e.code();
                ce.message = e.what();
            }
            ex.push_back(ce);

            TableCell cn, ct;
            try {
                const auto res = bisection_solve(pp, cfg.mesh, cfg.bracket, cfg.eps, cfg.max_iter);
                cn.value = res.p;
                ct.value = res.tau_final;
                if (!res.converged) {
                    cn.status = ct.status = ErrorCode::MaxIterations;
                    cn.message = ct.message = "bisection stopped after max_iter midpoints";
                }
                const double expected = final_time(res.p, a);
                if (std::fabs(res.tau_final - expected) > 1e-12 * expected)
                    throw Error(ErrorCode::InvalidState, "tau_n differs from p^(-2/alpha)");
            } catch (const Error& e) {
                cn.status = ct.status = e.code();
                cn.message = ct.message = e.what();
            }
            nu.push_back(cn);
            ft.push_back(ct);
        }
    }
    return t;
}

inline std::string table_csv(const TableSet& t, const std::vector<std::vector<TableCell>>& cells) {
    std::ostringstream o;
    o << "lambda1,lambda2,kappa1,kappa2";
    for (double a : t.alphas) o << ",alpha=" << format_number(a);
    o << "\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        o << format_number(row.lambda1) << ',' << format_number(row.lambda2) << ','
          << format_number(row.kappa1) << ',' << format_number(row.kappa2);
        for (const auto& c : cells[r]) {
            o << ',';
            if (c.status && !std::isfinite(c.value)) o << to_string(*c.status);
            else if (c.status) o << to_string(*c.status);
            else o << format_number(c.value);
        }
        o << "\n";
    }
    return o.str();
}

/// Plain-text rendering with 4 decimals, one block per table.
inline std::string render_tables(const TableSet& t) {
    std::ostringstream o;
    auto block = [&](std::string_view title, const std::vector<std::vector<TableCell>>& cells, int decimals) {
        o << title << "\n";
        o << "  l1   l2   k1   k2 |";
        for (double a : t.alphas) {
            std::array<char, 32> b{};
            std::snprintf(b.data(), b.size(), " %9s", ("a=" + format_number(a)).c_str());
            o << b.data();
        }
        o << "\n";
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto& row = t.rows[r];
            std::array<char, 64> b{};
            std::snprintf(b.data(), b.size(), "%4g %4g %4g %4g |", row.lambda1, row.lambda2, row.kappa1,
                          row.kappa2);
            o << b.data();
            for (const auto& c : cells[r]) {
                if (c.status) std::snprintf(b.data(), b.size(), " %9.9s", std::string(to_string(*c.status)).c_str());
                else std::snprintf(b.data(), b.size(), " %9.*f", decimals, c.value);
                o << b.data();
            }
            o << "\n";
        }
        o << "\n";
    };
    block("p from the exact solution", t.exact, 4);
    block("p from the numerical solution", t.numeric, 4);
    block("tau with S(tau) = 1 (numerical)", t.final_time, 3);
    return o.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidInput, "cannot write '" + path.string() + "'");
    f << text;
}

inline void write_tables(const TableSet& t, const std::filesystem::path& dir) {
    write_text(dir / "table1.csv", table_csv(t, t.exact));
    write_text(dir / "table2.csv", table_csv(t, t.numeric));
    write_text(dir / "table3.csv", table_csv(t, t.final_time));
}

inline TableSet run_tables(const RunConfig& cfg) {
    auto t = compute_tables(cfg);
    write_tables(t, cfg.output_dir);
    return t;
}

// -------------------------------------------------------------- profiles

struct ProfileRow {
    double tau = 0.0;
    double x = 0.0;
    std::optional<double> u;  ///< empty where the exact series is out of range
    int phase = 1;
    bool exact = false;
};

struct FrontRow {
    double tau = 0.0;
    double s_numeric = 0.0;           ///< discrete Stefan condition at this level
    std::optional<double> s_exact;    ///< p_exact tau^(a/2)
    double s_front_law = 0.0;         ///< p_num tau^(a/2), the front the grid was built on
};

struct ProfileReport {
    FrontSolveResult solve;
    std::optional<double> p_exact;
    std::vector<int> levels;
    std::vector<ProfileRow> profiles;
    std::vector<FrontRow> front;
    std::size_t bound_violations = 0;
    std::size_t exact_gaps = 0;
    double max_discrepancy = 0.0;  ///< max |u_num - u_exact| over emitted pairs
};

inline std::vector<int> profile_levels(const RunConfig& cfg, const PhaseGrid& g) {
    std::vector<double> times = cfg.profile_times;
    const double tn = g.tau_final();
    if (times.empty()) times = {tn / 4.0, tn / 2.0, 3.0 * tn / 4.0, tn};
    std::vector<int> out;
    for (double t : times) {
        if (!(t > 0.0) || t > tn * (1.0 + 1e-12)) {
            std::ostringstream msg;
            msg << "profile time " << t << " outside (0, tau_n = " << tn << "]";
            throw Error(ErrorCode::ValidationError, msg.str());
        }
        const int j = std::clamp(static_cast<int>(std::lround(t / g.dtau())), 1, g.n());
        out.push_back(j);
    }
    return out;
}

inline ProfileReport compute_profiles(const RunConfig& cfg) {
    const auto& pp = cfg.params;
    ProfileReport rep;
    rep.solve = bisection_solve(pp, cfg.mesh, cfg.bracket, cfg.eps, cfg.max_iter);
    if (!rep.solve.converged) {
        throw Error(ErrorCode::MaxIterations,
                    "bisection did not converge for configuration:\n" + to_text(cfg));
    }
    const auto run = run_front(rep.solve.p, pp, cfg.mesh);

    std::optional<ExactField> field;
    try {
        const auto sol = solve_exact(pp, cfg.bracket);
        rep.p_exact = sol.p;
        field.emplace(sol);
    } catch (const Error&) {
        // exact columns stay empty
    }

    rep.levels = profile_levels(cfg, run.liquid);
    for (int j : rep.levels) {
        const double tau = run.liquid.tau(j);
        std::vector<double> xs;
        for (const PhaseGrid* g : {&run.liquid, &run.solid}) {
            const int phase = static_cast<int>(g->phase());
            for (int i = 0; i <= g->m(); ++i) {
                const double x = recovered_x(*g, i, j);
                const double u = recovered_u(*g, i, j);
                if (!within_bounds(u, phase, pp.theta_inf)) ++rep.bound_violations;
                rep.profiles.push_back({tau, x, u, phase, false});
                xs.push_back(x);
            }
        }
        std::size_t idx = rep.profiles.size() - xs.size();
        for (double x : xs) {
            ProfileRow row{tau, x, std::nullopt, 1, true};
            if (field) {
                row.phase = x <= field->front(tau) ? 1 : 2;
                try {
                    row.u = field->u(x, tau);
                    if (!within_bounds(*row.u, row.phase, pp.theta_inf)) ++rep.bound_violations;
                    rep.max_discrepancy = std::max(rep.max_discrepancy, std::fabs(*row.u - *rep.profiles[idx].u));
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::NonConvergence) throw;
                    ++rep.exact_gaps;
                }
            } else {
                ++rep.exact_gaps;
            }
            ++idx;
            rep.profiles.push_back(row);
        }
    }

    rep.front.push_back({0.0, 0.0, rep.p_exact ? std::optional<double>(0.0) : std::nullopt, 0.0});
    for (int j = 1; j <= run.liquid.n(); ++j) {
        const double tau = run.liquid.tau(j);
        FrontRow fr;
        fr.tau = tau;
        fr.s_numeric = stefan_front_value(run.liquid, run.solid, j);
        if (rep.p_exact) fr.s_exact = *rep.p_exact * std::pow(tau, pp.alpha / 2.0);
        fr.s_front_law = rep.solve.p * std::pow(tau, pp.alpha / 2.0);
        rep.front.push_back(fr);
    }
    return rep;
}

inline std::string profiles_csv(const ProfileReport& rep) {
    std::ostringstream o;
    o << "tau,x,u,phase,source\n";
    for (const auto& r : rep.profiles)
        o << format_number(r.tau) << ',' << format_number(r.x) << ',' << format_optional(r.u) << ',' << r.phase
          << ',' << (r.exact ? "exact" : "numeric") << "\n";
    return o.str();
}

inline std::string front_csv(const ProfileReport& rep) {
    std::ostringstream o;
    o << "tau,S_numeric,S_exact,S_front_law\n";
    for (const auto& r : rep.front)
        o << format_number(r.tau) << ',' << format_number(r.s_numeric) << ',' << format_optional(r.s_exact) << ','
          << format_number(r.s_front_law) << "\n";
    return o.str();
}

inline ProfileReport run_profiles(const RunConfig& cfg) {
    auto rep = compute_profiles(cfg);
    const std::filesystem::path dir = cfg.output_dir;
    write_text(dir / "profiles.csv", profiles_csv(rep));
    write_text(dir / "front.csv", front_csv(rep));
    return rep;
}

// ----------------------------------------------------------- convergence

struct FieldError {
    double u1_window = 0.0;  ///< max |err| of phase 1 over levels with tau >= tau_n / 4
    double u2_window = 0.0;
    double u1_all = 0.0;     ///< max |err| of phase 1 over every level j >= 1
    double u2_all = 0.0;
    std::size_t gaps = 0;    ///< nodes skipped because the exact series is out of range
};

/// Deviation of the recovered temperatures from the exact field.
inline FieldError field_error(const FrontRun& run, const ExactField& field) {
    FieldError fe;
    const double tn = run.liquid.tau_final();
    for (const PhaseGrid* g : {&run.liquid, &run.solid}) {
        const bool liquid = g->phase() == Phase::Liquid;
        for (int j = 1; j <= g->n(); ++j) {
            const double tau = g->tau(j);
            const bool window = tau >= tn / 4.0 * (1.0 - 1e-12);
            for (int i = 0; i <= g->m(); ++i) {
                double e = 0.0;
                try {
                    e = std::fabs(recovered_u(*g, i, j) - field.u(recovered_x(*g, i, j), tau));
                } catch (const Error& err) {
                    if (err.code() != ErrorCode::NonConvergence) throw;
                    ++fe.gaps;
                    continue;
                }
                double& all = liquid ? fe.u1_all : fe.u2_all;
                all = std::max(all, e);
                if (window) {
                    double& w = liquid ? fe.u1_window : fe.u2_window;
                    w = std::max(w, e);
                }
            }
        }
    }
    return fe;
}

struct ConvergenceLevel {
    int level = 0;
    MeshConfig mesh;
    std::optional<ErrorCode> status;
    std::string message;
    double p_numeric = std::numeric_limits<double>::quiet_NaN();
    double p_exact = std::numeric_limits<double>::quiet_NaN();
    double p_rel_error = std::numeric_limits<double>::quiet_NaN();
    FieldError error;
};

/// Refinement study: (m1, m2, n) of the configured mesh scaled by 2^level.
inline std::vector<ConvergenceLevel> compute_convergence(const RunConfig& cfg) {
    const auto& pp = cfg.params;
    std::optional<ExactField> field;
    ErrorCode exact_code = ErrorCode::NonConvergence;
    std::string exact_failure;
    try {
        field.emplace(solve_exact(pp, cfg.bracket));
    } catch (const Error& e) {
        exact_code = e.code();
        exact_failure = e.what();
    }

    std::vector<ConvergenceLevel> out;
    for (int l = 0; l < cfg.levels; ++l) {
        ConvergenceLevel lev;
        lev.level = l;
        lev.mesh = cfg.mesh;
        lev.mesh.m1 <<= l;
        lev.mesh.m2 <<= l;
        lev.mesh.n <<= l;
        try {
            const auto res = bisection_solve(pp, lev.mesh, cfg.bracket, cfg.eps, cfg.max_iter);
            lev.p_numeric = res.p;
            if (!res.converged) {
                lev.status = ErrorCode::MaxIterations;
                lev.message = "bisection stopped after max_iter midpoints";
            }
            if (!field) throw Error(exact_code, "exact solution unavailable: " + exact_failure);
            lev.p_exact = field->solution().p;
            lev.p_rel_error = std::fabs(res.p - lev.p_exact) / lev.p_exact;
            lev.error = field_error(run_front(res.p, pp, lev.mesh), *field);
        } catch (const Error& e) {
            lev.status = e.code();
            lev.message = e.what();
        }
        out.push_back(lev);
    }
    return out;
}

inline std::string convergence_csv(const std::vector<ConvergenceLevel>& levels) {
    std::ostringstream o;
    o << "level,m1,m2,n,p_numeric,p_exact,p_rel_error,err_u1,err_u2,err_u1_all,err_u2_all,exact_gaps,status\n";
    for (const auto& l : levels) {
        const bool failed = l.status && l.status != ErrorCode::MaxIterations;
        auto num = [&](double v) { return std::isfinite(v) ? format_number(v) : std::string(); };
        o << l.level << ',' << l.mesh.m1 << ',' << l.mesh.m2 << ',' << l.mesh.n << ',' << num(l.p_numeric) << ','
          << num(l.p_exact) << ',' << num(l.p_rel_error) << ',';
        if (failed) o << ",,,,";
        else
            o << format_number(l.error.u1_window) << ',' << format_number(l.error.u2_window) << ','
              << format_number(l.error.u1_all) << ',' << format_number(l.error.u2_all) << ',' << l.error.gaps;
        o << ',' << (l.status ? to_string(*l.status) : std::string_view("ok")) << "\n";
    }
    return o.str();
}

inline std::vector<ConvergenceLevel> run_convergence(const RunConfig& cfg) {
    auto levels = compute_convergence(cfg);
    write_text(std::filesystem::path(cfg.output_dir) / "convergence.csv", convergence_csv(levels));
    return levels;
}

// -------------------------------------------------------------- metadata

inline std::string_view to_string(RunMode mode) {
    switch (mode) {
    case RunMode::Exact: return "exact";
    case RunMode::Numeric: return "numeric";
    case RunMode::Tables: return "tables";
    case RunMode::Profiles: return "profiles";
    case RunMode::Convergence: return "convergence";
    }
    return "unknown";
}

/// run_info.txt: library version, mode and the resolved configuration.
inline void write_run_info(const RunConfig& cfg) {
    std::ostringstream o;
    o << "# fstefan run metadata\n"
      << "version = " << kVersion << "\n"
      << "mode = " << to_string(cfg.mode) << "\n"
      << to_text(cfg);
    write_text(std::filesystem::path(cfg.output_dir) / "run_info.txt", o.str());
}

}  // namespace fstefan
