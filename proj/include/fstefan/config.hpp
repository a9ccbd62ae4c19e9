#pragma once

// Run configuration: flat `key = value` text, one entry per line, '#' starts
// a comment, numeric lists are comma separated. Missing keys keep the
// defaults below. Flag overrides are applied on top of the file.

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fstefan/analytic.hpp"
#include "fstefan/error.hpp"
#include "fstefan/scheme.hpp"

namespace fstefan {

enum class RunMode { Exact, Numeric, Tables, Profiles, Convergence };

/// One (lambda1, lambda2, kappa1, kappa2) row of the p tables.
struct TableRow {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double kappa1 = 1.0;
    double kappa2 = 1.0;
};

struct RunConfig {
    PhysicalParams params{};
    MeshConfig mesh{};
    RunMode mode = RunMode::Numeric;
    std::string output_dir = ".";
    std::vector<double> profile_times;  ///< empty: tau_n/4, tau_n/2, 3tau_n/4, tau_n
    Bracket bracket{};
    double eps = 1e-3;
    int max_iter = 60;
    int levels = 3;                     ///< convergence study depth
    std::vector<TableRow> extra_rows;   ///< appended to the three standard rows
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::string where(int line, std::string_view key) {
    std::string w = line > 0 ? "line " + std::to_string(line) + ", " : std::string("flag, ");
    return w + "key '" + std::string(key) + "'";
}

inline double parse_double(std::string_view text, int line, std::string_view key) {
    const auto t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw Error(ErrorCode::ParseError, where(line, key) + ": '" + std::string(t) + "' is not a number");
    return v;
}

inline int parse_int(std::string_view text, int line, std::string_view key) {
    const auto t = trim(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw Error(ErrorCode::ParseError, where(line, key) + ": '" + std::string(t) + "' is not an integer");
    return v;
}

inline std::vector<double> parse_list(std::string_view text, int line, std::string_view key) {
    std::vector<double> out;
    const auto t = trim(text);
    if (t.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = t.find(',', start);
        out.push_back(parse_double(t.substr(start, comma - start), line, key));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline void apply_entry(RunConfig& cfg, std::string_view key, std::string_view value, int line) {
    auto dbl = [&] { return parse_double(value, line, key); };
    auto integer = [&] { return parse_int(value, line, key); };

    if (key == "alpha") cfg.params.alpha = dbl();
    else if (key == "lambda1") cfg.params.lambda1 = dbl();
    else if (key == "lambda2") cfg.params.lambda2 = dbl();
    else if (key == "kappa1") cfg.params.kappa1 = dbl();
    else if (key == "kappa2") cfg.params.kappa2 = dbl();
    else if (key == "theta_inf") cfg.params.theta_inf = dbl();
    else if (key == "ratio") cfg.mesh.ratio = dbl();
    else if (key == "m1") cfg.mesh.m1 = integer();
    else if (key == "m2") cfg.mesh.m2 = integer();
    else if (key == "n") cfg.mesh.n = integer();
    else if (key == "tau0_factor") cfg.mesh.tau0_factor = dbl();
    else if (key == "p_min") cfg.bracket.lo = dbl();
    else if (key == "p_max") cfg.bracket.hi = dbl();
    else if (key == "epsilon") cfg.eps = dbl();
    else if (key == "max_iter") cfg.max_iter = integer();
    else if (key == "levels") cfg.levels = integer();
    else if (key == "output_dir") cfg.output_dir = std::string(trim(value));
    else if (key == "profile_times") cfg.profile_times = parse_list(value, line, key);
    else if (key == "extra_row") {
        const auto v = parse_list(value, line, key);
        if (v.size() != 4)
            throw Error(ErrorCode::ParseError,
                        where(line, key) + ": expected lambda1,lambda2,kappa1,kappa2");
        cfg.extra_rows.push_back({v[0], v[1], v[2], v[3]});
    } else {
        throw Error(ErrorCode::ParseError, where(line, key) + ": unknown key");
    }
}

}  // namespace detail

/// Every violated invariant of a configuration, empty when valid.
inline std::vector<std::string> violations(const RunConfig& cfg) {
    auto out = violations(cfg.params);
    for (auto& v : violations(cfg.mesh)) out.push_back(std::move(v));
    if (!(cfg.bracket.lo > 0.0 && cfg.bracket.lo < cfg.bracket.hi))
        out.emplace_back("bracket must satisfy 0 < p_min < p_max");
    if (!(cfg.eps > 0.0)) out.emplace_back("epsilon must be > 0");
    if (cfg.max_iter < 1) out.emplace_back("max_iter must be >= 1");
    if (cfg.levels < 2) out.emplace_back("levels must be >= 2");
    for (double t : cfg.profile_times)
        if (!(t > 0.0)) {
            out.emplace_back("profile_times must be > 0");
            break;
        }
    for (const auto& r : cfg.extra_rows)
        if (!(r.lambda1 > 0 && r.lambda2 > 0 && r.kappa1 > 0 && r.kappa2 > 0)) {
            out.emplace_back("extra_row entries must be > 0");
            break;
        }
    return out;
}

/// Parses configuration text, then applies overrides (key -> value, same
/// keys as the file). Throws ParseError on malformed input and
/// ValidationError listing every violated invariant.
inline RunConfig parse_config(std::string_view text, const std::map<std::string, std::string>& overrides = {}) {
    RunConfig cfg;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
        const auto key = detail::trim(line.substr(0, eq));
        if (key.empty()) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": empty key");
        detail::apply_entry(cfg, key, line.substr(eq + 1), line_no);
    }
    for (const auto& [k, v] : overrides) detail::apply_entry(cfg, k, v, 0);

    const auto bad = violations(cfg);
    if (!bad.empty()) {
        std::string msg;
        for (const auto& b : bad) msg += (msg.empty() ? "" : "; ") + b;
        throw Error(ErrorCode::ValidationError, msg);
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path, const std::map<std::string, std::string>& overrides = {}) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::ParseError, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), overrides);
}

/// Resolved configuration as key = value lines (parseable by parse_config).
inline std::string to_text(const RunConfig& cfg) {
    std::ostringstream o;
    o.precision(17);
    o << "alpha = " << cfg.params.alpha << "\n"
      << "lambda1 = " << cfg.params.lambda1 << "\n"
      << "lambda2 = " << cfg.params.lambda2 << "\n"
      << "kappa1 = " << cfg.params.kappa1 << "\n"
      << "kappa2 = " << cfg.params.kappa2 << "\n"
      << "theta_inf = " << cfg.params.theta_inf << "\n"
      << "ratio = " << cfg.mesh.ratio << "\n"
      << "m1 = " << cfg.mesh.m1 << "\n"
      << "m2 = " << cfg.mesh.m2 << "\n"
      << "n = " << cfg.mesh.n << "\n"
      << "tau0_factor = " << cfg.mesh.tau0_factor << "\n"
      << "p_min = " << cfg.bracket.lo << "\n"
      << "p_max = " << cfg.bracket.hi << "\n"
      << "epsilon = " << cfg.eps << "\n"
      << "max_iter = " << cfg.max_iter << "\n"
      << "levels = " << cfg.levels << "\n";
    if (!cfg.profile_times.empty()) {
        o << "profile_times = ";
        for (std::size_t i = 0; i < cfg.profile_times.size(); ++i) o << (i ? "," : "") << cfg.profile_times[i];
        o << "\n";
    }
    for (const auto& r : cfg.extra_rows)
        o << "extra_row = " << r.lambda1 << "," << r.lambda2 << "," << r.kappa1 << "," << r.kappa2 << "\n";
    return o.str();
}

}  // namespace fstefan
