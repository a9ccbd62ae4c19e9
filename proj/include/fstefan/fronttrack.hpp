#pragma once

#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "fstefan/analytic.hpp"
#include "fstefan/error.hpp"
#include "fstefan/fracquad.hpp"
#include "fstefan/scheme.hpp"

namespace fstefan {

/// Discrete Stefan condition: S(tau_level) from the interface heat fluxes of
/// both phases, weighted by the memory weights c_{j,level}.
///
/// Fluxes are one-sided first-order difference quotients of the recovered
/// temperatures. The phase-1 quotient on the initial row is taken as 0.
inline double stefan_front_value(const PhaseGrid& liquid, const PhaseGrid& solid, int level) {
    if (liquid.phase() != Phase::Liquid || solid.phase() != Phase::Solid)
        throw Error(ErrorCode::GridMismatch, "expected a phase-1 and a phase-2 grid");
    if (liquid.p() != solid.p() || liquid.dtau() != solid.dtau() || liquid.n() != solid.n())
        throw Error(ErrorCode::GridMismatch, "grids were built for different p, dtau or n");
    if (level < 1 || level > liquid.n())
        throw Error(ErrorCode::InvalidInput, "level must lie in 1..n");
    if (liquid.filled_through() < level || solid.filled_through() < level)
        throw Error(ErrorCode::InvalidState, "grids are not advanced to the requested level");

    const auto& pp = liquid.params();
    const auto w = liquid.weights().weights(level - 1);
    const int m1 = liquid.m();

    double flux1 = 0.0;
    double flux2 = 0.0;
    for (int j = 0; j <= level; ++j) {
        const double du2 = recovered_u(solid, 1, j) - recovered_u(solid, 0, j);
        const double dx2 = recovered_x(solid, 1, j) - recovered_x(solid, 0, j);
        flux2 += w.c[j] * du2 / dx2;
        if (j == 0) continue;
        const double du1 = recovered_u(liquid, m1, j) - recovered_u(liquid, m1 - 1, j);
        const double dx1 = recovered_x(liquid, m1, j) - recovered_x(liquid, m1 - 1, j);
        flux1 += w.c[j] * du1 / dx1;
    }
    const double g = std::tgamma(pp.alpha);
    return pp.lambda2 / g * flux2 - pp.lambda1 / g * flux1;
}

inline double stefan_front_value(const PhaseGrid& liquid, const PhaseGrid& solid) {
    return stefan_front_value(liquid, solid, liquid.n());
}

/// Both phases advanced through level n for one candidate p.
struct FrontRun {
    PhaseGrid liquid;
    PhaseGrid solid;
    double s_final = 0.0;
};

inline FrontRun run_front(double p, const PhysicalParams& params, const MeshConfig& mesh) {
    try {
        FrontRun run{PhaseGrid(Phase::Liquid, p, params, mesh), PhaseGrid(Phase::Solid, p, params, mesh), 0.0};
        advance_phase(run.liquid);
        advance_phase(run.solid);
        run.s_final = stefan_front_value(run.liquid, run.solid);
        return run;
    } catch (const Error& e) {
        std::ostringstream msg;
        msg << "candidate p=" << p << ": " << e.what();
        throw Error(e.code(), msg.str());
    }
}

/// 1 - S(tau_n; p).
inline double front_residual(double p, const PhysicalParams& params, const MeshConfig& mesh) {
    return 1.0 - run_front(p, params, mesh).s_final;
}

inline double final_time(double p, double alpha) { return std::pow(p, -2.0 / alpha); }

struct FrontSolveResult {
    double p = 0.0;
    double s_final = 0.0;
    double residual = 0.0;  ///< 1 - s_final
    int iterations = 0;     ///< midpoint evaluations
    std::vector<std::pair<double, double>> history;  ///< (p candidate, S(tau_n)) in evaluation order
    std::vector<Bracket> brackets;  ///< bracket after each midpoint that did not terminate
    bool converged = false;
    double tau_final = 0.0;  ///< n * dtau for the returned p
};

/// Bisection on 1 - S(tau_n; p) with endpoint checks first. `front`
/// maps a candidate p to S(tau_n; p).
///
/// Endpoints are evaluated first and accepted directly if they satisfy the
/// criterion; otherwise a sign change is required (NoSignChange otherwise).
/// Reaching max_iter returns the last midpoint with converged == false.
template <typename FrontFn>
FrontSolveResult bisect_front(FrontFn&& front, Bracket bracket, double eps, int max_iter) {
    if (!(bracket.lo > 0.0 && bracket.lo < bracket.hi))
        throw Error(ErrorCode::InvalidInput, "bracket must satisfy 0 < p_a < p_b");
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidInput, "eps must be > 0");

    FrontSolveResult res;
    auto finish = [&](double p, double s, bool ok) {
        res.p = p;
        res.s_final = s;
        res.residual = 1.0 - s;
        res.converged = ok;
        return res;
    };

    double pa = bracket.lo, pb = bracket.hi;
    const double sa = front(pa);
    res.history.emplace_back(pa, sa);
    const double sb = front(pb);
    res.history.emplace_back(pb, sb);
    double ra = 1.0 - sa, rb = 1.0 - sb;

    if (std::fabs(ra) < eps) return finish(pa, sa, true);
    if (std::fabs(rb) < eps) return finish(pb, sb, true);
    if (!(ra * rb < 0.0)) {
        std::ostringstream msg;
        msg << "1 - S has the same sign at p_a=" << pa << " (" << ra << ") and p_b=" << pb << " (" << rb
            << ")";
        throw Error(ErrorCode::NoSignChange, msg.str());
    }

    double pc = pa, sc = sa;
    for (int it = 0; it < max_iter; ++it) {
        pc = 0.5 * (pa + pb);
        sc = front(pc);
        res.history.emplace_back(pc, sc);
        ++res.iterations;
        const double rc = 1.0 - sc;
        if (std::fabs(rc) < eps) return finish(pc, sc, true);
        if (ra * rc > 0.0) {
            pa = pc;
            ra = rc;
        } else if (rb * rc > 0.0) {
            pb = pc;
            rb = rc;
        }
        res.brackets.push_back({pa, pb});
    }
    return finish(pc, sc, false);
}

inline FrontSolveResult bisection_solve(const PhysicalParams& params, const MeshConfig& mesh,
                                        Bracket bracket = {}, double eps = 1e-3, int max_iter = 60) {
    check(params);
    check(mesh);
    auto res = bisect_front([&](double p) { return run_front(p, params, mesh).s_final; }, bracket, eps,
                            max_iter);
    res.tau_final = mesh.n * time_step(res.p, params.alpha, mesh.n);
    return res;
}

}  // namespace fstefan
