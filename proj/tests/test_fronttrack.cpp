#include <gtest/gtest.h>

#include <cmath>

#include "fstefan/analytic.hpp"
#include "fstefan/fronttrack.hpp"
#include "oracles.hpp"

namespace {

using fstefan::MeshConfig;
using fstefan::Phase;
using fstefan::PhaseGrid;
using fstefan::PhysicalParams;

const MeshConfig kSmall{10, 40, 30};

PhysicalParams params(double alpha, double theta_inf = -0.5) {
    PhysicalParams pp;
    pp.alpha = alpha;
    pp.theta_inf = theta_inf;
    return pp;
}

// Writes the classical solution into a grid in the scaled variables.
void inject_classical(PhaseGrid& g, const oracle::Classical& exact) {
    const double p = exact.p;
    for (int j = 0; j <= g.n(); ++j) {
        const double t = g.tau_eff(j);
        const double width = g.mesh().ratio - p * std::sqrt(t);
        for (int i = 0; i <= g.m(); ++i) {
            const double u = exact.u(fstefan::recovered_x(g, i, j), t);
            g.at(i, j) = g.phase() == Phase::Liquid ? u / t : u / (width * width);
        }
    }
    g.mark_filled(g.n());
}

}  // namespace

TEST(Bisection, LinearSyntheticFront) {
    const double target = 0.7371;
    const double eps = 1e-6;
    const auto res = fstefan::bisect_front([&](double p) { return p / target; }, {0.1, 2.0}, eps, 100);
    EXPECT_TRUE(res.converged);
    EXPECT_NEAR(res.p, target, eps * target);
    EXPECT_LE(res.iterations, static_cast<int>(std::ceil(std::log2(1.9 / (eps * target)))) + 1);
    EXPECT_EQ(res.history.size(), static_cast<std::size_t>(res.iterations) + 2);
    EXPECT_DOUBLE_EQ(res.residual, 1.0 - res.s_final);
}

TEST(Bisection, BracketHalvesEveryStep) {
    const auto res = fstefan::bisect_front([](double p) { return p / 1.234567; }, {0.1, 2.0}, 1e-9, 100);
    double width = 1.9;
    for (const auto& b : res.brackets) {
        EXPECT_NEAR(b.hi - b.lo, width / 2.0, 1e-15 + 1e-12 * width);
        EXPECT_LE(b.lo, 1.234567);
        EXPECT_GE(b.hi, 1.234567);
        width = b.hi - b.lo;
    }
}

TEST(Bisection, EndpointAcceptedWithoutIterating) {
    const auto res = fstefan::bisect_front([](double p) { return p / 0.1; }, {0.1, 2.0}, 1e-3, 60);
    EXPECT_TRUE(res.converged);
    EXPECT_EQ(res.p, 0.1);
    EXPECT_EQ(res.iterations, 0);
}

TEST(Bisection, NoSignChange) {
    try {
        (void)fstefan::bisect_front([](double) { return 0.5; }, {0.1, 2.0}, 1e-3, 60);
        FAIL();
    } catch (const fstefan::Error& e) {
        EXPECT_EQ(e.code(), fstefan::ErrorCode::NoSignChange);
    }
}

TEST(Bisection, IterationCapReportsNotConverged) {
    const auto res = fstefan::bisect_front([](double p) { return p / 0.777; }, {0.1, 2.0}, 1e-15, 5);
    EXPECT_FALSE(res.converged);
    EXPECT_EQ(res.iterations, 5);
}

TEST(Bisection, RejectsBadArguments) {
    auto f = [](double p) { return p; };
    EXPECT_THROW((void)fstefan::bisect_front(f, {2.0, 0.1}, 1e-3, 60), fstefan::Error);
    EXPECT_THROW((void)fstefan::bisect_front(f, {0.0, 1.0}, 1e-3, 60), fstefan::Error);
    EXPECT_THROW((void)fstefan::bisect_front(f, {0.1, 1.0}, 0.0, 60), fstefan::Error);
}

TEST(FinalTime, Values) {
    EXPECT_EQ(fstefan::final_time(1.0, 0.3), 1.0);
    EXPECT_NEAR(fstefan::final_time(0.9311, 1.0), 1.1534, 1e-4);
    EXPECT_NEAR(fstefan::final_time(0.7053, 0.25), 16.33, 1e-2);
}

TEST(StefanFront, ZeroStateGivesZero) {
    const auto pp = params(0.5, 0.0);
    PhaseGrid liq(Phase::Liquid, 0.8, pp, kSmall);
    PhaseGrid sol(Phase::Solid, 0.8, pp, kSmall);
    for (int j = 0; j <= kSmall.n; ++j)
        for (int i = 0; i <= liq.m(); ++i) liq.at(i, j) = 0.0;
    liq.mark_filled(kSmall.n);
    fstefan::advance_phase(sol);
    EXPECT_EQ(fstefan::stefan_front_value(liq, sol), 0.0);
}

TEST(StefanFront, Errors) {
    const auto pp = params(0.5);
    PhaseGrid liq(Phase::Liquid, 0.8, pp, kSmall);
    PhaseGrid sol(Phase::Solid, 0.8, pp, kSmall);
    PhaseGrid other(Phase::Solid, 0.9, pp, kSmall);
    auto code = [](auto&& fn) {
        try {
            fn();
        } catch (const fstefan::Error& e) {
            return e.code();
        }
        return fstefan::ErrorCode::InvalidInput;
    };
    using fstefan::ErrorCode;
    EXPECT_EQ(code([&] { (void)fstefan::stefan_front_value(liq, sol); }), ErrorCode::InvalidState);
    fstefan::advance_phase(liq);
    fstefan::advance_phase(sol);
    fstefan::advance_phase(other);
    EXPECT_EQ(code([&] { (void)fstefan::stefan_front_value(sol, liq); }), ErrorCode::GridMismatch);
    EXPECT_EQ(code([&] { (void)fstefan::stefan_front_value(liq, other); }), ErrorCode::GridMismatch);
    EXPECT_THROW((void)fstefan::stefan_front_value(liq, sol, 0), fstefan::Error);
    EXPECT_NO_THROW((void)fstefan::stefan_front_value(liq, sol, 7));
}

// Exact temperatures on the grid. The interface flux behaves like
// tau^(-1/2) and the j = 0 term sees the near-singular profile at tau0, so
// the discrete condition only approaches 1 as n grows.
TEST(StefanFront, ClassicalInjectionGivesUnitFront) {
    const auto pp = params(1.0);
    const oracle::Classical exact(1.0, 1.0, 1.0, 1.0, -0.5);
    auto front_for = [&](int n) {
        const MeshConfig mesh{100, 500, n};
        PhaseGrid liq(Phase::Liquid, exact.p, pp, mesh);
        PhaseGrid sol(Phase::Solid, exact.p, pp, mesh);
        inject_classical(liq, exact);
        inject_classical(sol, exact);
        return fstefan::stefan_front_value(liq, sol);
    };
    const double s400 = front_for(400);
    const double s1600 = front_for(1600);
    EXPECT_NEAR(s400, 1.0, 6e-2);
    EXPECT_NEAR(s1600, 1.0, 1e-2);
    EXPECT_LT(std::fabs(s1600 - 1.0), std::fabs(s400 - 1.0));
}

TEST(FrontResidual, SignsAtBracketEnds) {
    for (double a : {0.25, 0.5, 0.75, 1.0}) {
        EXPECT_LT(fstefan::front_residual(0.1, params(a), kSmall), 0.0) << "alpha " << a;
        EXPECT_GT(fstefan::front_residual(2.0, params(a), kSmall), 0.0) << "alpha " << a;
    }
}

TEST(BisectionSolve, ClassicalCoarseMesh) {
    const auto pp = params(1.0);
    const auto res = fstefan::bisection_solve(pp, MeshConfig{20, 100, 100});
    EXPECT_TRUE(res.converged);
    EXPECT_LT(std::fabs(res.residual), 1e-3);
    EXPECT_NEAR(res.p, fstefan::solve_p_exact(pp), 0.03 * 0.9397);
    EXPECT_NEAR(res.tau_final, fstefan::final_time(res.p, 1.0), 1e-12 * res.tau_final);
}

TEST(BisectionSolve, ValidatesInputs) {
    EXPECT_THROW((void)fstefan::bisection_solve(params(0.0), kSmall), fstefan::Error);
    EXPECT_THROW((void)fstefan::bisection_solve(params(1.0), MeshConfig{1, 1, 1}), fstefan::Error);
}
