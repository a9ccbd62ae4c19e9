#include <gtest/gtest.h>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <array>
#include <cmath>
#include <vector>

#include "fstefan/analytic.hpp"

namespace {

using big = boost::multiprecision::cpp_bin_float_50;

// Wright series with 50-digit coefficients, fixed (gamma, delta).
class MpWright {
public:
    MpWright(double gamma, double delta, int terms = 400) {
        big fact = 1;
        for (int k = 0; k < terms; ++k) {
            if (k > 0) fact *= k;
            const big x = big(gamma) * k + big(delta);
            coef_.push_back(x <= 0 && x == floor(x) ? big(0) : 1 / (fact * boost::math::tgamma(x)));
        }
    }
    big operator()(const big& z) const {
        big s = 0;
        for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) s = s * z + *it;
        return s;
    }

private:
    std::vector<big> coef_;
};

// Independent transcendental residual evaluated in 50 digits.
double residual_oracle(double p, const fstefan::PhysicalParams& pp) {
    const big a = pp.alpha;
    const MpWright wn(-pp.alpha / 2.0, 1.0 - pp.alpha / 2.0);
    const MpWright wd(-pp.alpha / 2.0, 1.0);
    const big sk1 = sqrt(big(pp.kappa1)), sk2 = sqrt(big(pp.kappa2));
    const big z1 = -big(p) / sk1, z2 = -big(p) / sk2;
    const big lhs = big(p) * boost::math::tgamma(1 + a / 2) / boost::math::tgamma(1 - a / 2);
    const big rhs = big(pp.lambda2) / sk2 * pp.theta_inf * wn(z2) / wd(z2) -
                    big(pp.lambda1) / sk1 * wn(z1) / (wd(z1) - 1);
    return static_cast<double>(lhs - rhs);
}

double root_oracle(const fstefan::PhysicalParams& pp) {
    double a = 0.1, b = 2.0;
    double fa = residual_oracle(a, pp);
    while (b - a > 1e-13) {
        const double c = 0.5 * (a + b);
        const double fc = residual_oracle(c, pp);
        if ((fc > 0) == (fa > 0)) {
            a = c;
            fa = fc;
        } else {
            b = c;
        }
    }
    return 0.5 * (a + b);
}

fstefan::PhysicalParams row(int r, double alpha) {
    fstefan::PhysicalParams pp;
    pp.alpha = alpha;
    if (r == 1) pp.lambda2 = 2.0;
    if (r == 2) pp.kappa1 = 2.0;
    return pp;
}

const std::array<double, 4> kAlphas{0.25, 0.5, 0.75, 1.0};

}  // namespace

TEST(Params, ViolationsAndCheck) {
    fstefan::PhysicalParams pp;
    EXPECT_TRUE(fstefan::violations(pp).empty());
    pp.alpha = 1.5;
    pp.kappa2 = -1.0;
    const auto v = fstefan::violations(pp);
    EXPECT_EQ(v.size(), 2u);
    EXPECT_THROW(fstefan::check(pp), fstefan::Error);
}

TEST(Nondimensionalize, Examples) {
    fstefan::DimensionalInputs d;
    d.U0 = 3.0;
    d.Us = 1.0;
    d.Uinf = 1.0;
    auto pp = fstefan::nondimensionalize(d);
    EXPECT_EQ(pp.kappa1, 1.0);
    EXPECT_EQ(pp.theta_inf, 0.0);

    d.K1 = 2.0;
    d.L_latent = 4.0;  // (U0 - Us) * 2 / 4 = 1
    pp = fstefan::nondimensionalize(d);
    EXPECT_DOUBLE_EQ(pp.kappa1, 2.0);
    EXPECT_DOUBLE_EQ(pp.kappa2, 1.0);
    EXPECT_DOUBLE_EQ(pp.lambda1, 1.0);
    EXPECT_DOUBLE_EQ(pp.lambda2, 0.5);
}

TEST(Nondimensionalize, RejectsBadInputs) {
    fstefan::DimensionalInputs d;
    d.U0 = 0.0;
    EXPECT_THROW((void)fstefan::nondimensionalize(d), fstefan::Error);
    d.U0 = 2.0;
    d.c2 = 0.0;
    try {
        (void)fstefan::nondimensionalize(d);
        FAIL();
    } catch (const fstefan::Error& e) {
        EXPECT_EQ(e.code(), fstefan::ErrorCode::InvalidInput);
    }
}

TEST(Residual, SmallAtReferenceRoots) {
    EXPECT_LT(std::fabs(fstefan::transcendental_residual(0.9397, row(0, 1.0))), 1e-3);
    EXPECT_LT(std::fabs(fstefan::transcendental_residual(0.7555, row(1, 1.0))), 1e-3);
}

TEST(Residual, WrightAndErfcFormsAgreeAtAlphaOne) {
    for (int r = 0; r < 3; ++r)
        for (double p : {0.2, 0.6, 0.95, 1.7}) {
            const auto pp = row(r, 1.0);
            EXPECT_NEAR(fstefan::transcendental_residual_wright(p, pp), fstefan::transcendental_residual_erfc(p, pp),
                        1e-10);
        }
}

TEST(Residual, MatchesMultiprecisionOracle) {
    for (int r = 0; r < 3; ++r)
        for (double a : kAlphas)
            for (double p : {0.3, 0.8, 1.5}) {
                const auto pp = row(r, a);
                EXPECT_NEAR(fstefan::transcendental_residual(p, pp), residual_oracle(p, pp), 1e-10)
                    << "row " << r << " alpha " << a << " p " << p;
            }
}

TEST(Residual, SignChangeOverDefaultBracket) {
    for (int r = 0; r < 3; ++r)
        for (double a : kAlphas) {
            const auto pp = row(r, a);
            EXPECT_LT(fstefan::transcendental_residual(0.1, pp) * fstefan::transcendental_residual(2.0, pp), 0.0);
        }
}

TEST(SolveExact, ReferenceValues) {
    const double expected[3][4] = {
        {0.6834, 0.7472, 0.8299, 0.9397},
        {0.5496, 0.6013, 0.6680, 0.7555},
        {0.7218, 0.7868, 0.8697, 0.9783},
    };
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c)
            EXPECT_NEAR(fstefan::solve_p_exact(row(r, kAlphas[c])), expected[r][c], 5e-4)
                << "row " << r << " alpha " << kAlphas[c];
    EXPECT_NEAR(fstefan::solve_p_exact(row(0, 1.0)), 0.9397, 5e-5);
}

TEST(SolveExact, MatchesIndependentRoot) {
    for (int r = 0; r < 3; ++r)
        for (double a : kAlphas) EXPECT_NEAR(fstefan::solve_p_exact(row(r, a)), root_oracle(row(r, a)), 1e-9);
}

TEST(SolveExact, NoSignChangeInNarrowBracket) {
    try {
        (void)fstefan::solve_p_exact(row(0, 1.0), {0.1, 0.2});
        FAIL();
    } catch (const fstefan::Error& e) {
        EXPECT_EQ(e.code(), fstefan::ErrorCode::NoSignChange);
    }
}

TEST(SolveExact, OnePhaseLimitIsContinuous) {
    auto pp = row(0, 0.5);
    pp.theta_inf = 0.0;
    const double p0 = fstefan::solve_p_exact(pp);
    pp.theta_inf = -1e-6;
    const double p1 = fstefan::solve_p_exact(pp);
    EXPECT_LT(p1, p0);
    EXPECT_NEAR(p1, p0, 1e-5);
}

TEST(Front, PowerLaw) {
    const fstefan::ExactSolution sol{0.7053, row(0, 0.25)};
    EXPECT_EQ(fstefan::front_exact(0.0, sol), 0.0);
    EXPECT_EQ(fstefan::front_exact(1.0, sol), 0.7053);
    EXPECT_NEAR(fstefan::front_exact(16.329, sol), 1.0, 2e-3);
    EXPECT_THROW((void)fstefan::front_exact(-1.0, sol), fstefan::Error);
}

TEST(ExactField, BoundaryAndInterfaceValues) {
    for (double a : kAlphas) {
        const auto sol = fstefan::solve_exact(row(0, a));
        const fstefan::ExactField f(sol);
        for (double tau : {0.3, 1.0, 2.5}) {
            const double s = f.front(tau);
            EXPECT_NEAR(f.u1(0.0, tau), 1.0, 1e-12);
            EXPECT_EQ(f.u1(s, tau), 0.0);
            EXPECT_EQ(f.u2(s, tau), 0.0);
            EXPECT_GT(f.u(0.5 * s, tau), 0.0);
            EXPECT_LT(f.u(1.5 * s, tau), 0.0);
        }
        EXPECT_THROW((void)f.u1(-0.1, 1.0), fstefan::Error);
        EXPECT_THROW((void)f.u2(0.0, 1.0), fstefan::Error);
        EXPECT_THROW((void)f.u(0.1, 0.0), fstefan::Error);
    }
}

TEST(ExactField, ClassicalClosedForms) {
    const fstefan::ExactSolution s1{0.9397, row(0, 1.0)};
    const double e1 = 1.0 - (std::erfc(0.25) - 1.0) / (std::erfc(0.46985) - 1.0);
    EXPECT_NEAR(fstefan::u1_exact(0.5, 1.0, s1), e1, 1e-14);

    const fstefan::ExactSolution s2{0.7555, row(1, 1.0)};
    const double e2 = -0.5 * (std::erfc(0.37775) - std::erfc(1.0)) / std::erfc(0.37775);
    EXPECT_NEAR(fstefan::u2_exact(2.0, 1.0, s2), e2, 1e-14);
}

TEST(ExactField, FarFieldApproachesThetaInf) {
    const auto sol = fstefan::solve_exact(row(0, 0.5));
    const fstefan::ExactField f(sol);
    double prev = 0.0;
    for (double x : {1.0, 2.0, 4.0, 6.0, 8.0}) {
        const double u = f.u2(x, 1.0);
        EXPECT_LT(u, prev);
        prev = u;
    }
    EXPECT_NEAR(prev, -0.5, 1e-3);
}

// Flux balance at the front: S(tau) = I^alpha (lambda2 u2_x - lambda1 u1_x)
// at x = S. The flux scales as tau^(-alpha/2), so at tau = 1 the front
// coefficient is p = F Gamma(1 - a/2) / Gamma(1 + a/2).
TEST(ExactField, FluxBalanceRecoversP) {
    for (double a : kAlphas) {
        for (int r = 0; r < 3; ++r) {
            const auto sol = fstefan::solve_exact(row(r, a));
            const fstefan::ExactField f(sol);
            const double s = f.front(1.0), h = 1e-4;
            const double du1 = (3.0 * f.u1(s, 1.0) - 4.0 * f.u1(s - h, 1.0) + f.u1(s - 2 * h, 1.0)) / (2 * h);
            const double du2 = (-3.0 * f.u2(s, 1.0) + 4.0 * f.u2(s + h, 1.0) - f.u2(s + 2 * h, 1.0)) / (2 * h);
            const auto& pp = sol.params;
            const double flux = pp.lambda2 * du2 - pp.lambda1 * du1;
            const double p = flux * std::tgamma(1.0 - a / 2.0) / std::tgamma(1.0 + a / 2.0);
            EXPECT_NEAR(p, sol.p, 1e-6) << "alpha " << a << " row " << r;
        }
    }
}
