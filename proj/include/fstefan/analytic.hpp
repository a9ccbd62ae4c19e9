#pragma once

// Closed-form similarity solution of the two-phase fractional Stefan
// (melting) problem in dimensionless variables:
//
//   u1 = 1 - (W(-x/(sqrt(k1) tau^(a/2)); -a/2, 1) - 1) / (W(-p/sqrt(k1); -a/2, 1) - 1)
//   u2 = th * (W(-p/sqrt(k2); -a/2, 1) - W(-x/(sqrt(k2) tau^(a/2)); -a/2, 1)) / W(-p/sqrt(k2); -a/2, 1)
//   S  = p tau^(a/2)
//
// with p the root of the interface balance. At a = 1 everything is written
// with erfc instead of the Wright series.

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fstefan/error.hpp"
#include "fstefan/specfun.hpp"

namespace fstefan {

/// Dimensionless model constants.
struct PhysicalParams {
    double alpha = 1.0;
    double kappa1 = 1.0;
    double kappa2 = 1.0;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double theta_inf = -0.5;  ///< far-field temperature, <= 0 when melting
};

inline std::vector<std::string> violations(const PhysicalParams& pp) {
    std::vector<std::string> out;
    if (!(pp.alpha > 0.0 && pp.alpha <= 1.0)) out.emplace_back("alpha must lie in (0,1]");
    if (!(pp.kappa1 > 0.0)) out.emplace_back("kappa1 must be > 0");
    if (!(pp.kappa2 > 0.0)) out.emplace_back("kappa2 must be > 0");
    if (!(pp.lambda1 > 0.0)) out.emplace_back("lambda1 must be > 0");
    if (!(pp.lambda2 > 0.0)) out.emplace_back("lambda2 must be > 0");
    if (!(pp.theta_inf <= 0.0)) out.emplace_back("theta_inf must be <= 0");
    return out;
}

inline void check(const PhysicalParams& pp) {
    const auto v = violations(pp);
    if (v.empty()) return;
    std::string msg;
    for (const auto& s : v) msg += (msg.empty() ? "" : "; ") + s;
    throw Error(ErrorCode::InvalidInput, msg);
}

/// Dimensional inputs of the melting slab model (SI units).
struct DimensionalInputs {
    double alpha = 1.0;
    double K1 = 1.0, K2 = 1.0, K0 = 1.0;  ///< modified conductivities [J s^-a m^-1 K^-1]
    double c1 = 1.0, c2 = 1.0, c0 = 1.0;  ///< specific heats
    double rho1 = 1.0;
    double L_latent = 1.0;
    double U0 = 1.0, Us = 0.0, Uinf = 0.0;
    double l1 = 1.0;
};

inline PhysicalParams nondimensionalize(const DimensionalInputs& d) {
    std::string bad;
    auto need = [&](bool ok, const char* what) {
        if (!ok) bad += (bad.empty() ? "" : "; ") + std::string(what);
    };
    need(d.K0 > 0 && d.K1 > 0 && d.K2 > 0, "conductivities must be > 0");
    need(d.c0 > 0 && d.c1 > 0 && d.c2 > 0, "specific heats must be > 0");
    need(d.rho1 > 0, "rho1 must be > 0");
    need(d.L_latent > 0, "latent heat must be > 0");
    need(d.l1 > 0, "l1 must be > 0");
    need(d.U0 > d.Us, "U0 must exceed Us");
    if (!bad.empty()) throw Error(ErrorCode::InvalidInput, bad);

    const double dU = d.U0 - d.Us;
    PhysicalParams pp;
    pp.alpha = d.alpha;
    pp.kappa1 = (d.K1 / d.K0) * (d.c0 / d.c1);
    pp.kappa2 = (d.K2 / d.K0) * (d.c0 / d.c2);
    pp.lambda1 = dU * d.K1 * d.c0 / (d.L_latent * d.K0);
    pp.lambda2 = dU * d.K2 * d.c0 / (d.L_latent * d.K0);
    pp.theta_inf = (d.Uinf - d.Us) / dU;
    return pp;
}

/// Factor converting dimensional time t into tau: tau = t * time_scale.
inline double time_scale(const DimensionalInputs& d) {
    return std::pow(d.K0 / (d.c0 * d.rho1 * d.l1 * d.l1), 1.0 / d.alpha);
}

namespace detail {

// Largest accepted rounding estimate of a Wright evaluation before the
// argument is treated as out of range.
inline constexpr double kWrightRoundingLimit = 1e-9;
inline constexpr double kSingularGuard = 1e-14;

inline double wright_checked(double z, double gamma, double delta) {
    const auto r = wright_series(WrightArgs{z, gamma, delta});
    if (r.rounding_bound > kWrightRoundingLimit) {
        std::ostringstream msg;
        msg << "Wright series loses precision at z=" << z << " (rounding bound "
            << r.rounding_bound << ")";
        throw Error(ErrorCode::NonConvergence, msg.str());
    }
    return r.value;
}

}  // namespace detail

/// LHS - RHS of the interface balance, always through the Wright series
/// (valid at alpha = 1 as well, where gamma = -1/2).
inline double transcendental_residual_wright(double p, const PhysicalParams& pp) {
    const double a = pp.alpha;
    const double g = -a / 2.0;
    const double sk1 = std::sqrt(pp.kappa1);
    const double sk2 = std::sqrt(pp.kappa2);

    const double w1_num = detail::wright_checked(-p / sk1, g, 1.0 - a / 2.0);
    const double w1_den = detail::wright_checked(-p / sk1, g, 1.0) - 1.0;
    const double w2_num = detail::wright_checked(-p / sk2, g, 1.0 - a / 2.0);
    const double w2_den = detail::wright_checked(-p / sk2, g, 1.0);
    if (std::fabs(w1_den) < detail::kSingularGuard || std::fabs(w2_den) < detail::kSingularGuard)
        throw Error(ErrorCode::DegenerateInput, "singular Wright denominator in residual");

    const double lhs = p * std::tgamma(1.0 + a / 2.0) / std::tgamma(1.0 - a / 2.0);
    const double rhs = (pp.lambda2 / sk2) * pp.theta_inf * w2_num / w2_den -
                       (pp.lambda1 / sk1) * w1_num / w1_den;
    return lhs - rhs;
}

/// Classical (alpha = 1) residual written with erfc.
inline double transcendental_residual_erfc(double p, const PhysicalParams& pp) {
    const double e1 = erfc(p / (2.0 * std::sqrt(pp.kappa1))) - 1.0;
    const double e2 = erfc(p / (2.0 * std::sqrt(pp.kappa2)));
    if (std::fabs(e1) < detail::kSingularGuard || std::fabs(e2) < detail::kSingularGuard)
        throw Error(ErrorCode::DegenerateInput, "singular erfc denominator in residual");
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    const double rhs =
        pp.lambda2 * pp.theta_inf * std::exp(-p * p / (4.0 * pp.kappa2)) /
            (sqrt_pi * std::sqrt(pp.kappa2) * e2) -
        pp.lambda1 * std::exp(-p * p / (4.0 * pp.kappa1)) / (sqrt_pi * std::sqrt(pp.kappa1) * e1);
    return p / 2.0 - rhs;
}

inline double transcendental_residual(double p, const PhysicalParams& pp) {
    if (!(p > 0.0)) throw Error(ErrorCode::InvalidInput, "p must be > 0");
    return pp.alpha == 1.0 ? transcendental_residual_erfc(p, pp)
                           : transcendental_residual_wright(p, pp);
}

struct Bracket {
    double lo = 0.1;
    double hi = 2.0;
};

/// Root of the interface balance by bisection until the bracket is narrower
/// than tol.
inline double solve_p_exact(const PhysicalParams& pp, Bracket bracket = {}, double tol = 1e-10) {
    check(pp);
    double a = bracket.lo, b = bracket.hi;
    if (!(a > 0.0 && b > a)) throw Error(ErrorCode::InvalidInput, "bracket must satisfy 0 < lo < hi");
    double fa = transcendental_residual(a, pp);
    const double fb = transcendental_residual(b, pp);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) {
        std::ostringstream msg;
        msg << "residual has the same sign at p=" << a << " (" << fa << ") and p=" << b << " ("
            << fb << ")";
        throw Error(ErrorCode::NoSignChange, msg.str());
    }
    while (b - a > tol) {
        const double c = 0.5 * (a + b);
        if (c <= a || c >= b) break;
        const double fc = transcendental_residual(c, pp);
        if (fc == 0.0) return c;
        if ((fc > 0) == (fa > 0)) {
            a = c;
            fa = fc;
        } else {
            b = c;
        }
    }
    return 0.5 * (a + b);
}

struct ExactSolution {
    double p = 0.0;
    PhysicalParams params;
};

inline ExactSolution solve_exact(const PhysicalParams& pp, Bracket bracket = {}, double tol = 1e-12) {
    return {solve_p_exact(pp, bracket, tol), pp};
}

inline double front_exact(double tau, const ExactSolution& sol) {
    if (tau < 0.0) throw Error(ErrorCode::DomainError, "tau must be >= 0");
    return sol.p * std::pow(tau, sol.params.alpha / 2.0);
}

/// Exact temperature field of one solution with the Wright coefficients
/// tabulated once; use this when sampling many points.
class ExactField {
public:
    explicit ExactField(const ExactSolution& sol)
        : sol_(sol), series_(-sol.params.alpha / 2.0, 1.0), classical_(sol.params.alpha == 1.0) {
        const auto& pp = sol_.params;
        if (classical_) {
            den1_ = erfc(sol_.p / (2.0 * std::sqrt(pp.kappa1))) - 1.0;
            den2_ = erfc(sol_.p / (2.0 * std::sqrt(pp.kappa2)));
        } else {
            den1_ = checked(-sol_.p / std::sqrt(pp.kappa1)) - 1.0;
            den2_ = checked(-sol_.p / std::sqrt(pp.kappa2));
        }
    }

    [[nodiscard]] const ExactSolution& solution() const noexcept { return sol_; }

    [[nodiscard]] double front(double tau) const { return front_exact(tau, sol_); }

    [[nodiscard]] double u1(double x, double tau) const {
        const auto& pp = sol_.params;
        if (!(tau > 0.0)) throw Error(ErrorCode::DomainError, "tau must be > 0");
        const double s = front(tau);
        if (x < 0.0 || x > s * (1.0 + 1e-12)) throw Error(ErrorCode::DomainError, "x outside [0, S(tau)]");
        if (x >= s) return 0.0;
        const double num = classical_ ? erfc(x / (2.0 * std::sqrt(pp.kappa1 * tau))) - 1.0
                                      : checked(-x / (std::sqrt(pp.kappa1) * std::pow(tau, pp.alpha / 2.0))) - 1.0;
        return 1.0 - num / den1_;
    }

    [[nodiscard]] double u2(double x, double tau) const {
        const auto& pp = sol_.params;
        if (!(tau > 0.0)) throw Error(ErrorCode::DomainError, "tau must be > 0");
        const double s = front(tau);
        if (x < s * (1.0 - 1e-12)) throw Error(ErrorCode::DomainError, "x below S(tau)");
        if (x <= s) return 0.0;
        const double wx = classical_ ? erfc(x / (2.0 * std::sqrt(pp.kappa2 * tau)))
                                     : checked(-x / (std::sqrt(pp.kappa2) * std::pow(tau, pp.alpha / 2.0)));
        return pp.theta_inf * (den2_ - wx) / den2_;
    }

    /// Phase 1 behind the front, phase 2 ahead of it.
    [[nodiscard]] double u(double x, double tau) const { return x <= front(tau) ? u1(x, tau) : u2(x, tau); }

private:
    [[nodiscard]] double checked(double z) const {
        const auto r = series_.evaluate(z, detail::kWrightRoundingLimit);
        if (r.rounding_bound > detail::kWrightRoundingLimit) {
            std::ostringstream msg;
            msg << "Wright series loses precision at z=" << z << " (rounding bound " << r.rounding_bound << ")";
            throw Error(ErrorCode::NonConvergence, msg.str());
        }
        return r.value;
    }

    ExactSolution sol_;
    WrightSeries series_;
    bool classical_;
    double den1_ = 0.0;
    double den2_ = 0.0;
};

inline double u1_exact(double x, double tau, const ExactSolution& sol) { return ExactField(sol).u1(x, tau); }

inline double u2_exact(double x, double tau, const ExactSolution& sol) { return ExactField(sol).u2(x, tau); }

inline double temperature_exact(double x, double tau, const ExactSolution& sol) {
    return ExactField(sol).u(x, tau);
}

}  // namespace fstefan
