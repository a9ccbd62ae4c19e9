#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>
#include <cstddef>

#include "fstefan/error.hpp"

namespace fstefan {

/// Arguments for the two-parameter Wright function W(z; gamma, delta).
struct WrightArgs {
    double z = 0.0;
    double gamma = -0.5;
    double delta = 1.0;
    double tol = 1e-13;
    int max_terms = 700;
};

struct WrightResult {
    double value = 0.0;
    int terms = 0;              ///< number of series terms summed
    double term_bound = 0.0;    ///< bound on the omitted tail
    double rounding_bound = 0.0;///< accumulated floating-point error estimate
};

namespace detail {

using real_ext = long double;

inline real_ext pi_ext() { return std::numbers::pi_v<long double>; }

inline bool is_nonpositive_integer(real_ext x) {
    return x <= 0 && x == std::nearbyint(x);
}

// sin(pi x) with exact zeros at the integers.
inline real_ext sin_pi(real_ext x) {
    real_ext r = x - 2 * std::nearbyint(x / 2);  // r in [-1, 1]
    if (r == 0 || std::fabs(r) == 1) return 0;
    if (r > 0.5L) r = 1 - r;
    else if (r < -0.5L) r = -1 - r;
    return std::sin(pi_ext() * r);
}

// log|1/Gamma(x)| and its sign; sign == 0 at the poles of Gamma.
struct LogRecipGamma {
    real_ext log_abs = 0;
    int sign = 0;
};

inline LogRecipGamma log_recip_gamma(real_ext x) {
    if (is_nonpositive_integer(x)) return {-std::numeric_limits<real_ext>::infinity(), 0};
    if (x > 0) return {-std::lgamma(x), 1};
    // reflection: 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
    const real_ext s = sin_pi(x);
    return {std::lgamma(1 - x) + std::log(std::fabs(s)) - std::log(pi_ext()), s > 0 ? 1 : -1};
}

// Upper envelope of log|1/Gamma(x)| with |sin(pi x)| replaced by 1. Smooth in
// x, so it gives a reliable bound on series terms that vanish at the poles.
inline real_ext log_recip_gamma_envelope(real_ext x) {
    if (x > 0) return -std::lgamma(x);
    return std::lgamma(1 - x) - std::log(pi_ext());
}

}  // namespace detail

/// 1/Gamma(x). Exactly zero at x = 0, -1, -2, ...
inline double reciprocal_gamma(double x) {
    if (detail::is_nonpositive_integer(x)) return 0.0;
    if (x > 0) {
        if (x < 170.0) return 1.0 / std::tgamma(x);
        return std::exp(-std::lgamma(x));
    }
    const auto lr = detail::log_recip_gamma(x);
    return static_cast<double>(lr.sign * std::exp(lr.log_abs));
}

/// Series evaluator of W(z; gamma, delta) = sum_k z^k / (k! Gamma(gamma k + delta))
/// for fixed (gamma, delta). Coefficients are tabulated once, so one object
/// can be evaluated at many arguments.
///
/// Summation runs in extended precision. Terms are added until the envelope of
/// the next term drops below tol * |sum| (tol absolutely when the sum is near
/// zero) while the envelope is already decaying geometrically. evaluate()
/// throws NonConvergence if max_terms is hit first. No asymptotic expansion is
/// used: for large |z| the caller should look at rounding_bound, which grows
/// with the cancellation between terms.
class WrightSeries {
public:
    WrightSeries(double gamma, double delta, double tol = 1e-13, int max_terms = 700)
        : gamma_(gamma), delta_(delta), tol_(tol), max_terms_(max_terms) {
        if (!(gamma > -1.0)) throw Error(ErrorCode::InvalidInput, "Wright gamma must be > -1");
        if (!(tol > 0.0) || max_terms < 1)
            throw Error(ErrorCode::InvalidInput, "Wright tol must be > 0 and max_terms >= 1");
        const auto n = static_cast<std::size_t>(max_terms) + 2;
        log_coef_.resize(n);
        sign_.resize(n);
        log_env_.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            const detail::real_ext x = static_cast<detail::real_ext>(gamma) * k + delta;
            const detail::real_ext lf = std::lgamma(static_cast<detail::real_ext>(k) + 1);
            const auto rg = detail::log_recip_gamma(x);
            log_coef_[k] = rg.log_abs - lf;
            sign_[k] = rg.sign;
            log_env_[k] = detail::log_recip_gamma_envelope(x) - lf;
        }
    }

    [[nodiscard]] double gamma() const noexcept { return gamma_; }
    [[nodiscard]] double delta() const noexcept { return delta_; }

    /// `max_rounding` aborts early with NonConvergence once the rounding
    /// estimate can only exceed it.
    [[nodiscard]] WrightResult evaluate(double zd,
                                        double max_rounding = std::numeric_limits<double>::infinity()) const {
        if (!std::isfinite(zd)) throw Error(ErrorCode::InvalidInput, "Wright argument is not finite");
        using detail::real_ext;
        WrightResult out;
        if (zd == 0.0) {
            out.value = reciprocal_gamma(delta_);
            out.terms = 1;
            return out;
        }
        const real_ext z = zd;
        const real_ext log_abs_z = std::log(std::fabs(z));
        const real_ext tol = tol_;

        real_ext sum = 0;
        real_ext abs_sum = 0;
        for (int k = 0; k < max_terms_; ++k) {
            if (sign_[k] != 0) {
                const real_ext mag = std::exp(k * log_abs_z + log_coef_[k]);
                const int zsign = (z < 0 && (k % 2 == 1)) ? -1 : 1;
                sum += zsign * sign_[k] * mag;
                abs_sum += mag;
                if (abs_sum * std::numeric_limits<real_ext>::epsilon() * (k + 1) > max_rounding) {
                    std::ostringstream msg;
                    msg << "Wright series rounding bound exceeds " << max_rounding << " at z=" << zd;
                    throw Error(ErrorCode::NonConvergence, msg.str());
                }
            }
            const real_ext e1 = std::exp((k + 1) * log_abs_z + log_env_[k + 1]);
            const real_ext e2 = std::exp((k + 2) * log_abs_z + log_env_[k + 2]);
            const bool decaying = e2 < 0.5L * e1;
            const real_ext tail = 2 * e1;  // geometric tail with ratio < 1/2
            const real_ext threshold = std::fabs(sum) > tol ? tol * std::fabs(sum) : tol;
            if (decaying && tail <= threshold) {
                out.value = static_cast<double>(sum);
                out.terms = k + 1;
                out.term_bound = static_cast<double>(tail);
                out.rounding_bound = static_cast<double>(
                    abs_sum * std::numeric_limits<real_ext>::epsilon() * (k + 1));
                return out;
            }
        }
        std::ostringstream msg;
        msg << "Wright series did not converge in " << max_terms_ << " terms (z=" << zd
            << ", gamma=" << gamma_ << ", delta=" << delta_ << ")";
        throw Error(ErrorCode::NonConvergence, msg.str());
    }

private:
    double gamma_;
    double delta_;
    double tol_;
    int max_terms_;
    std::vector<detail::real_ext> log_coef_;
    std::vector<int> sign_;
    std::vector<detail::real_ext> log_env_;
};

inline WrightResult wright_series(const WrightArgs& args) {
    if (!std::isfinite(args.z)) throw Error(ErrorCode::InvalidInput, "Wright argument is not finite");
    return WrightSeries(args.gamma, args.delta, args.tol, args.max_terms).evaluate(args.z);
}

inline double wright(const WrightArgs& args) { return wright_series(args).value; }

inline double wright(double z, double gamma, double delta) {
    return wright_series(WrightArgs{z, gamma, delta}).value;
}

/// Complementary error function (libm).
inline double erfc(double x) { return std::erfc(x); }

}  // namespace fstefan
