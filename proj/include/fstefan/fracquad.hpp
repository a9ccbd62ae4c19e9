#pragma once

// Product-trapezoidal weights for the fractional memory integral
//
//   int_0^{tau_{k+1}} (tau_{k+1} - xi)^(alpha-1) f(xi) dxi  ~=  sum_j c_{j,k+1} f(tau_j)
//
// on the uniform grid tau_j = j * dtau. The weights are exact for
// piecewise-linear f.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fstefan/error.hpp"

namespace fstefan {

struct MemoryWeights {
    int k = 0;           ///< weights target level k+1
    double alpha = 1.0;
    double dtau = 1.0;
    std::vector<double> c;  ///< c[j] = c_{j,k+1}, j = 0..k+1
};

namespace detail {

// Relative error above which the difference-of-powers forms switch to the
// binomial expansion.
inline constexpr double kCancellationLimit = 1e-13;

// (d+2)^b + d^b - 2 (d+1)^b for d >= 0.
inline double second_difference_pow(double d, double b) {
    using ld = long double;
    const ld bl = b, dl = d;
    const ld direct = std::pow(dl + 2, bl) + std::pow(dl, bl) - 2 * std::pow(dl + 1, bl);
    const ld est = 4 * std::numeric_limits<ld>::epsilon() * std::pow(dl + 2, bl) / std::fabs(direct);
    if (d < 2.0 || est <= kCancellationLimit) return static_cast<double>(direct);

    // d^b * sum_{n>=2} C(b,n) (2^n - 2) d^-n
    const double x = 1.0 / d;
    double binom = b * (b - 1.0) / 2.0;  // C(b,2)
    double xn = x * x;
    double pow2 = 4.0;
    double sum = 0.0;
    for (int n = 2; n < 80; ++n) {
        const double term = binom * (pow2 - 2.0) * xn;
        sum += term;
        if (std::fabs(term) <= 1e-18 * std::fabs(sum)) break;
        binom *= (b - n) / (n + 1.0);
        xn *= x;
        pow2 *= 2.0;
    }
    return std::pow(d, b) * sum;
}

// k^(a+1) - (k - a) (k+1)^a for k >= 0.
inline double first_weight_pow(double k, double a) {
    using ld = long double;
    const ld al = a, kl = k;
    const ld direct = std::pow(kl, al + 1) - (kl - al) * std::pow(kl + 1, al);
    if (k < 2.0) return static_cast<double>(direct);
    const ld est = 4 * std::numeric_limits<ld>::epsilon() * std::pow(kl + 1, al + 1) / std::fabs(direct);
    if (est <= kCancellationLimit) return static_cast<double>(direct);

    // k^(a+1) * sum_{n>=2} (a C(a,n-1) - C(a,n)) k^-n
    const double x = 1.0 / k;
    double binom_prev = a;                  // C(a,1)
    double binom = a * (a - 1.0) / 2.0;     // C(a,2)
    double xn = x * x;
    double sum = 0.0;
    for (int n = 2; n < 80; ++n) {
        const double term = (a * binom_prev - binom) * xn;
        sum += term;
        if (std::fabs(term) <= 1e-18 * std::fabs(sum)) break;
        binom_prev = binom;
        binom *= (a - n) / (n + 1.0);
        xn *= x;
    }
    return std::pow(k, a + 1.0) * sum;
}

}  // namespace detail

inline MemoryWeights trap_weights(int k, double alpha, double dtau) {
    if (k < 0) throw Error(ErrorCode::InvalidInput, "time index k must be >= 0");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidInput, "alpha must lie in (0,1]");
    if (!(dtau > 0.0)) throw Error(ErrorCode::InvalidInput, "dtau must be > 0");

    MemoryWeights w{k, alpha, dtau, std::vector<double>(static_cast<std::size_t>(k) + 2)};
    const double scale = std::pow(dtau, alpha) / (alpha * (alpha + 1.0));
    const double b = alpha + 1.0;
    w.c[0] = scale * detail::first_weight_pow(k, alpha);
    for (int j = 1; j <= k; ++j) w.c[j] = scale * detail::second_difference_pow(k - j, b);
    w.c[k + 1] = scale;
    return w;
}

/// Weights for every level of a run of n steps, built once. Interior
/// weights depend on k - j only, so each level is an O(k) copy.
class WeightTable {
public:
    WeightTable(int n, double alpha, double dtau) : n_(n), alpha_(alpha), dtau_(dtau) {
        if (n < 1) throw Error(ErrorCode::InvalidInput, "number of steps must be >= 1");
        if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidInput, "alpha must lie in (0,1]");
        if (!(dtau > 0.0)) throw Error(ErrorCode::InvalidInput, "dtau must be > 0");
        scale_ = std::pow(dtau, alpha) / (alpha * (alpha + 1.0));
        first_.resize(n);
        second_.resize(n);
        for (int d = 0; d < n; ++d) {
            first_[d] = scale_ * detail::first_weight_pow(d, alpha);
            second_[d] = scale_ * detail::second_difference_pow(d, alpha + 1.0);
        }
    }

    [[nodiscard]] int n() const noexcept { return n_; }

    /// Same values as trap_weights(k, alpha, dtau), k in 0..n-1.
    [[nodiscard]] MemoryWeights weights(int k) const {
        if (k < 0 || k >= n_) throw Error(ErrorCode::InvalidInput, "time index outside the table");
        MemoryWeights w{k, alpha_, dtau_, std::vector<double>(static_cast<std::size_t>(k) + 2)};
        w.c[0] = first_[k];
        for (int j = 1; j <= k; ++j) w.c[j] = second_[k - j];
        w.c[k + 1] = scale_;
        return w;
    }

private:
    int n_;
    double alpha_;
    double dtau_;
    double scale_ = 0.0;
    std::vector<double> first_;
    std::vector<double> second_;
};

/// sum_{j=0}^{upto} c_{j,k+1} * values[j]
inline double history_sum(std::span<const double> values, const MemoryWeights& w, int upto) {
    if (upto < 0 || upto > w.k + 1)
        throw Error(ErrorCode::LengthMismatch, "upto outside 0..k+1");
    if (values.size() < static_cast<std::size_t>(upto) + 1)
        throw Error(ErrorCode::LengthMismatch,
                    "need " + std::to_string(upto + 1) + " values, got " + std::to_string(values.size()));
    double s = 0.0;
    for (int j = 0; j <= upto; ++j) s += w.c[j] * values[j];
    return s;
}

}  // namespace fstefan
