#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "fstefan/error.hpp"

namespace fstefan {

/// Tridiagonal system. Row i reads
///   sub[i] x[i-1] + diag[i] x[i] + super[i] x[i+1] = rhs[i],
/// with sub[0] and super[size-1] ignored.
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;
    std::vector<double> rhs;

    TridiagonalSystem() = default;
    explicit TridiagonalSystem(std::size_t n) : sub(n, 0.0), diag(n, 0.0), super(n, 0.0), rhs(n, 0.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }
};

/// Number of rows with |diag| < |sub| + |super|.
inline std::size_t dominance_violations(const TridiagonalSystem& sys) {
    const std::size_t n = sys.size();
    std::size_t bad = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double off = (i > 0 ? std::fabs(sys.sub[i]) : 0.0) + (i + 1 < n ? std::fabs(sys.super[i]) : 0.0);
        if (std::fabs(sys.diag[i]) < off) ++bad;
    }
    return bad;
}

/// Thomas algorithm, O(n). Throws ZeroPivot instead of dividing by zero.
inline std::vector<double> thomas_solve(const TridiagonalSystem& sys) {
    const std::size_t n = sys.size();
    if (n == 0) throw Error(ErrorCode::InvalidInput, "empty tridiagonal system");
    if (sys.sub.size() != n || sys.super.size() != n || sys.rhs.size() != n)
        throw Error(ErrorCode::LengthMismatch, "tridiagonal diagonals differ in length");

    std::vector<double> cp(n), dp(n), x(n);
    auto pivot_check = [](double piv, std::size_t row) {
        if (piv == 0.0 || !std::isfinite(piv))
            throw Error(ErrorCode::ZeroPivot, "zero pivot at row " + std::to_string(row));
    };

    pivot_check(sys.diag[0], 0);
    cp[0] = sys.super[0] / sys.diag[0];
    dp[0] = sys.rhs[0] / sys.diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double piv = sys.diag[i] - sys.sub[i] * cp[i - 1];
        pivot_check(piv, i);
        cp[i] = sys.super[i] / piv;
        dp[i] = (sys.rhs[i] - sys.sub[i] * dp[i - 1]) / piv;
    }
    x[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
}

}  // namespace fstefan
