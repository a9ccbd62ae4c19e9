#pragma once

// Front-fixing implicit finite-difference scheme.
//
// Phase 1 (liquid, 0 <= x <= S) uses v1 = x / (p tau^(a/2)) and the auxiliary
// function ubar1 = u1 * tau^-a. Phase 2 (solid, S <= x <= L) uses
// v2 = (x - p tau^(a/2)) / (L - p tau^(a/2)) and ubar2 = u2 / (L - p tau^(a/2))^2.
// Both map to a fixed rectangle in (v, tau) where each time level is one
// tridiagonal solve with a full memory sum over the previous levels.

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "fstefan/analytic.hpp"
#include "fstefan/error.hpp"
#include "fstefan/fracquad.hpp"
#include "fstefan/tridiag.hpp"

namespace fstefan {

struct MeshConfig {
    int m1 = 100;             ///< phase-1 spatial intervals
    int m2 = 500;             ///< phase-2 spatial intervals
    int n = 400;              ///< time steps
    double ratio = 10.0;      ///< truncation L = l2/l1
    double tau0_factor = 1e-3;///< tau0 = tau0_factor * dtau
};

inline std::vector<std::string> violations(const MeshConfig& mesh) {
    std::vector<std::string> out;
    if (mesh.m1 < 2) out.emplace_back("m1 must be >= 2");
    if (mesh.m2 < 2) out.emplace_back("m2 must be >= 2");
    if (mesh.n < 1) out.emplace_back("n must be >= 1");
    if (!(mesh.ratio > 1.0)) out.emplace_back("ratio must be > 1");
    if (!(mesh.tau0_factor > 0.0 && mesh.tau0_factor < 1.0)) out.emplace_back("tau0_factor must lie in (0,1)");
    return out;
}

inline void check(const MeshConfig& mesh) {
    const auto v = violations(mesh);
    if (v.empty()) return;
    std::string msg;
    for (const auto& s : v) msg += (msg.empty() ? "" : "; ") + s;
    throw Error(ErrorCode::InvalidInput, msg);
}

inline double transform_v1(double x, double tau, double p, double alpha) {
    return x / (p * std::pow(tau, alpha / 2.0));
}

inline double inverse_v1(double v, double tau, double p, double alpha) {
    return v * p * std::pow(tau, alpha / 2.0);
}

inline double transform_v2(double x, double tau, double p, double alpha, double L) {
    const double s = p * std::pow(tau, alpha / 2.0);
    if (!(L > s)) throw Error(ErrorCode::DegenerateInput, "front reached the truncation boundary");
    return (x - s) / (L - s);
}

inline double inverse_v2(double v, double tau, double p, double alpha, double L) {
    const double s = p * std::pow(tau, alpha / 2.0);
    return v * (L - s) + s;
}

enum class Phase { Liquid = 1, Solid = 2 };

/// dtau = 1 / (n p^(2/alpha)), so that n * dtau = p^(-2/alpha) and the
/// prescribed front p tau^(alpha/2) reaches 1 at the last level.
inline double time_step(double p, double alpha, int n) {
    return 1.0 / (n * std::pow(p, 2.0 / alpha));
}

/// Auxiliary-function values on the fixed (v, tau) rectangle of one phase for
/// one candidate front coefficient p.
///
/// Row j = 0 holds the initial state. Boundary columns are filled for every j
/// at construction; interior rows 1..n are produced by advance_phase().
class PhaseGrid {
public:
    PhaseGrid(Phase phase, double p, const PhysicalParams& params, const MeshConfig& mesh)
        : phase_(phase), p_(p), params_(params), mesh_(mesh) {
        check(params);
        check(mesh);
        if (!(p > 0.0)) throw Error(ErrorCode::InvalidInput, "p must be > 0");
        m_ = phase == Phase::Liquid ? mesh.m1 : mesh.m2;
        n_ = mesh.n;
        dtau_ = time_step(p, params.alpha, n_);
        tau0_ = mesh.tau0_factor * dtau_;
        weights_ = std::make_shared<const WeightTable>(n_, params.alpha, dtau_);
        data_.assign(static_cast<std::size_t>(m_ + 1) * (n_ + 1), 0.0);

        const double a = params.alpha;
        if (phase == Phase::Liquid) {
            // initial row stays zero, corner included
            for (int j = 1; j <= n_; ++j) at(0, j) = std::pow(tau(j), -a);
        } else {
            const double L = mesh.ratio;
            // initial state on the whole j = 0 row, corner included
            const double w0 = L - p * std::pow(tau0_, a / 2.0);
            for (int i = 0; i <= m_; ++i) at(i, 0) = params.theta_inf / (w0 * w0);
            for (int j = 1; j <= n_; ++j) {
                const double w = L - p * std::pow(tau(j), a / 2.0);
                if (!(w > 0.0)) throw Error(ErrorCode::DegenerateInput, "front reached the truncation boundary");
                at(m_, j) = params.theta_inf / (w * w);
            }
        }
    }

    [[nodiscard]] Phase phase() const noexcept { return phase_; }
    [[nodiscard]] int m() const noexcept { return m_; }
    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] double p() const noexcept { return p_; }
    [[nodiscard]] double dtau() const noexcept { return dtau_; }
    [[nodiscard]] double dv() const noexcept { return 1.0 / m_; }
    [[nodiscard]] double tau0() const noexcept { return tau0_; }
    [[nodiscard]] const PhysicalParams& params() const noexcept { return params_; }
    [[nodiscard]] const MeshConfig& mesh() const noexcept { return mesh_; }
    [[nodiscard]] const WeightTable& weights() const noexcept { return *weights_; }

    /// tau_j = j * dtau (tau_0 = 0 on the grid).
    [[nodiscard]] double tau(int j) const noexcept { return j * dtau_; }
    /// Time used when a formula needs a positive time at level j; tau0 at j = 0.
    [[nodiscard]] double tau_eff(int j) const noexcept { return j == 0 ? tau0_ : tau(j); }
    [[nodiscard]] double tau_final() const noexcept { return n_ * dtau_; }

    [[nodiscard]] double& at(int i, int j) { return data_[index(i, j)]; }
    [[nodiscard]] double at(int i, int j) const { return data_[index(i, j)]; }

    /// All nodes of level j, i = 0..m.
    [[nodiscard]] std::span<const double> row(int j) const {
        return {data_.data() + index(0, j), static_cast<std::size_t>(m_) + 1};
    }
    [[nodiscard]] std::span<double> row(int j) {
        return {data_.data() + index(0, j), static_cast<std::size_t>(m_) + 1};
    }

    /// Highest level whose interior has been computed.
    [[nodiscard]] int filled_through() const noexcept { return filled_; }
    void mark_filled(int j) noexcept { filled_ = j; }

    [[nodiscard]] std::size_t dominance_violations() const noexcept { return dominance_violations_; }
    void add_dominance_violations(std::size_t v) noexcept { dominance_violations_ += v; }

    [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }

private:
    [[nodiscard]] std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * (m_ + 1) + i;
    }

    Phase phase_;
    double p_;
    PhysicalParams params_;
    MeshConfig mesh_;
    int m_ = 0;
    int n_ = 0;
    double dtau_ = 0.0;
    double tau0_ = 0.0;
    int filled_ = 0;
    std::size_t dominance_violations_ = 0;
    std::shared_ptr<const WeightTable> weights_;
    std::vector<double> data_;
};

namespace detail {

inline void require_history(const PhaseGrid& g, int k) {
    if (k < 0 || k >= g.n())
        throw Error(ErrorCode::InvalidState, "time index " + std::to_string(k) + " outside 0..n-1");
    if (g.filled_through() < k)
        throw Error(ErrorCode::InvalidState, "history rows up to " + std::to_string(k) +
                                                 " are required, only " +
                                                 std::to_string(g.filled_through()) + " present");
}

// Accumulates, for interior rows i = 1..m-1,
//   sum_{j=0}^{k} r_j lap_{i,j} + sum_{j=1}^{k} qcoef_j f_i (u_{i+1,j} - u_{i-1,j})
// into acc[i-1].
inline void accumulate_history(const PhaseGrid& g, int k, std::span<const double> r,
                               std::span<const double> qcoef, std::span<const double> f,
                               std::span<double> acc) {
    const int m = g.m();
    for (int j = 0; j <= k; ++j) {
        const auto u = g.row(j);
        const double rj = r[j];
        const double qj = j >= 1 ? qcoef[j] : 0.0;
        for (int i = 1; i < m; ++i) {
            acc[i - 1] += rj * (u[i - 1] - 2.0 * u[i] + u[i + 1]) + qj * f[i] * (u[i + 1] - u[i - 1]);
        }
    }
}

}  // namespace detail

/// System for level k+1 of the liquid phase.
inline TridiagonalSystem assemble_phase1_step(const PhaseGrid& g, int k) {
    if (g.phase() != Phase::Liquid) throw Error(ErrorCode::InvalidState, "phase-1 assembly on a phase-2 grid");
    detail::require_history(g, k);

    const auto& pp = g.params();
    const double a = pp.alpha;
    const int m = g.m();
    const double dv = g.dv();
    const double p = g.p();
    const double dtau = g.dtau();

    const auto w = g.weights().weights(k);
    const double rscale = pp.kappa1 / (p * p * std::tgamma(a) * dv * dv);
    std::vector<double> r(k + 2), qcoef(k + 2, 0.0), f(m + 1);
    for (int j = 0; j <= k + 1; ++j) r[j] = w.c[j] * rscale;
    // q^1_{i,j} = a i tau_j^(a-1) dtau / 4 = qcoef_j * i
    for (int j = 1; j <= k + 1; ++j) qcoef[j] = a * std::pow(g.tau(j), a - 1.0) * dtau / 4.0;
    for (int i = 0; i <= m; ++i) f[i] = i;

    TridiagonalSystem sys(static_cast<std::size_t>(m) - 1);
    detail::accumulate_history(g, k, r, qcoef, f, sys.rhs);

    const double tau0a = std::pow(g.tau0(), a);
    const double rk = r[k + 1];
    const double diag = std::pow(g.tau(k + 1), a) + 2.0 * rk;
    for (int i = 1; i < m; ++i) {
        const double q = qcoef[k + 1] * f[i];
        sys.sub[i - 1] = -rk + q;
        sys.diag[i - 1] = diag;
        sys.super[i - 1] = -rk - q;
        sys.rhs[i - 1] += g.at(i, 0) * tau0a;
    }
    sys.rhs.front() -= sys.sub.front() * g.at(0, k + 1);
    sys.rhs.back() -= sys.super.back() * g.at(m, k + 1);
    sys.sub.front() = 0.0;
    sys.super.back() = 0.0;
    return sys;
}

/// System for level k+1 of the solid phase.
inline TridiagonalSystem assemble_phase2_step(const PhaseGrid& g, int k) {
    if (g.phase() != Phase::Solid) throw Error(ErrorCode::InvalidState, "phase-2 assembly on a phase-1 grid");
    detail::require_history(g, k);

    const auto& pp = g.params();
    const double a = pp.alpha;
    const int m = g.m();
    const double dv = g.dv();
    const double p = g.p();
    const double dtau = g.dtau();
    const double L = g.mesh().ratio;

    const double width = L - p * std::pow(g.tau(k + 1), a / 2.0);
    if (!(width > 0.0)) throw Error(ErrorCode::DegenerateInput, "front reached the truncation boundary");

    const auto w = g.weights().weights(k);
    const double rscale = pp.kappa2 / (std::tgamma(a) * dv * dv);
    std::vector<double> r(k + 2), qcoef(k + 2, 0.0), f(m + 1);
    for (int j = 0; j <= k + 1; ++j) r[j] = w.c[j] * rscale;
    // q^2_{i,j} = a p (i dv - 1)(p tau_j^(a-1) - L tau_j^(a/2-1)) dtau / (4 dv) = qcoef_j * f_i
    for (int j = 1; j <= k + 1; ++j) {
        const double t = g.tau(j);
        qcoef[j] = a * p * (p * std::pow(t, a - 1.0) - L * std::pow(t, a / 2.0 - 1.0)) * dtau / (4.0 * dv);
    }
    for (int i = 0; i <= m; ++i) f[i] = i * dv - 1.0;

    TridiagonalSystem sys(static_cast<std::size_t>(m) - 1);
    detail::accumulate_history(g, k, r, qcoef, f, sys.rhs);

    const double w0 = L - p * std::pow(g.tau0(), a / 2.0);
    const double rk = r[k + 1];
    const double diag = width * width + 2.0 * rk;
    for (int i = 1; i < m; ++i) {
        const double q = qcoef[k + 1] * f[i];
        sys.sub[i - 1] = -rk + q;
        sys.diag[i - 1] = diag;
        sys.super[i - 1] = -rk - q;
        sys.rhs[i - 1] += g.at(i, 0) * w0 * w0;
    }
    sys.rhs.front() -= sys.sub.front() * g.at(0, k + 1);
    sys.rhs.back() -= sys.super.back() * g.at(m, k + 1);
    sys.sub.front() = 0.0;
    sys.super.back() = 0.0;
    return sys;
}

inline TridiagonalSystem assemble_step(const PhaseGrid& g, int k) {
    return g.phase() == Phase::Liquid ? assemble_phase1_step(g, k) : assemble_phase2_step(g, k);
}

/// Fills interior rows filled_through()+1 .. through.
inline void advance_phase(PhaseGrid& g, int through) {
    if (through > g.n()) throw Error(ErrorCode::InvalidState, "cannot advance past level n");
    for (int k = g.filled_through(); k < through; ++k) {
        try {
            const auto sys = assemble_step(g, k);
            g.add_dominance_violations(dominance_violations(sys));
            const auto x = thomas_solve(sys);
            auto row = g.row(k + 1);
            for (std::size_t i = 0; i < x.size(); ++i) row[i + 1] = x[i];
            g.mark_filled(k + 1);
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "phase " << static_cast<int>(g.phase()) << ", step k=" << k << ", p=" << g.p()
                << ": " << e.what();
            throw Error(e.code(), msg.str());
        }
    }
}

inline void advance_phase(PhaseGrid& g) { advance_phase(g, g.n()); }

/// Physical temperature at node (i, j).
inline double recovered_u(const PhaseGrid& g, int i, int j) {
    const double a = g.params().alpha;
    const double t = g.tau_eff(j);
    if (g.phase() == Phase::Liquid) return g.at(i, j) * std::pow(t, a);
    const double w = g.mesh().ratio - g.p() * std::pow(t, a / 2.0);
    return g.at(i, j) * w * w;
}

/// Physical coordinate of node (i, j).
inline double recovered_x(const PhaseGrid& g, int i, int j) {
    const double a = g.params().alpha;
    const double s = g.p() * std::pow(g.tau_eff(j), a / 2.0);
    const double v = i * g.dv();
    if (g.phase() == Phase::Liquid) return v * s;
    return v * (g.mesh().ratio - s) + s;
}

struct PhysicalSample {
    int i = 0;
    int j = 0;
    double x = 0.0;
    double tau = 0.0;  ///< tau0 on the initial row
    double u = 0.0;
};

inline std::vector<PhysicalSample> recover_physical(const PhaseGrid& g) {
    std::vector<PhysicalSample> out;
    out.reserve(static_cast<std::size_t>(g.m() + 1) * (g.filled_through() + 1));
    for (int j = 0; j <= g.filled_through(); ++j)
        for (int i = 0; i <= g.m(); ++i)
            out.push_back({i, j, recovered_x(g, i, j), g.tau_eff(j), recovered_u(g, i, j)});
    return out;
}

}  // namespace fstefan
