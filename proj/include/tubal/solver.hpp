#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tubal/errors.hpp"
#include "tubal/regularizers.hpp"
#include "tubal/tensor3.hpp"
#include "tubal/tsvd.hpp"

namespace tubal {

// Regularizer family plus shape ratios, without a threshold: the solver
// re-derives lambda = 1/rho every iteration.
struct RegShape {
    RegKind kind = RegKind::Soft;
    double p = 0.3;
    double sigma_ratio = std::sqrt(2.0);
    double gamma_ratio = 1.0;

    RegularizerSpec at_lambda(double lambda) const {
        RegularizerSpec s;
        s.kind = kind;
        s.lambda = lambda;
        s.p = p;
        s.sigma_ratio = sigma_ratio;
        s.gamma_ratio = gamma_ratio;
        return s;
    }
};

struct SolverConfig {
    RegShape reg;
    double rho0 = 1e-4;   // initial penalty
    double mu = 1.2;      // geometric penalty growth, > 1
    double xi = 1e-4;     // stopping tolerance on the three change norms
    int max_iters = 500;
    double rho_cap = 1e30;  // safety stop before the penalty overflows
};

inline void validate(const SolverConfig& cfg) {
    if (!(cfg.rho0 > 0.0)) throw InvalidParam("solver: rho0 must be positive");
    if (!(cfg.mu > 1.0)) throw InvalidParam("solver: mu must exceed 1");
    if (!(cfg.xi > 0.0)) throw InvalidParam("solver: xi must be positive");
    if (cfg.max_iters < 1) throw InvalidParam("solver: max_iters must be positive");
    validate(cfg.reg.at_lambda(1.0));
}

// ADMM iterates: the estimate m, the complement fill e (zero on the
// observed set), the multiplier p and the current penalty rho.
struct SolverState {
    Tensor3 m, e, p;
    double rho = 0.0;
    int iter = 0;
};

struct TraceRow {
    int iter;
    double rho;
    double rre;  // NaN when no ground truth was supplied
    double chg_m, chg_e, chg_x;
    double p_norm;
};

struct Trace {
    std::vector<TraceRow> rows;
};

enum class StopReason { Converged, MaxIters };

inline std::string stop_reason_name(StopReason r) {
    return r == StopReason::Converged ? "converged" : "max_iters";
}

struct SolveResult {
    Tensor3 m;
    Trace trace;
    StopReason stop = StopReason::MaxIters;
};

// Complement fill update: on the unobserved set the quadratic subproblem is
// unconstrained and separates per entry, giving e = -m + p/rho there; the
// observed set is pinned to zero.
inline Tensor3 update_e(const SolverState& state, const Tensor3& x_obs, const Mask& mask) {
    require_same_dims(state.m, x_obs, "update_e: dims differ");
    if (!mask.same_dims(x_obs)) throw DimMismatch("update_e: mask dims differ");
    Tensor3 e(x_obs.n1(), x_obs.n2(), x_obs.n3());
    const double inv_rho = 1.0 / state.rho;
    const double* pm = state.m.data();
    const double* pp = state.p.data();
    double* pe = e.data();
    for (std::size_t t = 0; t < e.size(); ++t)
        pe[t] = mask.observed_flat(t) ? 0.0 : -pm[t] + pp[t] * inv_rho;
    return e;
}

// Estimate update: threshold the singular tubes of r = x - e + p/rho at
// lambda = 1/rho. Expects state.e to already hold the fresh fill.
inline Tensor3 update_m(const SolverState& state, const Tensor3& x_obs, const Mask& mask,
                        const RegShape& reg) {
    (void)mask;
    require_same_dims(state.e, x_obs, "update_m: dims differ");
    Tensor3 r(x_obs.n1(), x_obs.n2(), x_obs.n3());
    const double inv_rho = 1.0 / state.rho;
    const double* px = x_obs.data();
    const double* pe = state.e.data();
    const double* pp = state.p.data();
    double* pr = r.data();
    for (std::size_t t = 0; t < r.size(); ++t) pr[t] = px[t] - pe[t] + pp[t] * inv_rho;
    return gtsvt(r, reg.at_lambda(inv_rho));
}

inline Tensor3 update_p(const SolverState& state, const Tensor3& x_obs) {
    require_same_dims(state.m, x_obs, "update_p: dims differ");
    Tensor3 p(x_obs.n1(), x_obs.n2(), x_obs.n3());
    const double* px = x_obs.data();
    const double* pm = state.m.data();
    const double* pe = state.e.data();
    const double* pp = state.p.data();
    double* out = p.data();
    for (std::size_t t = 0; t < p.size(); ++t)
        out[t] = pp[t] + state.rho * (px[t] - pm[t] - pe[t]);
    // Theoretical bound on the multiplier; a violation means the
    // thresholding introduced more bias than lambda, i.e. a bug.
    double psq = 0.0;
    for (std::size_t t = 0; t < p.size(); ++t) psq += out[t] * out[t];
    const double bound = std::min(x_obs.n1(), x_obs.n2()) + 1e-6;
    if (psq > bound)
        throw MultiplierBoundViolated("update_p: ||p||_F^2 exceeds min(n1,n2)");
    return p;
}

// Feasibility and complement residuals of the stationarity conditions;
// diagnostic only.
inline std::pair<double, double> kkt_residuals(const SolverState& state, const Tensor3& x_obs,
                                               const Mask& mask) {
    require_same_dims(state.m, x_obs, "kkt_residuals: dims differ");
    const double* px = x_obs.data();
    const double* pm = state.m.data();
    const double* pe = state.e.data();
    double feas_sq = 0.0, comp_sq = 0.0;
    for (std::size_t t = 0; t < x_obs.size(); ++t) {
        const double f = px[t] - pm[t] - pe[t];
        feas_sq += f * f;
        if (!mask.observed_flat(t)) {
            const double c = pm[t] + pe[t];
            comp_sq += c * c;
        }
    }
    return {std::sqrt(feas_sq), std::sqrt(comp_sq)};
}

inline SolveResult solve(const Tensor3& x_obs, const Mask& mask, const SolverConfig& config,
                         const Tensor3* ground_truth = nullptr) {
    validate(config);
    if (!mask.same_dims(x_obs)) throw DimMismatch("solve: mask dims differ");
    if (ground_truth) require_same_dims(*ground_truth, x_obs, "solve: ground truth dims differ");
    for (std::size_t t = 0; t < x_obs.size(); ++t)
        if (!mask.observed_flat(t) && x_obs.data()[t] != 0.0)
            throw InvalidParam("solve: x_obs must be zero off the observed set");

    const double truth_norm = ground_truth ? frob_norm(*ground_truth) : 0.0;

    SolverState state;
    state.m = x_obs;
    state.e = Tensor3(x_obs.n1(), x_obs.n2(), x_obs.n3());
    state.p = Tensor3(x_obs.n1(), x_obs.n2(), x_obs.n3());
    state.rho = config.rho0;

    SolveResult result;
    for (int iter = 1; iter <= config.max_iters; ++iter) {
        state.iter = iter;
        Tensor3 e_next = update_e(state, x_obs, mask);
        double chg_e = 0.0;
        {
            const double* a = e_next.data();
            const double* b = state.e.data();
            for (std::size_t t = 0; t < e_next.size(); ++t)
                chg_e = std::max(chg_e, std::abs(a[t] - b[t]));
        }
        state.e = std::move(e_next);

        Tensor3 m_next = update_m(state, x_obs, mask, config.reg);
        double chg_m = 0.0;
        {
            const double* a = m_next.data();
            const double* b = state.m.data();
            for (std::size_t t = 0; t < m_next.size(); ++t)
                chg_m = std::max(chg_m, std::abs(a[t] - b[t]));
        }
        state.m = std::move(m_next);

        state.p = update_p(state, x_obs);

        double chg_x = 0.0, p_sq = 0.0;
        {
            const double* px = x_obs.data();
            const double* pm = state.m.data();
            const double* pe = state.e.data();
            const double* pp = state.p.data();
            for (std::size_t t = 0; t < x_obs.size(); ++t) {
                chg_x = std::max(chg_x, std::abs(px[t] - pm[t] - pe[t]));
                p_sq += pp[t] * pp[t];
            }
        }

        double rre = std::numeric_limits<double>::quiet_NaN();
        if (ground_truth) {
            double diff_sq = 0.0;
            const double* a = state.m.data();
            const double* b = ground_truth->data();
            for (std::size_t t = 0; t < x_obs.size(); ++t) {
                const double d = a[t] - b[t];
                diff_sq += d * d;
            }
            rre = std::sqrt(diff_sq) / truth_norm;
        }

        result.trace.rows.push_back(
            TraceRow{iter, state.rho, rre, chg_m, chg_e, chg_x, std::sqrt(p_sq)});

        const bool converged = chg_m <= config.xi && chg_e <= config.xi && chg_x <= config.xi;
        state.rho *= config.mu;
        if (converged) {
            result.stop = StopReason::Converged;
            break;
        }
        if (state.rho > config.rho_cap) break;
    }
    result.m = std::move(state.m);
    return result;
}

}  // namespace tubal
