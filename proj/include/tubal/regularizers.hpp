#pragma once

#include <cmath>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tubal/errors.hpp"

namespace tubal {

// Scalar loss families whose half-quadratic duals are sparsity-inducing
// regularizers with closed-form thresholding. Every family is quadratic
// x^2/2 inside [-lambda, lambda] and switches to a concave branch outside,
// glued continuously-differentiably:
//
//   Soft  quadratic / linear hybrid (Huber); thresholding is the classic
//         soft shrinkage, bias exactly lambda.
//   Hop   quadratic / |x|^p hybrid, 0 < p <= 1. p = 1 collapses to Soft.
//   How   quadratic / Welsch hybrid; kernel width sigma = sigma_ratio*lambda,
//         concave beyond the knee iff sigma <= sqrt(2)*lambda.
//   Hoc   quadratic / Cauchy hybrid; scale gamma = gamma_ratio*lambda,
//         concave beyond the knee iff gamma <= lambda.
//
// Shape parameters are stored as ratios to lambda so a spec can be rescaled
// to a new threshold (the completion solver uses lambda = 1/rho each
// iteration) without leaving the concavity regime.
enum class RegKind { Soft, Hop, How, Hoc };

struct RegularizerSpec {
    RegKind kind = RegKind::Soft;
    double lambda = 1.0;
    double p = 0.3;                      // Hop exponent
    double sigma_ratio = std::sqrt(2.0); // How: sigma / lambda
    double gamma_ratio = 1.0;            // Hoc: gamma / lambda

    // Unchecked aggregate construction stays available for experimentation;
    // the factories below validate.
    static RegularizerSpec soft(double lambda);
    static RegularizerSpec hop(double p, double lambda);
    static RegularizerSpec how(double sigma_ratio, double lambda);
    static RegularizerSpec hoc(double gamma_ratio, double lambda);

    RegularizerSpec with_lambda(double new_lambda) const {
        RegularizerSpec s = *this;
        s.lambda = new_lambda;
        return s;
    }
};

inline void validate(const RegularizerSpec& spec) {
    if (!(spec.lambda > 0.0) || !std::isfinite(spec.lambda))
        throw InvalidParam("regularizer: lambda must be positive");
    switch (spec.kind) {
        case RegKind::Soft:
            return;
        case RegKind::Hop:
            if (!(spec.p > 0.0 && spec.p <= 1.0))
                throw InvalidParam("hop: p must lie in (0, 1]");
            return;
        case RegKind::How:
            if (!(spec.sigma_ratio > 0.0 && spec.sigma_ratio <= std::sqrt(2.0)))
                throw InvalidParam("how: sigma must lie in (0, sqrt(2)*lambda]");
            return;
        case RegKind::Hoc:
            if (!(spec.gamma_ratio > 0.0 && spec.gamma_ratio <= 1.0))
                throw InvalidParam("hoc: gamma must lie in (0, lambda]");
            return;
    }
    throw InvalidParam("regularizer: unknown kind");
}

inline RegularizerSpec RegularizerSpec::soft(double lambda) {
    RegularizerSpec s{RegKind::Soft, lambda};
    validate(s);
    return s;
}
inline RegularizerSpec RegularizerSpec::hop(double p, double lambda) {
    RegularizerSpec s{RegKind::Hop, lambda};
    s.p = p;
    validate(s);
    return s;
}
inline RegularizerSpec RegularizerSpec::how(double sigma_ratio, double lambda) {
    RegularizerSpec s{RegKind::How, lambda};
    s.sigma_ratio = sigma_ratio;
    validate(s);
    return s;
}
inline RegularizerSpec RegularizerSpec::hoc(double gamma_ratio, double lambda) {
    RegularizerSpec s{RegKind::Hoc, lambda};
    s.gamma_ratio = gamma_ratio;
    validate(s);
    return s;
}

// Loss value. Even in x; quadratic inside the knee, concave branch with
// the continuity constants folded in outside.
inline double loss(const RegularizerSpec& spec, double x) {
    const double ax = std::abs(x);
    const double lam = spec.lambda;
    if (ax <= lam) return 0.5 * x * x;
    switch (spec.kind) {
        case RegKind::Soft:
            return lam * ax - 0.5 * lam * lam;
        case RegKind::Hop: {
            const double p = spec.p;
            return std::pow(lam, 2.0 - p) * std::pow(ax, p) / p + 0.5 * lam * lam -
                   lam * lam / p;
        }
        case RegKind::How: {
            const double sig2 = spec.sigma_ratio * spec.sigma_ratio * lam * lam;
            return 0.5 * sig2 * (1.0 - std::exp((lam * lam - ax * ax) / sig2)) +
                   0.5 * lam * lam;
        }
        case RegKind::Hoc: {
            const double gam2 = spec.gamma_ratio * spec.gamma_ratio * lam * lam;
            const double coef = 0.5 * (gam2 + lam * lam);
            const double b = 0.5 * lam * lam - coef * std::log1p(lam * lam / gam2);
            return coef * std::log1p(ax * ax / gam2) + b;
        }
    }
    return 0.0;
}

// Thresholding function (proximity operator of the induced regularizer):
// exactly zero inside [-lambda, lambda], max{0, |x| - shrinkage(|x|)}*sign(x)
// outside. Odd and monotonically nondecreasing for valid specs.
inline double threshold(const RegularizerSpec& spec, double x) {
    const double ax = std::abs(x);
    const double lam = spec.lambda;
    if (ax <= lam) return 0.0;
    const double sgn = (x > 0.0) ? 1.0 : -1.0;
    double shrink = 0.0;
    switch (spec.kind) {
        case RegKind::Soft:
            shrink = lam;
            break;
        case RegKind::Hop:
            shrink = std::pow(lam, 2.0 - spec.p) * std::pow(ax, spec.p - 1.0);
            break;
        case RegKind::How: {
            const double sig2 = spec.sigma_ratio * spec.sigma_ratio * lam * lam;
            shrink = ax * std::exp((lam * lam - ax * ax) / sig2);
            break;
        }
        case RegKind::Hoc: {
            const double gam2 = spec.gamma_ratio * spec.gamma_ratio * lam * lam;
            shrink = (gam2 + lam * lam) * ax / (gam2 + ax * ax);
            break;
        }
    }
    return std::max(0.0, ax - shrink) * sgn;
}

// Estimation bias |x - P(x)| on the suprathreshold region.
inline double bias_gap(const RegularizerSpec& spec, double x) {
    if (x < spec.lambda) throw DomainError("bias_gap: requires x >= lambda");
    return x - threshold(spec, x);
}

// Welsch half-quadratic map y = x - x*exp(-x^2/sigma^2). Shrinks everywhere
// but vanishes only at x = 0, i.e. it is not sparsity-inducing; kept as the
// contrast case for the thresholding curves.
inline double welsch_map(double sigma, double x) {
    if (!(sigma > 0.0)) throw InvalidParam("welsch_map: sigma must be positive");
    return x - x * std::exp(-x * x / (sigma * sigma));
}

// Sampled thresholding curves for one lambda: soft and hard references plus
// the three hybrid families.
struct CurveTable {
    std::vector<double> x, soft, hard, hop_p, how, hoc;
};

inline CurveTable curve_table(double lambda, double p, double sigma_ratio, double gamma_ratio,
                              std::span<const double> grid) {
    const RegularizerSpec s_soft = RegularizerSpec::soft(lambda);
    const RegularizerSpec s_hop = RegularizerSpec::hop(p, lambda);
    const RegularizerSpec s_how = RegularizerSpec::how(sigma_ratio, lambda);
    const RegularizerSpec s_hoc = RegularizerSpec::hoc(gamma_ratio, lambda);
    CurveTable t;
    for (double x : grid) {
        t.x.push_back(x);
        t.soft.push_back(threshold(s_soft, x));
        t.hard.push_back(std::abs(x) <= lambda ? 0.0 : x);
        t.hop_p.push_back(threshold(s_hop, x));
        t.how.push_back(threshold(s_how, x));
        t.hoc.push_back(threshold(s_hoc, x));
    }
    return t;
}

inline std::string reg_kind_name(RegKind k) {
    switch (k) {
        case RegKind::Soft: return "soft";
        case RegKind::Hop: return "hop";
        case RegKind::How: return "how";
        case RegKind::Hoc: return "hoc";
    }
    return "?";
}

}  // namespace tubal
