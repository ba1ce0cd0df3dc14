#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <vector>

#include "tubal/cmatrix.hpp"
#include "tubal/errors.hpp"

namespace tubal {

// Singular value decomposition A = U diag(s) V^H with s real, nonnegative
// and nonincreasing.
struct MatrixSVD {
    CMat u;
    std::vector<double> s;
    CMat v;
};

enum class SvdForm { Economy, Full };

namespace detail {

constexpr double kJacobiTol = 1e-13;
constexpr int kJacobiMaxSweeps = 60;

inline cd col_dot(const cd* a, const cd* b, int m) {
    double re = 0.0, im = 0.0;
    for (int i = 0; i < m; ++i) {
        // conj(a[i]) * b[i]
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

inline double col_norm_sq(const cd* a, int m) {
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc += std::norm(a[i]);
    return acc;
}

// (ci, cj) <- (cs*phase*ci - sn*cj, sn*phase*ci + cs*cj)
inline void rotate_cols(cd* ci, cd* cj, int m, double cs, double sn, cd phase) {
    const cd a = cs * phase;
    const cd b = sn * phase;
    for (int i = 0; i < m; ++i) {
        const cd wi = ci[i];
        const cd wj = cj[i];
        ci[i] = a * wi - sn * wj;
        cj[i] = b * wi + cs * wj;
    }
}

// Appends an orthonormal column to u at position `pos`, orthogonal to
// columns [0, pos). Picks the canonical basis vector with the largest
// residual, then re-orthogonalizes once.
inline void complete_column(CMat& u, int pos) {
    const int m = u.rows();
    double best_norm = -1.0;
    std::vector<cd> best(m), cand(m);
    for (int t = 0; t < m; ++t) {
        std::fill(cand.begin(), cand.end(), cd{0.0, 0.0});
        cand[t] = cd{1.0, 0.0};
        for (int c = 0; c < pos; ++c) {
            const cd proj = col_dot(u.col(c), cand.data(), m);
            const cd* uc = u.col(c);
            for (int i = 0; i < m; ++i) cand[i] -= proj * uc[i];
        }
        const double nrm = std::sqrt(col_norm_sq(cand.data(), m));
        if (nrm > best_norm) {
            best_norm = nrm;
            best = cand;
        }
        if (nrm > 0.9) break;  // canonical vector nearly untouched already
    }
    // second Gram-Schmidt pass for orthogonality near machine precision
    for (int c = 0; c < pos; ++c) {
        const cd proj = col_dot(u.col(c), best.data(), m);
        const cd* uc = u.col(c);
        for (int i = 0; i < m; ++i) best[i] -= proj * uc[i];
    }
    const double nrm = std::sqrt(col_norm_sq(best.data(), m));
    cd* out = u.col(pos);
    for (int i = 0; i < m; ++i) out[i] = best[i] / nrm;
}

// Phase convention: rotate each left singular vector so its largest-modulus
// entry is real and nonnegative; the paired right vector absorbs the same
// factor, leaving the product unchanged.
inline void fix_phase(CMat& u, CMat* v, int k) {
    const int m = u.rows();
    cd* uc = u.col(k);
    int idx = 0;
    double best = -1.0;
    for (int i = 0; i < m; ++i) {
        const double a = std::norm(uc[i]);
        if (a > best) {
            best = a;
            idx = i;
        }
    }
    const double mag = std::abs(uc[idx]);
    if (mag == 0.0) return;
    const cd rot = std::conj(uc[idx]) / mag;
    for (int i = 0; i < m; ++i) uc[i] *= rot;
    uc[idx] = cd{std::abs(uc[idx].real()), 0.0};  // clear roundoff in the pivot
    if (v != nullptr && k < v->cols()) {
        cd* vc = v->col(k);
        for (int i = 0; i < v->rows(); ++i) vc[i] *= rot;
    }
}

}  // namespace detail

// One-sided Jacobi SVD for complex matrices.
//
// Orthogonalizes the columns of a working copy of A by two-sided-phase
// plane rotations until every column pair is numerically orthogonal; the
// surviving column norms are the singular values. The pair sweep is cyclic
// and the whole computation is sequential and branch-deterministic, so
// identical inputs produce bit-identical results.
inline MatrixSVD svd_complex(const CMat& a, SvdForm form = SvdForm::Economy) {
    using namespace detail;

    const int m = a.rows(), n = a.cols();
    {
        const cd* p = a.data();
        const std::size_t total = static_cast<std::size_t>(m) * n;
        for (std::size_t t = 0; t < total; ++t)
            if (!std::isfinite(p[t].real()) || !std::isfinite(p[t].imag()))
                throw InvalidParam("svd_complex: non-finite entry");
    }
    if (m < n) {
        // Factor the conjugate transpose and swap the roles of U and V.
        MatrixSVD t = svd_complex(herm(a), form);
        return MatrixSVD{std::move(t.v), std::move(t.s), std::move(t.u)};
    }

    CMat w = a;
    CMat v = CMat::identity(n);
    std::vector<double> colsq(n);

    // Columns below this square-norm floor hold only rotation roundoff;
    // pairs touching them are treated as orthogonal, since a purely
    // relative test can never be met by two noise columns. Their left
    // vectors are rebuilt by basis completion rather than normalization.
    double floor_sq = 0.0;

    bool converged = false;
    for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
        for (int j = 0; j < n; ++j) colsq[j] = col_norm_sq(w.col(j), m);
        if (sweep == 0) {
            double fn2 = 0.0;
            for (int j = 0; j < n; ++j) fn2 += colsq[j];
            floor_sq = 1e-28 * fn2;
        }
        converged = true;
        for (int i = 0; i < n - 1; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double aii = colsq[i];
                const double ajj = colsq[j];
                if (aii <= floor_sq || ajj <= floor_sq) continue;
                const cd c = col_dot(w.col(i), w.col(j), m);
                const double chat = std::abs(c);
                if (chat * chat <= kJacobiTol * kJacobiTol * aii * ajj) continue;
                converged = false;
                const cd phase = c / chat;
                const double tau = (ajj - aii) / (2.0 * chat);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * cs;
                rotate_cols(w.col(i), w.col(j), m, cs, sn, phase);
                rotate_cols(v.col(i), v.col(j), n, cs, sn, phase);
                colsq[i] = aii - t * chat;
                colsq[j] = ajj + t * chat;
            }
        }
    }
    if (!converged) throw NoConvergence("svd_complex: Jacobi sweep limit exceeded");

    std::vector<double> s(n);
    for (int j = 0; j < n; ++j) s[j] = std::sqrt(col_norm_sq(w.col(j), m));

    // descending, stable so equal singular values keep column order
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return s[x] > s[y]; });

    const int ucols = (form == SvdForm::Full) ? m : n;
    MatrixSVD out;
    out.u = CMat(m, ucols);
    out.v = CMat(n, n);
    out.s.resize(n);

    for (int p = 0; p < n; ++p) {
        const int j = order[p];
        out.s[p] = s[j];
        for (int i = 0; i < n; ++i) out.v(i, p) = v(i, j);
        if (s[j] > 1e-300) {
            const cd* wc = w.col(j);
            cd* uc = out.u.col(p);
            const double inv = 1.0 / s[j];
            for (int i = 0; i < m; ++i) uc[i] = wc[i] * inv;
        } else {
            out.s[p] = 0.0;
            complete_column(out.u, p);
        }
    }
    for (int p = n; p < ucols; ++p) complete_column(out.u, p);

    for (int p = 0; p < ucols; ++p) fix_phase(out.u, p < n ? &out.v : nullptr, p);
    return out;
}

// Singular values only; same kernel without the V accumulation.
inline std::vector<double> singular_values(const CMat& a) {
    using namespace detail;
    const int m0 = a.rows(), n0 = a.cols();
    CMat w = (m0 < n0) ? herm(a) : a;
    const int m = w.rows(), n = w.cols();
    std::vector<double> colsq(n);
    double floor_sq = 0.0;
    bool converged = false;
    for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
        for (int j = 0; j < n; ++j) colsq[j] = col_norm_sq(w.col(j), m);
        if (sweep == 0) {
            double fn2 = 0.0;
            for (int j = 0; j < n; ++j) fn2 += colsq[j];
            floor_sq = 1e-28 * fn2;
        }
        converged = true;
        for (int i = 0; i < n - 1; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double aii = colsq[i];
                const double ajj = colsq[j];
                if (aii <= floor_sq || ajj <= floor_sq) continue;
                const cd c = col_dot(w.col(i), w.col(j), m);
                const double chat = std::abs(c);
                if (chat * chat <= kJacobiTol * kJacobiTol * aii * ajj) continue;
                converged = false;
                const cd phase = c / chat;
                const double tau = (ajj - aii) / (2.0 * chat);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * cs;
                rotate_cols(w.col(i), w.col(j), m, cs, sn, phase);
                colsq[i] = aii - t * chat;
                colsq[j] = ajj + t * chat;
            }
        }
    }
    if (!converged) throw NoConvergence("singular_values: Jacobi sweep limit exceeded");
    std::vector<double> s(n);
    for (int j = 0; j < n; ++j) s[j] = std::sqrt(col_norm_sq(w.col(j), m));
    std::sort(s.begin(), s.end(), std::greater<>());
    return s;
}

}  // namespace tubal
