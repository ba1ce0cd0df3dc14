#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tubal/cmatrix.hpp"
#include "tubal/complex_svd.hpp"
#include "tubal/errors.hpp"
#include "tubal/fft.hpp"
#include "tubal/parallel.hpp"
#include "tubal/regularizers.hpp"
#include "tubal/tensor3.hpp"
#include "tubal/tprod.hpp"

namespace tubal {

// Tensor SVD triple: a = u * s * conj_transpose(v) under the t-product,
// with s f-diagonal. Economy form carries r = min(n1, n2) lateral slices;
// the full form is square-orthogonal on both sides.
struct TubalSVD {
    Tensor3 u;
    Tensor3 s;
    Tensor3 v;
};

enum class TsvdForm { Economy, Full };

namespace detail {

// Transform-domain slices come in conjugate pairs for real input, so only
// the leading half is decomposed; the rest is mirrored. `mirror_conj`
// copies slice `src` conjugated into slice `dst`.
inline void mirror_conj_slice(SpectralTensor3& s, int dst, int src) {
    for (int j = 0; j < s.n2(); ++j)
        for (int i = 0; i < s.n1(); ++i) s(i, j, dst) = std::conj(s(i, j, src));
}

}  // namespace detail

inline TubalSVD tsvd(const Tensor3& a, TsvdForm form = TsvdForm::Economy) {
    const int n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
    const int r = std::min(n1, n2);
    const int uc = (form == TsvdForm::Full) ? n1 : r;
    const int vc = (form == TsvdForm::Full) ? n2 : r;
    const int sr = (form == TsvdForm::Full) ? n1 : r;
    const int sc = (form == TsvdForm::Full) ? n2 : r;

    const SpectralTensor3 fa = fft_mode3(a);
    SpectralTensor3 fu(n1, uc, n3), fs(sr, sc, n3), fv(n2, vc, n3);

    const int half = spectral_half_count(n3);
    const SvdForm mform = (form == TsvdForm::Full) ? SvdForm::Full : SvdForm::Economy;
    parallel_for(static_cast<std::size_t>(half), [&](std::size_t k) {
        const MatrixSVD dec = svd_complex(spectral_slice(fa, static_cast<int>(k)), mform);
        for (int j = 0; j < uc; ++j)
            for (int i = 0; i < n1; ++i) fu(i, j, static_cast<int>(k)) = dec.u(i, j);
        for (int j = 0; j < vc; ++j)
            for (int i = 0; i < n2; ++i) fv(i, j, static_cast<int>(k)) = dec.v(i, j);
        for (int i = 0; i < r; ++i) fs(i, i, static_cast<int>(k)) = cd{dec.s[i], 0.0};
    });
    for (int k = half; k < n3; ++k) {
        const int src = spectral_mirror_source(k, n3);
        detail::mirror_conj_slice(fu, k, src);
        detail::mirror_conj_slice(fs, k, src);  // real data, conj is a copy
        detail::mirror_conj_slice(fv, k, src);
    }
    return TubalSVD{ifft_mode3(fu), ifft_mode3(fs), ifft_mode3(fv)};
}

// Number of singular tubes whose peak transform-domain value exceeds
// tol times the overall largest singular value.
inline int tubal_rank(const Tensor3& a, double tol = 1e-8) {
    if (tol < 0.0) throw InvalidParam("tubal_rank: tol must be nonnegative");
    const int n3 = a.n3();
    const int r = std::min(a.n1(), a.n2());
    const SpectralTensor3 fa = fft_mode3(a);
    const int half = spectral_half_count(n3);
    std::vector<std::vector<double>> per_slice(half);
    parallel_for(static_cast<std::size_t>(half), [&](std::size_t k) {
        per_slice[k] = singular_values(spectral_slice(fa, static_cast<int>(k)));
    });
    std::vector<double> tube_max(r, 0.0);
    for (const auto& sv : per_slice)
        for (int i = 0; i < r; ++i) tube_max[i] = std::max(tube_max[i], sv[i]);
    const double smax = *std::max_element(tube_max.begin(), tube_max.end());
    if (smax == 0.0) return 0;
    int rank = 0;
    for (int i = 0; i < r; ++i)
        if (tube_max[i] > tol * smax) ++rank;
    return rank;
}

// Tensor nuclear norm: mean over transform-domain slices of the matrix
// nuclear norm. Mirrored slices share singular values, hence the weights.
inline double tnn(const Tensor3& a) {
    const int n3 = a.n3();
    const SpectralTensor3 fa = fft_mode3(a);
    const int half = spectral_half_count(n3);
    std::vector<double> slice_sum(half, 0.0);
    parallel_for(static_cast<std::size_t>(half), [&](std::size_t k) {
        const auto sv = singular_values(spectral_slice(fa, static_cast<int>(k)));
        double acc = 0.0;
        for (double s : sv) acc += s;
        slice_sum[k] = acc;
    });
    double total = 0.0;
    for (int k = 0; k < half; ++k) {
        const int weight = (k == 0 || spectral_mirror_source(k, n3) == k) ? 1 : 2;
        total += weight * slice_sum[k];
    }
    return total / n3;
}

// Matrix-level generalized singular value thresholding: apply the scalar
// thresholding function to each singular value and recompose. Monotone
// thresholding keeps the values sorted, so no reordering is needed.
inline CMat gsvt_matrix(const CMat& x, const RegularizerSpec& spec) {
    validate(spec);
    const MatrixSVD dec = svd_complex(x);
    const int m = x.rows(), n = x.cols();
    const int r = static_cast<int>(dec.s.size());
    CMat out(m, n);
    for (int t = 0; t < r; ++t) {
        const double sv = threshold(spec, dec.s[t]);
        if (sv == 0.0) continue;
        const cd* ucol = dec.u.col(t);
        const cd* vcol = dec.v.col(t);
        for (int j = 0; j < n; ++j) {
            const cd vj = sv * std::conj(vcol[j]);
            cd* oc = out.col(j);
            for (int i = 0; i < m; ++i) oc[i] += ucol[i] * vj;
        }
    }
    return out;
}

// Generalized tensor singular value thresholding: per-slice GSVT in the
// transform domain on the leading half, conjugate mirroring for the rest.
// Solves the tensor proximal problem for the spec's thresholding function.
inline Tensor3 gtsvt(const Tensor3& x, const RegularizerSpec& spec) {
    validate(spec);
    const int n3 = x.n3();
    const SpectralTensor3 fx = fft_mode3(x);
    SpectralTensor3 fy(x.n1(), x.n2(), n3);
    const int half = spectral_half_count(n3);
    parallel_for(static_cast<std::size_t>(half), [&](std::size_t k) {
        set_spectral_slice(fy, static_cast<int>(k),
                           gsvt_matrix(spectral_slice(fx, static_cast<int>(k)), spec));
    });
    for (int k = half; k < n3; ++k)
        detail::mirror_conj_slice(fy, k, spectral_mirror_source(k, n3));
    return ifft_mode3(fy);
}

}  // namespace tubal
