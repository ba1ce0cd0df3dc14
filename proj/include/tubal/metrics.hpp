#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tubal/errors.hpp"
#include "tubal/tensor3.hpp"

namespace tubal {

// Relative reconstruction error ||m - x||_F / ||x||_F.
inline double rre(const Tensor3& m, const Tensor3& x) {
    require_same_dims(m, x, "rre: dims differ");
    const double ref = frob_norm(x);
    if (ref == 0.0) throw ZeroReference("rre: reference tensor is zero");
    double diff_sq = 0.0;
    const double* pm = m.data();
    const double* px = x.data();
    for (std::size_t t = 0; t < x.size(); ++t) {
        const double d = pm[t] - px[t];
        diff_sq += d * d;
    }
    return std::sqrt(diff_sq) / ref;
}

// Image metrics. Data is expected in [0, 1]; frontal slices are image
// channels (or frames) and every metric is the mean of its per-slice value.

inline double psnr(const Tensor3& m, const Tensor3& x) {
    require_same_dims(m, x, "psnr: dims differ");
    const std::size_t slice_len = static_cast<std::size_t>(x.n1()) * x.n2();
    double total = 0.0;
    for (int k = 0; k < x.n3(); ++k) {
        const double* pm = m.data() + k * slice_len;
        const double* px = x.data() + k * slice_len;
        double mse = 0.0;
        for (std::size_t t = 0; t < slice_len; ++t) {
            const double d = pm[t] - px[t];
            mse += d * d;
        }
        mse /= static_cast<double>(slice_len);
        const double val = (mse == 0.0) ? 100.0 : std::min(100.0, 10.0 * std::log10(1.0 / mse));
        total += val;
    }
    return total / x.n3();
}

inline double rmse(const Tensor3& m, const Tensor3& x) {
    require_same_dims(m, x, "rmse: dims differ");
    const std::size_t slice_len = static_cast<std::size_t>(x.n1()) * x.n2();
    const double denom = std::sqrt(static_cast<double>(slice_len));
    double total = 0.0;
    for (int k = 0; k < x.n3(); ++k) {
        const double* pm = m.data() + k * slice_len;
        const double* px = x.data() + k * slice_len;
        double acc = 0.0;
        for (std::size_t t = 0; t < slice_len; ++t) {
            const double d = pm[t] - px[t];
            acc += d * d;
        }
        total += std::sqrt(acc) / denom;
    }
    return total / x.n3();
}

namespace detail {

inline std::vector<double> gaussian_window(int size, double sigma) {
    std::vector<double> w(static_cast<std::size_t>(size) * size);
    const int c = size / 2;
    double sum = 0.0;
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) {
            const double d2 = (i - c) * (i - c) + (j - c) * (j - c);
            const double v = std::exp(-d2 / (2.0 * sigma * sigma));
            w[static_cast<std::size_t>(i) * size + j] = v;
            sum += v;
        }
    for (double& v : w) v /= sum;
    return w;
}

// Single-scale SSIM of one slice: 11x11 Gaussian window (sigma 1.5),
// K1 = 0.01, K2 = 0.03, dynamic range 1. Shrinks the window to the largest
// odd size that fits when a slice is smaller than 11. Valid-region mean.
inline double ssim_slice(const double* a, const double* b, int n1, int n2) {
    int win = std::min({11, n1, n2});
    if (win % 2 == 0) --win;
    const auto w = gaussian_window(win, 1.5);
    constexpr double c1 = 0.01 * 0.01;
    constexpr double c2 = 0.03 * 0.03;
    double total = 0.0;
    std::size_t count = 0;
    for (int i = 0; i + win <= n1; ++i) {
        for (int j = 0; j + win <= n2; ++j) {
            double ma = 0.0, mb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
            for (int wi = 0; wi < win; ++wi) {
                for (int wj = 0; wj < win; ++wj) {
                    const double wt = w[static_cast<std::size_t>(wi) * win + wj];
                    const double va = a[static_cast<std::size_t>(i + wi) * n2 + (j + wj)];
                    const double vb = b[static_cast<std::size_t>(i + wi) * n2 + (j + wj)];
                    ma += wt * va;
                    mb += wt * vb;
                    saa += wt * va * va;
                    sbb += wt * vb * vb;
                    sab += wt * va * vb;
                }
            }
            const double va = saa - ma * ma;
            const double vb = sbb - mb * mb;
            const double cov = sab - ma * mb;
            total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
                     ((ma * ma + mb * mb + c1) * (va + vb + c2));
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

}  // namespace detail

inline double ssim(const Tensor3& m, const Tensor3& x) {
    require_same_dims(m, x, "ssim: dims differ");
    const std::size_t slice_len = static_cast<std::size_t>(x.n1()) * x.n2();
    double total = 0.0;
    for (int k = 0; k < x.n3(); ++k)
        total += detail::ssim_slice(m.data() + k * slice_len, x.data() + k * slice_len, x.n1(),
                                    x.n2());
    return total / x.n3();
}

}  // namespace tubal
