#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "tubal/errors.hpp"
#include "tubal/fft.hpp"
#include "tubal/tensor3.hpp"

namespace tubal {

namespace detail {

inline void check_tprod_dims(const Tensor3& a, const Tensor3& b) {
    if (a.n2() != b.n1() || a.n3() != b.n3())
        throw DimMismatch("tprod: need a.n2 == b.n1 and a.n3 == b.n3");
}

}  // namespace detail

// t-product via per-slice matrix products in the transform domain.
inline Tensor3 tprod(const Tensor3& a, const Tensor3& b) {
    detail::check_tprod_dims(a, b);
    const SpectralTensor3 fa = fft_mode3(a);
    const SpectralTensor3 fb = fft_mode3(b);
    SpectralTensor3 fc(a.n1(), b.n2(), a.n3());
    const int n1 = a.n1(), n2 = a.n2(), l = b.n2(), n3 = a.n3();
    for (int k = 0; k < n3; ++k) {
        for (int j = 0; j < l; ++j) {
            for (int t = 0; t < n2; ++t) {
                const cd bv = fb(t, j, k);
                if (bv == cd{0.0, 0.0}) continue;
                for (int i = 0; i < n1; ++i) fc(i, j, k) += fa(i, t, k) * bv;
            }
        }
    }
    return ifft_mode3(fc);
}

// Reference t-product through the literal block-circulant construction.
// Quadratic in n3 and meant for small operands; it is the oracle the fast
// path is validated against.
inline Tensor3 tprod_bcirc(const Tensor3& a, const Tensor3& b) {
    detail::check_tprod_dims(a, b);
    const int n1 = a.n1(), n2 = a.n2(), l = b.n2(), n3 = a.n3();

    // bcirc(a): n1*n3 x n2*n3 with block (I, J) = slice((I - J) mod n3)
    std::vector<double> big(static_cast<std::size_t>(n1) * n3 * n2 * n3, 0.0);
    const std::size_t big_cols = static_cast<std::size_t>(n2) * n3;
    for (int bi = 0; bi < n3; ++bi) {
        for (int bj = 0; bj < n3; ++bj) {
            const int src = (bi - bj + n3) % n3;
            for (int i = 0; i < n1; ++i)
                for (int j = 0; j < n2; ++j)
                    big[(static_cast<std::size_t>(bi) * n1 + i) * big_cols + bj * n2 + j] =
                        a(i, j, src);
        }
    }

    // unfold(b): slices stacked vertically, n2*n3 x l
    std::vector<double> unf(static_cast<std::size_t>(n2) * n3 * l, 0.0);
    for (int k = 0; k < n3; ++k)
        for (int i = 0; i < n2; ++i)
            for (int j = 0; j < l; ++j)
                unf[(static_cast<std::size_t>(k) * n2 + i) * l + j] = b(i, j, k);

    // fold(bcirc(a) * unfold(b))
    Tensor3 out(n1, l, n3);
    const std::size_t rows = static_cast<std::size_t>(n1) * n3;
    for (std::size_t r = 0; r < rows; ++r) {
        for (int j = 0; j < l; ++j) {
            double acc = 0.0;
            for (std::size_t t = 0; t < big_cols; ++t)
                acc += big[r * big_cols + t] * unf[t * l + j];
            out(static_cast<int>(r % n1), j, static_cast<int>(r / n1)) = acc;
        }
    }
    return out;
}

}  // namespace tubal
