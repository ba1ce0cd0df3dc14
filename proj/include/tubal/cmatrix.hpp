#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "tubal/errors.hpp"
#include "tubal/fft.hpp"

namespace tubal {

// Column-major dense complex matrix. Column-major because the SVD kernel
// sweeps over column pairs and wants them contiguous.
class CMat {
public:
    CMat() = default;

    CMat(int rows, int cols) : rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0) throw InvalidParam("CMat: negative dims");
        data_.assign(static_cast<std::size_t>(rows) * cols, cd{0.0, 0.0});
    }

    static CMat identity(int n) {
        CMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = cd{1.0, 0.0};
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cd operator()(int i, int j) const { return data_[static_cast<std::size_t>(j) * rows_ + i]; }
    cd& operator()(int i, int j) { return data_[static_cast<std::size_t>(j) * rows_ + i]; }

    const cd* col(int j) const { return data_.data() + static_cast<std::size_t>(j) * rows_; }
    cd* col(int j) { return data_.data() + static_cast<std::size_t>(j) * rows_; }

    const cd* data() const { return data_.data(); }
    cd* data() { return data_.data(); }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<cd> data_;
};

inline CMat herm(const CMat& a) {
    CMat out(a.cols(), a.rows());
    for (int j = 0; j < a.cols(); ++j)
        for (int i = 0; i < a.rows(); ++i) out(j, i) = std::conj(a(i, j));
    return out;
}

inline CMat matmul(const CMat& a, const CMat& b) {
    if (a.cols() != b.rows()) throw DimMismatch("matmul: inner dims differ");
    CMat out(a.rows(), b.cols());
    for (int j = 0; j < b.cols(); ++j) {
        cd* oc = out.col(j);
        for (int t = 0; t < a.cols(); ++t) {
            const cd bj = b(t, j);
            if (bj == cd{0.0, 0.0}) continue;
            const cd* ac = a.col(t);
            for (int i = 0; i < a.rows(); ++i) oc[i] += ac[i] * bj;
        }
    }
    return out;
}

inline double frob_norm(const CMat& a) {
    double acc = 0.0;
    const cd* p = a.data();
    const std::size_t total = static_cast<std::size_t>(a.rows()) * a.cols();
    for (std::size_t t = 0; t < total; ++t) acc += std::norm(p[t]);
    return std::sqrt(acc);
}

inline CMat spectral_slice(const SpectralTensor3& s, int k) {
    CMat m(s.n1(), s.n2());
    for (int j = 0; j < s.n2(); ++j)
        for (int i = 0; i < s.n1(); ++i) m(i, j) = s(i, j, k);
    return m;
}

inline void set_spectral_slice(SpectralTensor3& s, int k, const CMat& m) {
    if (m.rows() != s.n1() || m.cols() != s.n2())
        throw DimMismatch("set_spectral_slice: slice dims differ");
    for (int j = 0; j < s.n2(); ++j)
        for (int i = 0; i < s.n1(); ++i) s(i, j, k) = m(i, j);
}

inline CMat conj(const CMat& a) {
    CMat out(a.rows(), a.cols());
    for (int j = 0; j < a.cols(); ++j)
        for (int i = 0; i < a.rows(); ++i) out(i, j) = std::conj(a(i, j));
    return out;
}

}  // namespace tubal
