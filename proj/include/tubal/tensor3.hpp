#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "tubal/errors.hpp"

namespace tubal {

// Dense real third-order tensor of shape n1 x n2 x n3.
//
// Layout is slice-major, then row-major within a frontal slice:
//   entry (i, j, k) lives at data[(k*n1 + i)*n2 + j].
// Frontal slice k is the n1 x n2 matrix A(:,:,k); tube (i, j) is the
// length-n3 fiber A(i,j,:), strided by n1*n2. The on-disk "T3R1" format
// serializes exactly this layout, so the ordering here is a file-format
// contract, not an implementation detail.
class Tensor3 {
public:
    Tensor3() = default;

    Tensor3(int n1, int n2, int n3) : n1_(n1), n2_(n2), n3_(n3) {
        if (n1 < 1 || n2 < 1 || n3 < 1) throw InvalidParam("Tensor3: dims must be positive");
        data_.assign(static_cast<std::size_t>(n1) * n2 * n3, 0.0);
    }

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int n3() const { return n3_; }
    std::size_t size() const { return data_.size(); }

    double operator()(int i, int j, int k) const {
        return data_[index(i, j, k)];
    }
    double& operator()(int i, int j, int k) {
        return data_[index(i, j, k)];
    }

    const double* data() const { return data_.data(); }
    double* data() { return data_.data(); }

    bool same_dims(const Tensor3& o) const {
        return n1_ == o.n1_ && n2_ == o.n2_ && n3_ == o.n3_;
    }

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * n1_ + i) * n2_ + j;
    }

private:
    int n1_ = 0, n2_ = 0, n3_ = 0;
    std::vector<double> data_;
};

// Observation mask over a tensor of the same shape; true marks an observed
// entry (index in the sampling set), false a missing one.
class Mask {
public:
    Mask() = default;

    Mask(int n1, int n2, int n3, bool observed = false) : n1_(n1), n2_(n2), n3_(n3) {
        if (n1 < 1 || n2 < 1 || n3 < 1) throw InvalidParam("Mask: dims must be positive");
        obs_.assign(static_cast<std::size_t>(n1) * n2 * n3, observed ? 1 : 0);
    }

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int n3() const { return n3_; }
    std::size_t size() const { return obs_.size(); }

    bool observed(int i, int j, int k) const { return obs_[index(i, j, k)] != 0; }
    void set(int i, int j, int k, bool v) { obs_[index(i, j, k)] = v ? 1 : 0; }

    bool observed_flat(std::size_t t) const { return obs_[t] != 0; }
    void set_flat(std::size_t t, bool v) { obs_[t] = v ? 1 : 0; }

    std::size_t count_observed() const {
        return static_cast<std::size_t>(std::count(obs_.begin(), obs_.end(), std::uint8_t{1}));
    }

    bool same_dims(const Tensor3& t) const {
        return n1_ == t.n1() && n2_ == t.n2() && n3_ == t.n3();
    }

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * n1_ + i) * n2_ + j;
    }

private:
    int n1_ = 0, n2_ = 0, n3_ = 0;
    std::vector<std::uint8_t> obs_;
};

inline void require_same_dims(const Tensor3& a, const Tensor3& b, const char* what) {
    if (!a.same_dims(b)) throw DimMismatch(what);
}

// Identity tensor: first frontal slice is I_n, remaining slices are zero.
inline Tensor3 identity_tensor(int n, int n3) {
    Tensor3 id(n, n, n3);
    for (int i = 0; i < n; ++i) id(i, i, 0) = 1.0;
    return id;
}

// Transpose every frontal slice, then reverse the order of slices 2..n3.
inline Tensor3 conj_transpose(const Tensor3& a) {
    Tensor3 out(a.n2(), a.n1(), a.n3());
    for (int k = 0; k < a.n3(); ++k) {
        const int src = (k == 0) ? 0 : a.n3() - k;
        for (int i = 0; i < a.n1(); ++i)
            for (int j = 0; j < a.n2(); ++j) out(j, i, k) = a(i, j, src);
    }
    return out;
}

inline double inner_product(const Tensor3& a, const Tensor3& b) {
    require_same_dims(a, b, "inner_product: dims differ");
    double acc = 0.0;
    const double* pa = a.data();
    const double* pb = b.data();
    for (std::size_t t = 0; t < a.size(); ++t) acc += pa[t] * pb[t];
    return acc;
}

inline double frob_norm(const Tensor3& a) {
    double acc = 0.0;
    const double* p = a.data();
    for (std::size_t t = 0; t < a.size(); ++t) acc += p[t] * p[t];
    return std::sqrt(acc);
}

inline double linf_norm(const Tensor3& a) {
    double m = 0.0;
    const double* p = a.data();
    for (std::size_t t = 0; t < a.size(); ++t) m = std::max(m, std::abs(p[t]));
    return m;
}

inline bool all_finite(const Tensor3& a) {
    const double* p = a.data();
    for (std::size_t t = 0; t < a.size(); ++t)
        if (!std::isfinite(p[t])) return false;
    return true;
}

}  // namespace tubal
