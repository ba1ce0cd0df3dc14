#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "tubal/errors.hpp"
#include "tubal/tensor3.hpp"

namespace tubal {

using cd = std::complex<double>;

// Complex third-order tensor, same layout as Tensor3. Carries the
// tube-transformed image of a real tensor, whose frontal slices are the
// matrices all per-slice linear algebra runs on.
class SpectralTensor3 {
public:
    SpectralTensor3() = default;

    SpectralTensor3(int n1, int n2, int n3) : n1_(n1), n2_(n2), n3_(n3) {
        if (n1 < 1 || n2 < 1 || n3 < 1) throw InvalidParam("SpectralTensor3: dims must be positive");
        data_.assign(static_cast<std::size_t>(n1) * n2 * n3, cd{0.0, 0.0});
    }

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int n3() const { return n3_; }
    std::size_t size() const { return data_.size(); }

    cd operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }
    cd& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }

    const cd* data() const { return data_.data(); }
    cd* data() { return data_.data(); }

    bool same_dims(const SpectralTensor3& o) const {
        return n1_ == o.n1_ && n2_ == o.n2_ && n3_ == o.n3_;
    }

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * n1_ + i) * n2_ + j;
    }

private:
    int n1_ = 0, n2_ = 0, n3_ = 0;
    std::vector<cd> data_;
};

inline double frob_norm(const SpectralTensor3& a) {
    double acc = 0.0;
    const cd* p = a.data();
    for (std::size_t t = 0; t < a.size(); ++t) acc += std::norm(p[t]);
    return std::sqrt(acc);
}

inline cd spectral_inner_product(const SpectralTensor3& a, const SpectralTensor3& b) {
    if (!a.same_dims(b)) throw DimMismatch("spectral_inner_product: dims differ");
    cd acc{0.0, 0.0};
    const cd* pa = a.data();
    const cd* pb = b.data();
    for (std::size_t t = 0; t < a.size(); ++t) acc += std::conj(pa[t]) * pb[t];
    return acc;
}

namespace detail {

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place radix-2 transform with sign = -1 for the forward kernel.
// Twiddles are precomputed by the owning plan.
inline void radix2_forward(cd* x, int n, const std::vector<cd>& tw) {
    // bit reversal
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const int step = n / len;
        for (int i = 0; i < n; i += len) {
            for (int k = 0; k < len / 2; ++k) {
                const cd w = tw[static_cast<std::size_t>(k) * step];
                const cd u = x[i + k];
                const cd v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
            }
        }
    }
}

}  // namespace detail

// Length-n discrete Fourier transform plan, MATLAB convention: forward is
// unnormalized, inverse carries the 1/n factor. Small or power-of-two
// lengths run directly; everything else goes through Bluestein's chirp-z
// reduction to a power-of-two transform, keeping the cost O(n log n).
class Dft {
public:
    explicit Dft(int n) : n_(n) {
        if (n < 1) throw InvalidParam("Dft: length must be positive");
        if (n == 1) {
            method_ = Method::Identity;
        } else if (detail::is_pow2(n)) {
            method_ = Method::Radix2;
            make_twiddles(n_, tw_);
        } else if (n <= 32) {
            method_ = Method::Direct;
            table_.resize(n_);
            for (int t = 0; t < n_; ++t) {
                const double ang = -2.0 * std::numbers::pi * t / n_;
                table_[t] = cd{std::cos(ang), std::sin(ang)};
            }
        } else {
            method_ = Method::Bluestein;
            m_ = 1;
            while (m_ < 2 * n_ - 1) m_ <<= 1;
            make_twiddles(m_, tw_);
            chirp_.resize(n_);
            for (int k = 0; k < n_; ++k) {
                // k^2 mod 2n keeps the phase argument small and exact
                const long long q = (static_cast<long long>(k) * k) % (2LL * n_);
                const double ang = -std::numbers::pi * static_cast<double>(q) / n_;
                chirp_[k] = cd{std::cos(ang), std::sin(ang)};
            }
            bfft_.assign(m_, cd{0.0, 0.0});
            bfft_[0] = std::conj(chirp_[0]);
            for (int k = 1; k < n_; ++k) {
                bfft_[k] = std::conj(chirp_[k]);
                bfft_[m_ - k] = std::conj(chirp_[k]);
            }
            detail::radix2_forward(bfft_.data(), m_, tw_);
        }
    }

    int length() const { return n_; }

    void forward(cd* x) const {
        switch (method_) {
            case Method::Identity:
                return;
            case Method::Radix2:
                detail::radix2_forward(x, n_, tw_);
                return;
            case Method::Direct: {
                scratch_.assign(x, x + n_);
                for (int k = 0; k < n_; ++k) {
                    cd acc{0.0, 0.0};
                    for (int j = 0; j < n_; ++j)
                        acc += scratch_[j] * table_[(static_cast<std::size_t>(j) * k) % n_];
                    x[k] = acc;
                }
                return;
            }
            case Method::Bluestein: {
                scratch_.assign(m_, cd{0.0, 0.0});
                for (int k = 0; k < n_; ++k) scratch_[k] = x[k] * chirp_[k];
                detail::radix2_forward(scratch_.data(), m_, tw_);
                for (int k = 0; k < m_; ++k) scratch_[k] *= bfft_[k];
                // inverse power-of-two transform via conjugation
                for (int k = 0; k < m_; ++k) scratch_[k] = std::conj(scratch_[k]);
                detail::radix2_forward(scratch_.data(), m_, tw_);
                const double inv_m = 1.0 / m_;
                for (int k = 0; k < n_; ++k)
                    x[k] = chirp_[k] * std::conj(scratch_[k]) * inv_m;
                return;
            }
        }
    }

    void inverse(cd* x) const {
        for (int k = 0; k < n_; ++k) x[k] = std::conj(x[k]);
        forward(x);
        const double inv_n = 1.0 / n_;
        for (int k = 0; k < n_; ++k) x[k] = std::conj(x[k]) * inv_n;
    }

private:
    enum class Method { Identity, Direct, Radix2, Bluestein };

    static void make_twiddles(int n, std::vector<cd>& tw) {
        tw.resize(n / 2);
        for (int k = 0; k < n / 2; ++k) {
            const double ang = -2.0 * std::numbers::pi * k / n;
            tw[k] = cd{std::cos(ang), std::sin(ang)};
        }
    }

    int n_ = 0;
    int m_ = 0;  // Bluestein convolution length
    Method method_ = Method::Identity;
    std::vector<cd> tw_;
    std::vector<cd> table_;
    std::vector<cd> chirp_;
    std::vector<cd> bfft_;
    mutable std::vector<cd> scratch_;
};

// Forward DFT along every mode-3 tube, unnormalized.
inline SpectralTensor3 fft_mode3(const Tensor3& t) {
    SpectralTensor3 out(t.n1(), t.n2(), t.n3());
    const int n3 = t.n3();
    const Dft plan(n3);
    const std::size_t stride = static_cast<std::size_t>(t.n1()) * t.n2();
    std::vector<cd> tube(n3);
    for (std::size_t base = 0; base < stride; ++base) {
        for (int k = 0; k < n3; ++k) tube[k] = cd{t.data()[base + k * stride], 0.0};
        plan.forward(tube.data());
        for (int k = 0; k < n3; ++k) out.data()[base + k * stride] = tube[k];
    }
    return out;
}

// Inverse DFT along every tube, scaled by 1/n3. The result of a valid
// conjugate-symmetric input is real; the imaginary residue is measured
// against the Frobenius norm of the input and rejected above 1e-9 relative.
inline Tensor3 ifft_mode3(const SpectralTensor3& s) {
    Tensor3 out(s.n1(), s.n2(), s.n3());
    const int n3 = s.n3();
    const Dft plan(n3);
    const std::size_t stride = static_cast<std::size_t>(s.n1()) * s.n2();
    std::vector<cd> tube(n3);
    double imag_sq = 0.0;
    for (std::size_t base = 0; base < stride; ++base) {
        for (int k = 0; k < n3; ++k) tube[k] = s.data()[base + k * stride];
        plan.inverse(tube.data());
        for (int k = 0; k < n3; ++k) {
            out.data()[base + k * stride] = tube[k].real();
            imag_sq += tube[k].imag() * tube[k].imag();
        }
    }
    const double residue = std::sqrt(imag_sq);
    if (residue > 1e-9 * frob_norm(s))
        throw ResidualImaginary("ifft_mode3: imaginary residue above tolerance");
    return out;
}

// Number of leading frontal slices that must be computed explicitly; the
// remaining slices of a real tensor's transform are conjugate mirrors,
// slice k pairing with slice n3-k (0-based). Covers the Nyquist slice for
// even n3.
inline int spectral_half_count(int n3) { return n3 / 2 + 1; }

inline int spectral_mirror_source(int k, int n3) { return n3 - k; }

// Largest relative deviation from conjugate symmetry across mirrored slices.
inline double conj_symmetry_error(const SpectralTensor3& s) {
    const int n3 = s.n3();
    double worst = 0.0;
    const double scale = std::max(1e-300, frob_norm(s));
    for (int k = spectral_half_count(n3); k < n3; ++k) {
        const int src = spectral_mirror_source(k, n3);
        double err = 0.0;
        for (int i = 0; i < s.n1(); ++i)
            for (int j = 0; j < s.n2(); ++j) err += std::norm(s(i, j, k) - std::conj(s(i, j, src)));
        worst = std::max(worst, std::sqrt(err) / scale);
    }
    return worst;
}

}  // namespace tubal
