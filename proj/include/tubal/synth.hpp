#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "tubal/errors.hpp"
#include "tubal/rng.hpp"
#include "tubal/tensor3.hpp"
#include "tubal/tprod.hpp"

namespace tubal {

// Random tensor with i.i.d. standard normal entries, filled in storage
// order from the seeded stream.
inline Tensor3 gen_gaussian(int n1, int n2, int n3, std::uint64_t seed) {
    Tensor3 t(n1, n2, n3);
    GaussianStream g(seed);
    double* p = t.data();
    for (std::size_t i = 0; i < t.size(); ++i) p[i] = g.next();
    return t;
}

// Exact tubal-rank-r tensor as the t-product of two Gaussian factors
// (n1 x r x n3 times r x n2 x n3). The factor fills draw from child seeds
// 0 and 1 of `seed`.
inline Tensor3 gen_lowrank(int n1, int n2, int n3, int r, std::uint64_t seed) {
    if (r < 1 || r > std::min(n1, n2))
        throw RankTooLarge("gen_lowrank: need 1 <= r <= min(n1, n2)");
    const Tensor3 a = gen_gaussian(n1, r, n3, derive_seed(seed, {0}));
    const Tensor3 b = gen_gaussian(r, n2, n3, derive_seed(seed, {1}));
    return tprod(a, b);
}

// Uniform mask with exactly round(sr * n1*n2*n3) observed entries, chosen
// without replacement by a partial Fisher-Yates shuffle of the flat index
// range.
inline Mask random_mask(int n1, int n2, int n3, double sr, std::uint64_t seed) {
    if (!(sr > 0.0 && sr <= 1.0)) throw InvalidRate("random_mask: sr must lie in (0, 1]");
    Mask mask(n1, n2, n3);
    const std::size_t total = mask.size();
    const std::size_t target =
        static_cast<std::size_t>(std::llround(sr * static_cast<double>(total)));
    std::vector<std::size_t> idx(total);
    for (std::size_t t = 0; t < total; ++t) idx[t] = t;
    SplitMix64 rng(seed);
    for (std::size_t t = 0; t < target; ++t) {
        const std::size_t j = t + rng.next_below(total - t);
        std::swap(idx[t], idx[j]);
        mask.set_flat(idx[t], true);
    }
    return mask;
}

// Vertical stripe mask, identical on every frontal slice: columns j with
// (j mod period) < stripe_width are missing.
inline Mask stripe_mask(int n1, int n2, int n3, int stripe_width, int period) {
    if (!(stripe_width > 0 && stripe_width < period && period <= n2))
        throw InvalidPattern("stripe_mask: need 0 < stripe_width < period <= n2");
    Mask mask(n1, n2, n3);
    for (int k = 0; k < n3; ++k)
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j) mask.set(i, j, k, j % period >= stripe_width);
    return mask;
}

// Observed tensor: x on the mask, zero elsewhere.
inline Tensor3 apply_mask(const Tensor3& x, const Mask& mask) {
    if (!mask.same_dims(x)) throw DimMismatch("apply_mask: dims differ");
    Tensor3 out(x.n1(), x.n2(), x.n3());
    const double* px = x.data();
    double* po = out.data();
    for (std::size_t t = 0; t < x.size(); ++t) po[t] = mask.observed_flat(t) ? px[t] : 0.0;
    return out;
}

}  // namespace tubal
