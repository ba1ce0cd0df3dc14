#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "test_helpers.hpp"
#include "tubal/metrics.hpp"
#include "tubal/tsvd.hpp"

using namespace tubal;
using Catch::Matchers::WithinAbs;

namespace {

Tensor3 reconstruct(const TubalSVD& d) {
    return tprod(tprod(d.u, d.s), conj_transpose(d.v));
}

bool is_f_diagonal(const Tensor3& s) {
    for (int k = 0; k < s.n3(); ++k)
        for (int i = 0; i < s.n1(); ++i)
            for (int j = 0; j < s.n2(); ++j)
                if (i != j && s(i, j, k) != 0.0) return false;
    return true;
}

// Reference construction without conjugate mirroring: decompose every
// transform-domain slice independently.
TubalSVD tsvd_all_slices(const Tensor3& a) {
    const int n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
    const int r = std::min(n1, n2);
    SpectralTensor3 fa = fft_mode3(a);
    SpectralTensor3 fu(n1, r, n3), fs(r, r, n3), fv(n2, r, n3);
    for (int k = 0; k < n3; ++k) {
        MatrixSVD dec = svd_complex(spectral_slice(fa, k));
        for (int j = 0; j < r; ++j)
            for (int i = 0; i < n1; ++i) fu(i, j, k) = dec.u(i, j);
        for (int j = 0; j < r; ++j)
            for (int i = 0; i < n2; ++i) fv(i, j, k) = dec.v(i, j);
        for (int i = 0; i < r; ++i) fs(i, i, k) = cd{dec.s[i], 0.0};
    }
    return TubalSVD{ifft_mode3(fu), ifft_mode3(fs), ifft_mode3(fv)};
}

Tensor3 gtsvt_all_slices(const Tensor3& x, const RegularizerSpec& spec) {
    SpectralTensor3 fx = fft_mode3(x);
    SpectralTensor3 fy(x.n1(), x.n2(), x.n3());
    for (int k = 0; k < x.n3(); ++k)
        set_spectral_slice(fy, k, gsvt_matrix(spectral_slice(fx, k), spec));
    return ifft_mode3(fy);
}

}  // namespace

TEST_CASE("tsvd of the zero tensor") {
    TubalSVD d = tsvd(Tensor3(4, 3, 5));
    CHECK(frob_norm(d.s) == 0.0);
    CHECK(is_f_diagonal(d.s));
}

TEST_CASE("tsvd of the identity tensor") {
    TubalSVD d = tsvd(identity_tensor(3, 4));
    CHECK(testutil::rel_err(d.s, identity_tensor(3, 4)) < 1e-12);
    CHECK(testutil::rel_err(reconstruct(d), identity_tensor(3, 4)) < 1e-10);
}

TEST_CASE("tsvd invariants on random tensors, odd and even tube lengths") {
    for (auto [n1, n2, n3] : {std::tuple{6, 5, 4}, {5, 6, 7}}) {
        Tensor3 a = testutil::random_tensor(n1, n2, n3, 100 * n1 + n3);
        CAPTURE(n1, n2, n3);

        TubalSVD econ = tsvd(a);
        CHECK(is_f_diagonal(econ.s));
        CHECK(testutil::rel_err(reconstruct(econ), a) < 1e-8);

        TubalSVD full = tsvd(a, TsvdForm::Full);
        CHECK(testutil::rel_err(reconstruct(full), a) < 1e-8);
        Tensor3 uut = tprod(full.u, conj_transpose(full.u));
        CHECK(testutil::rel_err(uut, identity_tensor(n1, n3)) < 1e-8);
        Tensor3 vvt = tprod(full.v, conj_transpose(full.v));
        CHECK(testutil::rel_err(vvt, identity_tensor(n2, n3)) < 1e-8);

        // transform-domain singular tubes are real, nonnegative, nonincreasing
        SpectralTensor3 fsv = fft_mode3(econ.s);
        for (int k = 0; k < n3; ++k) {
            double prev = 1e300;
            for (int i = 0; i < std::min(n1, n2); ++i) {
                CHECK(std::abs(fsv(i, i, k).imag()) < 1e-9 * (1.0 + std::abs(fsv(i, i, k))));
                CHECK(fsv(i, i, k).real() >= -1e-10);
                CHECK(fsv(i, i, k).real() <= prev + 1e-9);
                prev = fsv(i, i, k).real();
            }
        }
    }
}

TEST_CASE("mirrored construction equals decomposing every slice") {
    for (auto [n1, n2, n3] : {std::tuple{6, 5, 4}, {5, 6, 7}}) {
        Tensor3 a = testutil::random_tensor(n1, n2, n3, 7 * n1 + n3);
        TubalSVD m = tsvd(a);
        TubalSVD f = tsvd_all_slices(a);
        CAPTURE(n1, n2, n3);
        CHECK(testutil::max_abs_diff(m.u, f.u) < 1e-10);
        CHECK(testutil::max_abs_diff(m.s, f.s) < 1e-10);
        CHECK(testutil::max_abs_diff(m.v, f.v) < 1e-10);
    }
}

TEST_CASE("tubal rank") {
    CHECK(tubal_rank(Tensor3(5, 5, 3)) == 0);
    CHECK(tubal_rank(identity_tensor(4, 3)) == 4);
    Tensor3 lr = gen_lowrank(20, 20, 5, 3, 17);
    CHECK(tubal_rank(lr, 1e-8) == 3);
    CHECK_THROWS_AS(tubal_rank(lr, -1.0), InvalidParam);
}

TEST_CASE("tensor nuclear norm") {
    CHECK(tnn(Tensor3(4, 4, 3)) == 0.0);
    CHECK_THAT(tnn(identity_tensor(5, 4)), WithinAbs(5.0, 1e-10));

    // n3 = 1 collapses to the matrix nuclear norm
    Tensor3 a = testutil::random_tensor(5, 4, 1, 3);
    CMat slice(5, 4);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 4; ++j) slice(i, j) = cd{a(i, j, 0), 0.0};
    double ref = 0.0;
    for (double s : singular_values(slice)) ref += s;
    CHECK_THAT(tnn(a), WithinAbs(ref, 1e-10));
}

TEST_CASE("matrix-level thresholding") {
    SECTION("large threshold zeroes the matrix") {
        CMat a(3, 3);
        a(0, 0) = cd{2.0, 1.0};
        a(1, 2) = cd{-1.0, 0.5};
        CMat y = gsvt_matrix(a, RegularizerSpec::soft(100.0));
        CHECK(frob_norm(y) == 0.0);
    }
    SECTION("diagonal example") {
        CMat a(2, 2);
        a(0, 0) = cd{4.0, 0.0};
        a(1, 1) = cd{0.5, 0.0};
        CMat y = gsvt_matrix(a, RegularizerSpec::hop(0.5, 1.0));
        CHECK_THAT(std::abs(y(0, 0)), WithinAbs(3.5, 1e-12));
        CHECK_THAT(std::abs(y(1, 1)), WithinAbs(0.0, 1e-12));
        CHECK_THAT(std::abs(y(0, 1)) + std::abs(y(1, 0)), WithinAbs(0.0, 1e-12));
    }
    SECTION("vanishing threshold returns the input") {
        GaussianStream g(5);
        CMat a(4, 3);
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 4; ++i) a(i, j) = cd{g.next(), g.next()};
        CMat y = gsvt_matrix(a, RegularizerSpec::soft(1e-12));
        double d = 0.0;
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(y(i, j) - a(i, j)));
        CHECK(d < 1e-9);
    }
}

TEST_CASE("tensor-level thresholding") {
    const auto spec = RegularizerSpec::how(std::sqrt(2.0), 0.8);

    SECTION("zero in, zero out") {
        CHECK(frob_norm(gtsvt(Tensor3(4, 4, 3), spec)) == 0.0);
    }
    SECTION("vanishing threshold is the identity") {
        Tensor3 a = testutil::random_tensor(4, 5, 3, 21);
        CHECK(testutil::rel_err(gtsvt(a, RegularizerSpec::soft(1e-12)), a) < 1e-9);
    }
    SECTION("mirrored equals slice-by-slice on the full spectrum") {
        Tensor3 a = testutil::random_tensor(5, 4, 6, 22);
        for (const auto& s :
             {RegularizerSpec::soft(0.5), RegularizerSpec::hop(0.3, 0.5),
              RegularizerSpec::how(std::sqrt(2.0), 0.5), RegularizerSpec::hoc(1.0, 0.5)}) {
            CHECK(testutil::max_abs_diff(gtsvt(a, s), gtsvt_all_slices(a, s)) < 1e-10);
        }
    }
    SECTION("scalar collapse: 1x1x1 tensors reduce to the scalar threshold") {
        for (double x : {-3.0, -0.9, 0.0, 0.4, 1.0, 2.7}) {
            Tensor3 t(1, 1, 1);
            t(0, 0, 0) = x;
            for (const auto& s : {RegularizerSpec::soft(1.0), RegularizerSpec::hop(0.3, 1.0),
                                  RegularizerSpec::how(std::sqrt(2.0), 1.0),
                                  RegularizerSpec::hoc(1.0, 1.0)}) {
                CHECK_THAT(gtsvt(t, s)(0, 0, 0), WithinAbs(threshold(s, x), 1e-12));
            }
        }
    }
    SECTION("thresholding never raises the tubal rank") {
        Tensor3 low = gen_lowrank(10, 10, 4, 3, 31);
        Tensor3 noisy = low;
        GaussianStream g(32);
        for (std::size_t t = 0; t < noisy.size(); ++t) noisy.data()[t] += 0.01 * g.next();
        CHECK(tubal_rank(gtsvt(noisy, spec), 1e-8) <= tubal_rank(noisy, 1e-8));
    }
}

TEST_CASE("per-slice shrinkage stays within the threshold bound") {
    Tensor3 a = testutil::random_tensor(6, 5, 4, 41);
    const double lambda = 0.7;
    for (const auto& spec : {RegularizerSpec::soft(lambda), RegularizerSpec::hop(0.3, lambda),
                             RegularizerSpec::how(std::sqrt(2.0), lambda),
                             RegularizerSpec::hoc(1.0, lambda)}) {
        Tensor3 y = gtsvt(a, spec);
        SpectralTensor3 fa = fft_mode3(a), fy = fft_mode3(y);
        for (int k = 0; k < 4; ++k) {
            auto sin_ = singular_values(spectral_slice(fa, k));
            auto sout = singular_values(spectral_slice(fy, k));
            for (std::size_t i = 0; i < sin_.size(); ++i) {
                CHECK(sin_[i] - sout[i] >= -1e-9);
                CHECK(sin_[i] - sout[i] <= lambda + 1e-9);
            }
        }
    }
}

TEST_CASE("surviving singular directions stay in the input subspaces") {
    Tensor3 a = testutil::random_tensor(6, 5, 4, 51);
    const auto spec = RegularizerSpec::how(std::sqrt(2.0), 1.0);
    Tensor3 y = gtsvt(a, spec);
    SpectralTensor3 fa = fft_mode3(a), fy = fft_mode3(y);
    for (int k = 0; k < 4; ++k) {
        MatrixSVD din = svd_complex(spectral_slice(fa, k));
        MatrixSVD dout = svd_complex(spectral_slice(fy, k));
        // project surviving left vectors onto the input's left space
        for (int j = 0; j < dout.u.cols(); ++j) {
            if (dout.s[j] < 1e-10) continue;
            double norm_in = 0.0;
            for (int t = 0; t < din.u.cols(); ++t) {
                cd proj{0.0, 0.0};
                for (int i = 0; i < 6; ++i) proj += std::conj(din.u(i, t)) * dout.u(i, j);
                norm_in += std::norm(proj);
            }
            CHECK_THAT(std::sqrt(norm_in), WithinAbs(1.0, 1e-8));
        }
    }
}

TEST_CASE("soft-spec objective is no worse than nearby candidates") {
    Tensor3 x = testutil::random_tensor(6, 6, 3, 61);
    const double lambda = 1.5;
    const auto spec = RegularizerSpec::soft(lambda);
    auto objective = [&](const Tensor3& y) {
        double fit = 0.0;
        for (std::size_t t = 0; t < x.size(); ++t) {
            const double d = x.data()[t] - y.data()[t];
            fit += d * d;
        }
        return lambda * tnn(y) + 0.5 * fit;
    };
    Tensor3 best = gtsvt(x, spec);
    const double fbest = objective(best);
    CHECK(fbest <= objective(x) + 1e-9);
    CHECK(fbest <= objective(Tensor3(6, 6, 3)) + 1e-9);
    CHECK(fbest <= objective(gtsvt(x, RegularizerSpec::soft(0.5 * lambda))) + 1e-9);
    CHECK(fbest <= objective(gtsvt(x, RegularizerSpec::soft(2.0 * lambda))) + 1e-9);
}
