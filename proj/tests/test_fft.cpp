#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "test_helpers.hpp"
#include "tubal/fft.hpp"
#include "tubal/tensor3.hpp"

using namespace tubal;
using Catch::Matchers::WithinAbs;

TEST_CASE("length-1 transform is the identity") {
    Tensor3 a = testutil::random_tensor(3, 4, 1, 10);
    SpectralTensor3 f = fft_mode3(a);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(f(i, j, 0).real() == a(i, j, 0));
            CHECK(f(i, j, 0).imag() == 0.0);
        }
}

TEST_CASE("constant tube transforms to an impulse") {
    Tensor3 a(1, 1, 6);
    for (int k = 0; k < 6; ++k) a(0, 0, k) = 2.5;
    SpectralTensor3 f = fft_mode3(a);
    CHECK_THAT(f(0, 0, 0).real(), WithinAbs(15.0, 1e-12));
    for (int k = 1; k < 6; ++k) CHECK_THAT(std::abs(f(0, 0, k)), WithinAbs(0.0, 1e-12));
}

TEST_CASE("round trip at several tube lengths") {
    // covers identity, power-of-two, small direct, and Bluestein paths
    for (int n3 : {1, 2, 5, 6, 8, 20, 31, 37, 64, 100}) {
        Tensor3 a = testutil::random_tensor(5, 4, n3, 100 + n3);
        Tensor3 b = ifft_mode3(fft_mode3(a));
        CAPTURE(n3);
        CHECK(testutil::rel_err(b, a) < 1e-12);
    }
}

TEST_CASE("transform of a real tensor is conjugate-symmetric") {
    for (int n3 : {4, 7, 12}) {
        Tensor3 a = testutil::random_tensor(6, 3, n3, 200 + n3);
        CHECK(conj_symmetry_error(fft_mode3(a)) < 1e-10);
    }
}

TEST_CASE("all-zero spectral tensor inverts to zero") {
    SpectralTensor3 s(3, 3, 4);
    Tensor3 z = ifft_mode3(s);
    CHECK(frob_norm(z) == 0.0);
}

TEST_CASE("broken conjugate symmetry is rejected") {
    Tensor3 a = testutil::random_tensor(3, 3, 4, 11);
    SpectralTensor3 f = fft_mode3(a);
    f(1, 1, 3) += cd{0.0, 1.0};  // slice 3 must mirror slice 1
    CHECK_THROWS_AS(ifft_mode3(f), ResidualImaginary);
}

TEST_CASE("inner product and norm carry to the transform domain with a 1/n3 factor") {
    for (int trial = 0; trial < 20; ++trial) {
        Tensor3 a = testutil::random_tensor(4, 5, 6, 300 + trial);
        Tensor3 b = testutil::random_tensor(4, 5, 6, 400 + trial);
        SpectralTensor3 fa = fft_mode3(a);
        SpectralTensor3 fb = fft_mode3(b);

        const double lhs = inner_product(a, b);
        const cd rhs = spectral_inner_product(fa, fb);
        CHECK_THAT(lhs, WithinAbs(rhs.real() / 6.0, 1e-10 * std::max(1.0, std::abs(lhs))));
        CHECK_THAT(rhs.imag() / 6.0, WithinAbs(0.0, 1e-10 * std::max(1.0, std::abs(lhs))));

        const double fa2 = frob_norm(a) * frob_norm(a);
        const double ga2 = frob_norm(fa) * frob_norm(fa) / 6.0;
        CHECK_THAT(fa2, WithinAbs(ga2, 1e-10 * fa2));
    }
}

TEST_CASE("identity tensor transforms to identity in every slice") {
    SpectralTensor3 f = fft_mode3(identity_tensor(3, 5));
    for (int k = 0; k < 5; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK_THAT(std::abs(f(i, j, k) - (i == j ? cd{1, 0} : cd{0, 0})),
                           WithinAbs(0.0, 1e-12));
}
