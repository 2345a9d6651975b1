#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "rocofbench/prng.hpp"
#include "rocofbench/spectrum.hpp"

using namespace rocofbench;

namespace {

// textbook DFT evaluation, no incremental rotation tricks
cdouble naive_bin(const std::vector<double>& x, double k) {
    cdouble acc(0.0, 0.0);
    for (std::size_t n = 0; n < x.size(); ++n)
        acc += x[n] * std::polar(1.0, -two_pi * k * static_cast<double>(n) /
                                          static_cast<double>(x.size()));
    return acc;
}

std::vector<double> random_samples(std::size_t n, std::uint64_t seed) {
    philox4x32 rng(seed, 99);
    std::vector<double> x(n);
    for (auto& v : x) v = rng.next_gaussian();
    return x;
}

}  // namespace

TEST_CASE("hann window endpoints, symmetry, coherent gain") {
    const std::size_t n = 500;
    auto w = hann_window(n);
    CHECK(w[0] == 0.0);
    for (std::size_t k = 1; k < n; ++k)
        CHECK(w[k] == Catch::Approx(w[n - k]).margin(1e-15));
    double sum = 0.0;
    for (double v : w) sum += v;
    CHECK(sum == Catch::Approx(n / 2.0).margin(1e-9));
}

TEST_CASE("dft_bin matches naive evaluation on random data") {
    auto x = random_samples(257, 11);
    for (double k : {0.0, 1.0, 5.5, 17.25, 128.0}) {
        auto a = dft_bin(x, k);
        auto b = naive_bin(x, k);
        CHECK(std::abs(a - b) < 1e-9);
    }
}

TEST_CASE("on-bin cosine lands entirely in its bin") {
    const std::size_t n = 64;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::cos(two_pi * 5.0 * i / n);
    CHECK(std::abs(dft_bin(x, 5.0)) == Catch::Approx(n / 2.0).margin(1e-9));
    CHECK(std::abs(dft_bin(x, 7.0)) < 1e-9);
}

TEST_CASE("half_spectrum covers bins 0..N/2") {
    auto x = random_samples(100, 12);
    auto s = half_spectrum(x);
    REQUIRE(s.size() == 51);
    CHECK(std::abs(s[17] - naive_bin(x, 17.0)) < 1e-9);
}

TEST_CASE("dirichlet closed form equals the geometric sum") {
    const std::size_t n = 50;
    for (double m : {0.3, 2.3, -1.7, 24.9, 1e-13}) {
        cdouble direct(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            direct += std::polar(1.0, -two_pi * m * static_cast<double>(i) / n);
        CHECK(std::abs(dirichlet(m, n) - direct) < 1e-9);
    }
    CHECK(std::abs(dirichlet(0.0, n) - cdouble(50.0, 0.0)) < 1e-12);
    CHECK(std::abs(dirichlet(3.0, n)) < 1e-12);  // nonzero integers vanish
}

TEST_CASE("hann transform equals the windowed geometric sum") {
    const std::size_t n = 64;
    auto w = hann_window(n);
    for (double m : {0.45, 3.2, -2.8}) {
        cdouble direct(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            direct += w[i] * std::polar(1.0, -two_pi * m * static_cast<double>(i) / n);
        CHECK(std::abs(hann_transform(m, n) - direct) < 1e-9);
    }
}

TEST_CASE("tone_bin reproduces the windowed spectrum of a cosine") {
    const std::size_t n = 200;
    const double fs = 5000.0, f = 47.3, amp = 1.4, ph = 0.9;
    auto w = hann_window(n);
    std::vector<double> xw(n);
    for (std::size_t i = 0; i < n; ++i)
        xw[i] = w[i] * amp * std::cos(two_pi * f * i / fs + ph);
    const double nu = f * n / fs;
    for (int k = 1; k < 6; ++k) {
        cdouble want = dft_bin(xw, k);
        cdouble got = tone_bin(k, nu, amp, ph, n);
        CHECK(std::abs(got - want) < 1e-9 * n);
        // and the image part alone is the difference to the positive term
        cdouble pos = 0.5 * amp * std::polar(1.0, ph) * hann_transform(k - nu, n);
        CHECK(std::abs(image_bin(k, nu, amp, ph, n) - (want - pos)) < 1e-9 * n);
    }
}

TEST_CASE("dense_dtft equals zero-padded DFT bins") {
    auto x = random_samples(64, 13);
    const double fs = 5000.0;
    const std::uint64_t npad = 1024;
    auto grid = dense_dtft(x, fs, npad, 100, 5);
    for (std::size_t i = 0; i < 5; ++i) {
        // bin k of the npad-point transform is the length-64 DFT at k*64/npad
        const double keq = static_cast<double>(100 + i) * 64.0 / static_cast<double>(npad);
        CHECK(std::abs(grid[i] - naive_bin(x, keq)) < 1e-9);
    }
}

TEST_CASE("3-point interpolation is zero for a symmetric peak") {
    CHECK(hann_interp3(1.0, 2.0, 1.0) == 0.0);
    CHECK(hann_interp3(0.5, 2.0, 1.5) == Catch::Approx(2.0 * (1.5 - 0.5) / (0.5 + 4.0 + 1.5)));
}

TEST_CASE("amplitude correction approaches the exact window gain") {
    const std::size_t n = 5000;
    for (double d : {0.05, 0.2, 0.49, -0.35}) {
        const double exact = std::abs(hann_transform(d, n)) / (n / 2.0);
        CHECK(hann_amp_corr(d) == Catch::Approx(exact).epsilon(1e-6));
    }
    CHECK(hann_amp_corr(0.0) == 1.0);
}
