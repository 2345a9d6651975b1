#pragma once

// Hann-window spectral helpers shared by the estimators: band-limited
// DFT bins, closed-form window transforms for leakage synthesis, and
// dense DTFT grids (equivalent to zero-padded FFT bins on the same grid).

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace rocofbench {

using cdouble = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// periodic hann, w[n] = 0.5(1 - cos(2*pi*n/N))
inline std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 * (1.0 - std::cos(two_pi * static_cast<double>(i) / static_cast<double>(n)));
    return w;
}

// X[k] = sum x[n] e^{-j 2 pi k n / N} for one (possibly fractional) k
inline cdouble dft_bin(std::span<const double> x, double k) {
    const std::size_t n = x.size();
    const double step = -two_pi * k / static_cast<double>(n);
    // incremental rotation; double precision drift is ~n*eps, fine at n<=500
    const cdouble rot(std::cos(step), std::sin(step));
    cdouble ph(1.0, 0.0), acc(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        acc += x[i] * ph;
        ph *= rot;
    }
    return acc;
}

// bins k0..k1 inclusive of the half spectrum
inline std::vector<cdouble> dft_bins(std::span<const double> x, int k0, int k1) {
    std::vector<cdouble> out;
    out.reserve(static_cast<std::size_t>(k1 - k0 + 1));
    for (int k = k0; k <= k1; ++k) out.push_back(dft_bin(x, k));
    return out;
}

inline std::vector<cdouble> half_spectrum(std::span<const double> x) {
    return dft_bins(x, 0, static_cast<int>(x.size() / 2));
}

// periodic Dirichlet kernel in bin units: DFT of the rectangular window
// evaluated at fractional bin m; D(0) = N
inline cdouble dirichlet(double m, std::size_t n) {
    const double nn = static_cast<double>(n);
    const double denom = std::sin(std::numbers::pi * m / nn);
    const cdouble ph = std::polar(1.0, -std::numbers::pi * m * (nn - 1.0) / nn);
    if (std::abs(denom) < 1e-12) return ph * nn * std::cos(std::numbers::pi * m) /
                                        std::cos(std::numbers::pi * m / nn);
    return ph * (std::sin(std::numbers::pi * m) / denom);
}

// transform of the periodic hann window at fractional bin m
inline cdouble hann_transform(double m, std::size_t n) {
    return 0.5 * dirichlet(m, n) - 0.25 * dirichlet(m - 1.0, n) - 0.25 * dirichlet(m + 1.0, n);
}

// hann-windowed spectrum of A cos(2 pi f t + phi) at fractional bin k;
// nu = f*N/fs. Positive-frequency part plus its image.
inline cdouble tone_bin(double k, double nu, double amp, double phase, std::size_t n) {
    return 0.5 * amp *
           (std::polar(1.0, phase) * hann_transform(k - nu, n) +
            std::polar(1.0, -phase) * hann_transform(k + nu, n));
}

// image (negative-frequency) part alone
inline cdouble image_bin(double k, double nu, double amp, double phase, std::size_t n) {
    return 0.5 * amp * std::polar(1.0, -phase) * hann_transform(k + nu, n);
}

// dense DTFT of pre-windowed samples on the grid f = (k0+i)*fs/npad,
// i = 0..count-1. Matches the corresponding bins of an npad-point
// zero-padded DFT exactly.
inline std::vector<cdouble> dense_dtft(std::span<const double> xw, double fs,
                                       std::uint64_t npad, std::uint64_t k0, std::size_t count) {
    std::vector<cdouble> out(count);
    const std::size_t n = xw.size();
    for (std::size_t i = 0; i < count; ++i) {
        const double f = static_cast<double>(k0 + i) * fs / static_cast<double>(npad);
        const double step = -two_pi * f / fs;
        const cdouble rot(std::cos(step), std::sin(step));
        cdouble ph(1.0, 0.0), acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            acc += xw[j] * ph;
            ph *= rot;
        }
        out[i] = acc;
    }
    return out;
}

/// 3-point interpolation around the magnitude peak: returns the fractional
// bin offset for a hann-windowed spectrum
inline double hann_interp3(double mag_lo, double mag_pk, double mag_hi) {
    const double denom = mag_lo + 2.0 * mag_pk + mag_hi;
    if (denom <= 0.0) return 0.0;
    return 2.0 * (mag_hi - mag_lo) / denom;
}

// hann window gain at fractional offset d relative to the on-bin gain,
// corr = |W(d)|/(N/2); the tone amplitude recovers as A = 4|X|/(N*corr)
inline double hann_amp_corr(double d) {
    const double pd = std::numbers::pi * d;
    if (std::abs(d) < 1e-9) return 1.0;
    // |W(d)|/(N/2) = |sin(pi d)/(pi d)| / |1 - d^2|
    return std::abs(std::sin(pd) / pd / (1.0 - d * d));
}

}  // namespace rocofbench
