#pragma once

// Scoring: RFE statistics (with pairwise NaN exclusion), empirical CDFs,
// the reconstruction-residual nRMSE reliability metric, and threshold
// transient flagging.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "rocofbench/estimators.hpp"

namespace rocofbench {

struct ErrorStats {
    double mean = 0.0;
    double std = 0.0;      // population
    double p95_abs = 0.0;  // linear-interpolation percentile of |error|
    double pearson = 0.0;  // between estimate and reference
    bool pearson_defined = false;
    std::size_t n = 0;
};

// linear-interpolation percentile on sorted data, q in [0, 1]
inline double percentile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline ErrorStats rfe_stats(const std::vector<double>& est, const std::vector<double>& ref) {
    if (est.size() != ref.size()) throw std::invalid_argument("stats inputs differ in length");
    std::vector<double> e, r;
    e.reserve(est.size());
    r.reserve(est.size());
    for (std::size_t i = 0; i < est.size(); ++i) {
        if (std::isnan(est[i]) || std::isnan(ref[i])) continue;  // flagged, excluded pairwise
        e.push_back(est[i]);
        r.push_back(ref[i]);
    }
    const std::size_t n = e.size();
    if (n < 2) throw std::invalid_argument("fewer than 2 scored pairs");

    ErrorStats s;
    s.n = n;
    double me = 0.0, mr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        me += e[i];
        mr += r[i];
    }
    me /= static_cast<double>(n);
    mr /= static_cast<double>(n);

    double m = 0.0;
    std::vector<double> abs_err(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = e[i] - r[i];
        m += d;
        abs_err[i] = std::abs(d);
    }
    s.mean = m / static_cast<double>(n);
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (e[i] - r[i]) - s.mean;
        v += d * d;
    }
    s.std = std::sqrt(v / static_cast<double>(n));
    std::sort(abs_err.begin(), abs_err.end());
    s.p95_abs = percentile_sorted(abs_err, 0.95);

    double see = 0.0, srr = 0.0, ser = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double de = e[i] - me;
        const double dr = r[i] - mr;
        see += de * de;
        srr += dr * dr;
        ser += de * dr;
    }
    if (see > 0.0 && srr > 0.0) {
        s.pearson = ser / std::sqrt(see * srr);
        s.pearson_defined = true;
    }
    return s;
}

// step CDF of error magnitudes; quantile(q) is the ceil(q*n)-th order statistic
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(const std::vector<double>& errors) {
        if (errors.empty()) throw std::invalid_argument("empty error sample");
        mags_.reserve(errors.size());
        for (double v : errors) mags_.push_back(std::abs(v));
        std::sort(mags_.begin(), mags_.end());
    }

    double operator()(double x) const {
        const auto it = std::upper_bound(mags_.begin(), mags_.end(), x);
        return static_cast<double>(it - mags_.begin()) / static_cast<double>(mags_.size());
    }

    double quantile(double q) const {
        const auto n = static_cast<double>(mags_.size());
        std::size_t k = static_cast<std::size_t>(std::ceil(q * n));
        if (k < 1) k = 1;
        if (k > mags_.size()) k = mags_.size();
        return mags_[k - 1];
    }

    const std::vector<double>& sorted_magnitudes() const { return mags_; }

private:
    std::vector<double> mags_;
};

// residual energy of the estimate-based reconstruction over window energy,
// in ppm. Static algorithms reconstruct with constant amplitude and linear
// phase; the dynamic model adds its quadratic phase term.
inline double nrmse_ppm(std::span<const double> window, const PhasorEstimate& est,
                        const EstimatorConfig& cfg) {
    const std::size_t n = window.size();
    double energy = 0.0;
    for (double v : window) energy += v * v;
    if (!(energy > 0.0)) throw std::invalid_argument("zero-energy window");

    const bool quadratic = cfg.algo == algorithm::tfm && std::isfinite(est.rocof);
    double resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = (static_cast<double>(i) - static_cast<double>(n) / 2.0) / cfg.fs;
        double phase = est.phase + two_pi * est.freq * dt;
        if (quadratic) phase += std::numbers::pi * est.rocof * dt * dt;
        const double rec = est.amplitude * std::cos(phase);
        const double d = window[i] - rec;
        resid += d * d;
    }
    return resid / energy * 1e6;
}

inline std::vector<bool> detect_transient(const std::vector<double>& nrmse_stream,
                                          double threshold_ppm) {
    if (!(threshold_ppm > 0.0)) throw std::invalid_argument("threshold must be positive");
    std::vector<bool> flags(nrmse_stream.size());
    for (std::size_t i = 0; i < nrmse_stream.size(); ++i)
        flags[i] = nrmse_stream[i] > threshold_ppm;
    return flags;
}

}  // namespace rocofbench
