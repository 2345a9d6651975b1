#pragma once

// Window-based synchrophasor estimators: interpolated-DFT variants with
// image/interferer leakage compensation (static signal model) and a
// Taylor-Fourier least-squares fit with greedy dictionary selection
// (dynamic model). All estimates are stamped at the window midpoint.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "rocofbench/spectrum.hpp"
#include "rocofbench/waveform.hpp"

namespace rocofbench {

enum class algorithm { e_ipdft, i_ipdft, tfm };
enum class rocof_mode { finite_difference, derivative };

struct EstimatorConfig {
    int window_cycles = 5;        // 3 for class P, 5 for class M
    double fs = 5000.0;
    double f_nominal = 50.0;
    double reporting_rate = 50.0;
    algorithm algo = algorithm::e_ipdft;
    rocof_mode rocof = rocof_mode::finite_difference;

    // static-model tunables
    int ipdft_iterations = 2;            // image-compensation rounds
    int iipdft_max_outer = 3;            // interferer detection rounds
    double interferer_energy_ratio = 1e-3;  // accept if Ai^2 > ratio * A^2

    // dynamic-model tunables
    int taylor_order = 2;
    int atom_budget = 12;
    double residual_tol = 1e-6;          // stop once resid energy / window energy below
    double atom_accept_ratio = 1e-3;     // reject atoms explaining less of initial energy
    int retune_rounds = 2;               // per-atom frequency polish after acceptance
    int max_interharmonics = 2;          // residual-peak candidates per greedy round
    int harmonic_max = 10;
    bool weighted_fit = true;            // sqrt-hann row weighting
    double condition_guard = 1e10;

    std::size_t window_samples() const {
        return static_cast<std::size_t>(std::llround(window_cycles * fs / f_nominal));
    }
    std::size_t hop_samples() const {
        return static_cast<std::size_t>(std::llround(fs / reporting_rate));
    }
};

constexpr unsigned flag_first_sample_rocof_undefined = 1u << 0;
constexpr unsigned flag_convergence_failed = 1u << 1;
constexpr unsigned flag_transient = 1u << 2;

struct PhasorEstimate {
    double t_mid = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;  // rad in (-pi, pi], at t_mid
    double freq = 0.0;
    double rocof = std::numeric_limits<double>::quiet_NaN();
    double nrmse_ppm = std::numeric_limits<double>::quiet_NaN();
    unsigned flags = 0;
};

inline double wrap_phase(double a) {
    double y = std::remainder(a, two_pi);
    if (y <= -std::numbers::pi) y += two_pi;
    return y;
}

namespace detail {

// tone parameters with phase referenced to the window start
struct tone {
    double freq = 0.0;
    double amp = 0.0;
    double phase = 0.0;
};

inline tone interp_from_bins(const std::array<cdouble, 3>& X, int k0, std::size_t n, double fs) {
    const double nn = static_cast<double>(n);
    const double d = hann_interp3(std::abs(X[0]), std::abs(X[1]), std::abs(X[2]));
    tone t;
    t.freq = (k0 + d) * fs / nn;
    t.amp = 4.0 / nn * std::abs(X[1]) / hann_amp_corr(d);
    t.phase = std::arg(X[1]) - std::numbers::pi * d * (nn - 1.0) / nn;
    return t;
}

inline std::array<cdouble, 3> image3(const tone& t, int k0, std::size_t n, double fs) {
    const double nu = t.freq * static_cast<double>(n) / fs;
    std::array<cdouble, 3> out;
    for (int i = 0; i < 3; ++i)
        out[i] = image_bin(static_cast<double>(k0 - 1 + i), nu, t.amp, t.phase, n);
    return out;
}

// interpolate, then iteratively strip the negative-frequency image from the
// three bins and re-interpolate. `diverged` reports |delta| escaping (-0.5, 0.5).
inline tone compensate_image(const std::array<cdouble, 3>& X, int k0, std::size_t n,
                             double fs, int iters, bool* diverged = nullptr) {
    tone t = interp_from_bins(X, k0, n, fs);
    for (int it = 0; it < iters; ++it) {
        const auto img = image3(t, k0, n, fs);
        std::array<cdouble, 3> Xc{X[0] - img[0], X[1] - img[1], X[2] - img[2]};
        t = interp_from_bins(Xc, k0, n, fs);
    }
    if (diverged) {
        const double d = t.freq * static_cast<double>(n) / fs - k0;
        *diverged = !(std::abs(d) < 0.5);
    }
    return t;
}

struct core_scan {
    tone t;
    int k0 = 0;
    bool edge_peak = false;
    std::vector<cdouble> spectrum;  // hann-windowed half spectrum, bins 0..N/2
};

inline core_scan scan_window(std::span<const double> x, double fs, double fnom) {
    const std::size_t n = x.size();
    const auto w = hann_window(n);
    std::vector<double> xw(n);
    for (std::size_t i = 0; i < n; ++i) xw[i] = x[i] * w[i];

    core_scan s;
    s.spectrum = half_spectrum(xw);
    const int last = static_cast<int>(s.spectrum.size()) - 1;
    const int kmin = std::max(1, static_cast<int>(std::ceil(0.5 * fnom * n / fs)));
    const int kmax = std::min(last - 1, static_cast<int>(std::floor(1.5 * fnom * n / fs)));
    int k0 = kmin;
    double best = -1.0;
    for (int k = kmin; k <= kmax; ++k) {
        const double m = std::abs(s.spectrum[k]);
        if (m > best) {
            best = m;
            k0 = k;
        }
    }
    s.k0 = k0;
    s.edge_peak = (k0 <= 1) || (k0 >= last - 1);
    s.t = interp_from_bins({s.spectrum[k0 - 1], s.spectrum[k0], s.spectrum[k0 + 1]}, k0, n, fs);
    return s;
}

inline PhasorEstimate to_estimate(const tone& t, std::size_t n, double fs, double t_mid,
                                  unsigned flags) {
    PhasorEstimate e;
    e.t_mid = t_mid;
    e.amplitude = t.amp;
    e.freq = t.freq;
    e.phase = wrap_phase(t.phase + two_pi * t.freq * (static_cast<double>(n) / 2.0) / fs);
    e.flags = flags;
    return e;
}

}  // namespace detail

struct ipdft_result {
    double freq = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;  // at window start
    bool edge_peak = false;
};

// plain interpolated-DFT estimate: largest bin near nominal plus 3-point
// fractional correction, no leakage compensation
inline ipdft_result ipdft_core(std::span<const double> x, double fs, double f_nominal) {
    const auto s = detail::scan_window(x, fs, f_nominal);
    return {s.t.freq, s.t.amp, s.t.phase, s.edge_peak};
}

inline PhasorEstimate e_ipdft_estimate(std::span<const double> x, const EstimatorConfig& cfg,
                                       double t_mid = 0.0) {
    const std::size_t n = x.size();
    const auto s = detail::scan_window(x, cfg.fs, cfg.f_nominal);
    bool diverged = false;
    const auto t = detail::compensate_image(
        {s.spectrum[s.k0 - 1], s.spectrum[s.k0], s.spectrum[s.k0 + 1]}, s.k0, n, cfg.fs,
        cfg.ipdft_iterations, &diverged);
    unsigned flags = 0;
    if (s.edge_peak || diverged) flags |= flag_convergence_failed;
    return detail::to_estimate(t, n, cfg.fs, t_mid, flags);
}

// e-IpDFT plus alternating estimation of the strongest residual tone: the
// interferer is located on the fundamental-subtracted spectrum, refined with
// its own image compensation, accepted on an energy ratio, and subtracted
// from the fundamental's interpolation bins before re-estimation.
inline PhasorEstimate i_ipdft_estimate(std::span<const double> x, const EstimatorConfig& cfg,
                                       double t_mid = 0.0) {
    const std::size_t n = x.size();
    const double fs = cfg.fs;
    const double nn = static_cast<double>(n);
    const auto s = detail::scan_window(x, fs, cfg.f_nominal);
    const int k0 = s.k0;
    unsigned flags = s.edge_peak ? flag_convergence_failed : 0u;

    bool diverged = false;
    detail::tone fund = detail::compensate_image(
        {s.spectrum[k0 - 1], s.spectrum[k0], s.spectrum[k0 + 1]}, k0, n, fs,
        cfg.ipdft_iterations, &diverged);
    if (diverged) flags |= flag_convergence_failed;

    const int nbins = static_cast<int>(s.spectrum.size());
    std::vector<detail::tone> interferers;
    for (int outer = 0; outer < cfg.iipdft_max_outer; ++outer) {
        std::vector<double> mag(nbins);
        {
            const double nu_f = fund.freq * nn / fs;
            for (int k = 0; k < nbins; ++k) {
                cdouble r = s.spectrum[k] - tone_bin(k, nu_f, fund.amp, fund.phase, n);
                for (const auto& q : interferers)
                    r -= tone_bin(k, q.freq * nn / fs, q.amp, q.phase, n);
                mag[k] = std::abs(r);
            }
        }
        mag[0] = 0.0;
        for (int k = k0 - 1; k <= k0 + 1; ++k)
            if (k >= 0 && k < nbins) mag[k] = 0.0;
        int ki = 1;
        for (int k = 1; k + 1 < nbins; ++k)
            if (mag[k] > mag[ki]) ki = k;

        // re-derive the residual's complex bins around the peak
        std::array<cdouble, 3> Xi;
        {
            const double nu_f = fund.freq * nn / fs;
            for (int i = 0; i < 3; ++i) {
                const int k = ki - 1 + i;
                cdouble r = s.spectrum[k] - tone_bin(k, nu_f, fund.amp, fund.phase, n);
                for (const auto& q : interferers)
                    r -= tone_bin(k, q.freq * nn / fs, q.amp, q.phase, n);
                Xi[i] = r;
            }
        }
        const detail::tone intf = detail::compensate_image(Xi, ki, n, fs, cfg.ipdft_iterations);
        if (intf.amp * intf.amp <= cfg.interferer_energy_ratio * fund.amp * fund.amp) break;
        interferers.push_back(intf);

        std::array<cdouble, 3> Xf{s.spectrum[k0 - 1], s.spectrum[k0], s.spectrum[k0 + 1]};
        for (const auto& q : interferers) {
            const double nu_q = q.freq * nn / fs;
            for (int i = 0; i < 3; ++i)
                Xf[i] -= tone_bin(static_cast<double>(k0 - 1 + i), nu_q, q.amp, q.phase, n);
        }
        fund = detail::compensate_image(Xf, k0, n, fs, cfg.ipdft_iterations);
    }
    return detail::to_estimate(fund, n, fs, t_mid, flags);
}

namespace detail {

// columns for one dictionary component: t^p cos(2 pi fc t), -t^p sin(...)
// with t in window-normalized units and zero at the midpoint sample
inline Eigen::MatrixXd atom_cols(double fc, std::size_t n, double fs, int order,
                                 const Eigen::VectorXd& sw) {
    const double T = static_cast<double>(n) / fs;
    Eigen::MatrixXd m(n, 2 * (order + 1));
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) - static_cast<double>(n) / 2.0) / fs;
        const double tt = t / T;
        const double c = std::cos(two_pi * fc * t);
        const double sn = std::sin(two_pi * fc * t);
        double tp = 1.0;
        for (int p = 0; p <= order; ++p) {
            m(i, 2 * p) = tp * c * sw(i);
            m(i, 2 * p + 1) = -tp * sn * sw(i);
            tp *= tt;
        }
    }
    return m;
}

inline Eigen::MatrixXd design_matrix(const std::vector<double>& sel, std::size_t n, double fs,
                                     int order, const Eigen::VectorXd& sw) {
    const int bw = 2 * (order + 1);
    Eigen::MatrixXd a(n, bw * sel.size());
    for (std::size_t j = 0; j < sel.size(); ++j)
        a.middleCols(static_cast<int>(j) * bw, bw) = atom_cols(sel[j], n, fs, order, sw);
    return a;
}

struct ls_fit {
    Eigen::VectorXd coef;
    Eigen::VectorXd resid;
    bool ill_conditioned = false;
};

inline ls_fit solve_ls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double cond_guard) {
    ls_fit f;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    f.coef = qr.solve(b);
    f.resid = b - a * f.coef;
    const auto& r = qr.matrixR();
    const int m = static_cast<int>(std::min(a.rows(), a.cols()));
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        const double d = std::abs(r(i, i));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    f.ill_conditioned = !(dmin > 0.0) || dmax / dmin > cond_guard;
    return f;
}

}  // namespace detail

// Taylor-Fourier estimate: least-squares fit of polynomial complex envelopes
// on a greedily selected set of component frequencies. Returns amplitude,
// phase, frequency and the derivative-formulation ROCOF, all at t_mid.
inline PhasorEstimate tfm_estimate(std::span<const double> x, const EstimatorConfig& cfg,
                                   double t_mid = 0.0) {
    const std::size_t n = x.size();
    const double fs = cfg.fs;
    const double nn = static_cast<double>(n);
    const double T = nn / fs;
    const int order = cfg.taylor_order;
    const int bw = 2 * (order + 1);

    const auto scan = detail::scan_window(x, fs, cfg.f_nominal);
    const double fbase = scan.t.freq;
    unsigned flags = scan.edge_peak ? flag_convergence_failed : 0u;

    const auto w = hann_window(n);
    Eigen::VectorXd sw(n);
    for (std::size_t i = 0; i < n; ++i) sw(i) = cfg.weighted_fit ? std::sqrt(w[i]) : 1.0;
    Eigen::VectorXd xw(n);
    for (std::size_t i = 0; i < n; ++i) xw(i) = x[i] * sw(i);
    const double e0 = xw.squaredNorm();

    std::vector<double> sel{fbase};
    auto fit = detail::solve_ls(detail::design_matrix(sel, n, fs, order, sw), xw,
                                cfg.condition_guard);

    while (static_cast<int>(sel.size()) < cfg.atom_budget &&
           fit.resid.squaredNorm() / e0 > cfg.residual_tol) {
        std::vector<double> cands;
        for (int h = 2; h <= cfg.harmonic_max; ++h) {
            const double fc = h * cfg.f_nominal;
            if (fc >= fs / 2.0) break;
            bool clear = true;
            for (double sf : sel)
                if (std::abs(fc - sf) <= fs / nn) { clear = false; break; }
            if (clear) cands.push_back(fc);
        }

        // interharmonic candidates from the residual spectrum, with the
        // already-selected components' neighborhoods masked out
        std::vector<double> rw(n);
        for (std::size_t i = 0; i < n; ++i)
            rw[i] = fit.resid(i) * (cfg.weighted_fit ? sw(i) : w[i]);
        const auto rspec = half_spectrum(rw);
        const int rn = static_cast<int>(rspec.size());
        std::vector<double> rs(rn);
        for (int k = 0; k < rn; ++k) rs[k] = std::abs(rspec[k]);
        rs[0] = 0.0;
        auto mask = [&](int kb) {
            for (int k = std::max(0, kb - 2); k <= std::min(rn - 1, kb + 2); ++k) rs[k] = 0.0;
        };
        for (double sf : sel) mask(static_cast<int>(std::lround(sf * nn / fs)));
        for (int round = 0; round < cfg.max_interharmonics; ++round) {
            int kp = 1;
            for (int k = 1; k + 1 < rn; ++k)
                if (rs[k] > rs[kp]) kp = k;
            if (!(rs[kp] > 0.0)) break;
            const auto cand = detail::compensate_image(
                {rspec[kp - 1], rspec[kp], rspec[kp + 1]}, kp, n, fs, cfg.ipdft_iterations);
            bool clear = true;
            for (double sf : sel)
                if (std::abs(cand.freq - sf) <= fs / nn) { clear = false; break; }
            for (double sf : cands)
                if (std::abs(cand.freq - sf) <= fs / nn) { clear = false; break; }
            if (clear) cands.push_back(cand.freq);
            mask(kp);
        }
        if (cands.empty()) break;

        double best_de = 0.0, best_fc = 0.0;
        bool have_best = false;
        const double re = fit.resid.squaredNorm();
        for (double fc : cands) {
            const Eigen::MatrixXd ac = detail::atom_cols(fc, n, fs, order, sw);
            const auto cf = detail::solve_ls(ac, fit.resid, cfg.condition_guard);
            if (cf.ill_conditioned) continue;
            const double de = re - cf.resid.squaredNorm();
            if (!have_best || de > best_de) {
                best_de = de;
                best_fc = fc;
                have_best = true;
            }
        }
        if (!have_best || best_de <= 0.0) break;
        if (cfg.atom_accept_ratio > 0.0 && best_de < cfg.atom_accept_ratio * e0) break;

        sel.push_back(best_fc);
        auto next = detail::solve_ls(detail::design_matrix(sel, n, fs, order, sw), xw,
                                     cfg.condition_guard);
        if (next.ill_conditioned) {
            sel.pop_back();
            flags |= flag_convergence_failed;
            break;
        }
        fit = std::move(next);

        // polish the accepted atom's frequency from its own envelope slope;
        // bounded drift relative to the frequency it was accepted at
        const double f_acc = best_fc;
        const std::size_t j = sel.size() - 1;
        for (int round = 0; round < cfg.retune_rounds; ++round) {
            const cdouble c0j(fit.coef(bw * j + 0), fit.coef(bw * j + 1));
            const cdouble c1j(fit.coef(bw * j + 2), fit.coef(bw * j + 3));
            if (std::abs(c0j) == 0.0) break;
            const double df =
                std::imag(c1j * std::conj(c0j)) / (two_pi * std::norm(c0j)) / T;
            if (std::abs(sel[j] + df - f_acc) > 0.5 * fs / nn) break;
            sel[j] += df;
            auto retuned = detail::solve_ls(detail::design_matrix(sel, n, fs, order, sw), xw,
                                            cfg.condition_guard);
            if (retuned.ill_conditioned) break;
            fit = std::move(retuned);
        }
    }

    const cdouble c0(fit.coef(0), fit.coef(1));
    const cdouble c1(fit.coef(2), fit.coef(3));
    const cdouble c2 = order >= 2 ? cdouble(fit.coef(4), fit.coef(5)) : cdouble(0.0, 0.0);

    PhasorEstimate e;
    e.t_mid = t_mid;
    e.amplitude = std::abs(c0);
    e.phase = std::arg(c0);
    e.freq = fbase + std::imag(c1 * std::conj(c0)) / (two_pi * std::norm(c0)) / T;
    e.rocof = (std::imag(2.0 * c2 / c0) - std::imag((c1 / c0) * (c1 / c0))) / (two_pi * T * T);
    e.flags = flags;
    return e;
}

struct window_ref {
    double t_mid = 0.0;
    std::span<const double> samples;
};

inline std::vector<window_ref> windows(const waveform& w, const EstimatorConfig& cfg) {
    const std::size_t n = cfg.window_samples();
    const std::size_t hop = cfg.hop_samples();
    if (w.samples.size() < n)
        throw std::invalid_argument("waveform shorter than one analysis window");
    std::vector<window_ref> out;
    for (std::size_t i = 0; i + n <= w.samples.size(); i += hop) {
        window_ref r;
        r.t_mid = w.t0 + (static_cast<double>(i) + static_cast<double>(n) / 2.0) / w.fs;
        r.samples = std::span<const double>(w.samples.data() + i, n);
        out.push_back(r);
    }
    return out;
}

// finite_difference: (f[i] - f[i-1]) / Tr with the first sample undefined;
// derivative: pass-through of the per-window instantaneous stream
inline std::vector<double> rocof_from_stream(const std::vector<double>& freq, double tr,
                                             rocof_mode mode,
                                             const std::vector<double>* derivative = nullptr) {
    if (mode == rocof_mode::derivative) {
        if (!derivative) throw std::invalid_argument("derivative stream not available");
        return *derivative;
    }
    std::vector<double> out(freq.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 1; i < freq.size(); ++i) out[i] = (freq[i] - freq[i - 1]) / tr;
    return out;
}

inline std::vector<PhasorEstimate> run_stream(const waveform& w, const EstimatorConfig& cfg) {
    if (cfg.rocof == rocof_mode::derivative && cfg.algo != algorithm::tfm)
        throw std::invalid_argument("derivative rocof requires the dynamic-model estimator");

    auto wins = windows(w, cfg);
    std::vector<PhasorEstimate> out;
    out.reserve(wins.size());
    for (const auto& win : wins) {
        switch (cfg.algo) {
            case algorithm::e_ipdft:
                out.push_back(e_ipdft_estimate(win.samples, cfg, win.t_mid));
                break;
            case algorithm::i_ipdft:
                out.push_back(i_ipdft_estimate(win.samples, cfg, win.t_mid));
                break;
            case algorithm::tfm:
                out.push_back(tfm_estimate(win.samples, cfg, win.t_mid));
                break;
        }
    }
    if (cfg.rocof == rocof_mode::finite_difference) {
        const double tr = cfg.hop_samples() / cfg.fs;
        std::vector<double> freq(out.size());
        for (std::size_t i = 0; i < out.size(); ++i) freq[i] = out[i].freq;
        const auto r = rocof_from_stream(freq, tr, rocof_mode::finite_difference);
        for (std::size_t i = 0; i < out.size(); ++i) out[i].rocof = r[i];
        if (!out.empty()) out[0].flags |= flag_first_sample_rocof_undefined;
    }
    return out;
}

}  // namespace rocofbench
