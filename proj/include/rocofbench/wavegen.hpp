#pragma once

// Test-waveform synthesis: steady multi-tone sets, the amplitude/phase
// modulated oscillation model with piecewise frequency ramps, amplitude/phase
// step records, calibrated additive noise, and SNR/THD/SINAD measurement.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rocofbench/prng.hpp"
#include "rocofbench/spectrum.hpp"
#include "rocofbench/waveform.hpp"

namespace rocofbench {

struct ToneComponent {
    double harm_index = 1.0;      // multiplier of the system frequency
    double norm_amplitude = 1.0;  // fraction of the fundamental amplitude
    double phase = 0.0;
};

struct ToneSet {
    double system_freq = 50.0;
    double fundamental_amplitude = 1.0;
    std::vector<ToneComponent> components;  // sorted by harm_index, one with h = 1

    void validate() const {
        if (components.empty()) throw std::invalid_argument("empty component list");
        int fund = 0;
        for (const auto& c : components) {
            if (!(c.harm_index > 0.0)) throw std::invalid_argument("harm_index must be > 0");
            if (c.norm_amplitude < 0.0) throw std::invalid_argument("negative amplitude");
            if (c.harm_index == 1.0) ++fund;
        }
        if (fund != 1) throw std::invalid_argument("need exactly one fundamental component");
        for (std::size_t i = 1; i < components.size(); ++i)
            if (components[i].harm_index < components[i - 1].harm_index)
                throw std::invalid_argument("components must be sorted by harm_index");
    }
};

struct RampSegment {
    double t_start = 0.0;
    double t_stop = 0.0;
    double rf = 0.0;  // Hz/s, 0 for flat segments
};

struct OscillationModel {
    double A = 1.0;
    double f = 50.0;
    double phi = 0.0;
    double k_A = 0.0;    // amplitude modulation depth
    double f_A = 0.0;    // Hz
    double k_phi = 0.0;  // rad
    double f_phi = 0.0;  // Hz
    std::vector<RampSegment> segments;
    // alternative reading of the published phase model: a bare R_f*t^2 term
    // per segment instead of the integral of the frequency ramp
    bool literal_ramp_phase = false;

    void validate() const {
        if (segments.empty()) throw std::invalid_argument("no ramp segments");
        if (segments.front().t_start != 0.0)
            throw std::invalid_argument("segments must start at t = 0");
        for (std::size_t i = 0; i < segments.size(); ++i) {
            if (!(segments[i].t_stop > segments[i].t_start))
                throw std::invalid_argument("segment with non-positive span");
            if (i && segments[i].t_start != segments[i - 1].t_stop)
                throw std::invalid_argument("segments must be contiguous");
        }
        if (!(k_A >= 0.0 && k_A < 1.0)) throw std::invalid_argument("k_A outside [0, 1)");
    }

    double duration() const { return segments.back().t_stop; }

    // frequency-ramp offset r(t) and its exact running integral
    void ramp_at(double t, double& r, double& integral) const {
        double r0 = 0.0, acc = 0.0;
        for (const auto& s : segments) {
            const double span = s.t_stop - s.t_start;
            if (t < s.t_stop || &s == &segments.back()) {
                const double tau = std::clamp(t - s.t_start, 0.0, span);
                if (literal_ramp_phase) {
                    r = 2.0 * s.rf * tau;
                    integral = acc + s.rf * tau * tau;
                } else {
                    r = r0 + s.rf * tau;
                    integral = acc + r0 * tau + 0.5 * s.rf * tau * tau;
                }
                return;
            }
            if (literal_ramp_phase) {
                acc += s.rf * span * span;
            } else {
                acc += r0 * span + 0.5 * s.rf * span * span;
                r0 += s.rf * span;
            }
        }
        r = 0.0;
        integral = acc;
    }
};

struct StepModel {
    double pre_amplitude = 1.0;
    double pre_freq = 50.0;
    double pre_phase = 0.0;
    double post_amplitude = 1.0;
    double post_freq = 50.0;
    double post_phase = 0.0;
    double t_step = 0.0;
    std::vector<ToneComponent> distortion;  // harmonic add-ons, empty = none
};

inline waveform synth_multitone(const ToneSet& model, double fs, double duration) {
    if (!(fs > 0.0) || !(duration > 0.0))
        throw std::invalid_argument("fs and duration must be positive");
    model.validate();
    const std::size_t ns = static_cast<std::size_t>(std::llround(duration * fs));
    waveform w;
    w.fs = fs;
    w.samples.assign(ns, 0.0);
    for (const auto& c : model.components) {
        const double amp = model.fundamental_amplitude * c.norm_amplitude;
        const double om = two_pi * c.harm_index * model.system_freq / fs;
        for (std::size_t n = 0; n < ns; ++n)
            w.samples[n] += amp * std::cos(om * static_cast<double>(n) + c.phase);
    }
    return w;
}

inline waveform synth_oscillation(const OscillationModel& model, double fs) {
    model.validate();
    if (!(fs > 2.0 * model.f)) throw std::invalid_argument("fs below Nyquist for carrier");
    const std::size_t ns = static_cast<std::size_t>(std::llround(model.duration() * fs));
    waveform w;
    w.fs = fs;
    w.samples.resize(ns);
    for (std::size_t n = 0; n < ns; ++n) {
        const double t = static_cast<double>(n) / fs;
        double r = 0.0, ri = 0.0;
        model.ramp_at(t, r, ri);
        const double phase = two_pi * (model.f * t + ri) + model.phi +
                             model.k_phi * std::cos(two_pi * model.f_phi * t);
        const double env = model.A * (1.0 + model.k_A * std::cos(two_pi * model.f_A * t));
        w.samples[n] = env * std::cos(phase);
    }
    return w;
}

inline waveform synth_step(const StepModel& model, double fs, double duration) {
    if (!(model.t_step > 0.0) || !(model.t_step < duration))
        throw std::invalid_argument("t_step outside the record");
    const std::size_t ns = static_cast<std::size_t>(std::llround(duration * fs));
    const std::size_t nstep = static_cast<std::size_t>(std::llround(model.t_step * fs));
    waveform w;
    w.fs = fs;
    w.samples.resize(ns);
    for (std::size_t n = 0; n < ns; ++n) {
        const double t = static_cast<double>(n) / fs;
        if (n < nstep)
            w.samples[n] =
                model.pre_amplitude * std::cos(two_pi * model.pre_freq * t + model.pre_phase);
        else
            w.samples[n] =
                model.post_amplitude * std::cos(two_pi * model.post_freq * t + model.post_phase);
        for (const auto& c : model.distortion)
            w.samples[n] += model.pre_amplitude * c.norm_amplitude *
                            std::cos(two_pi * c.harm_index * model.pre_freq * t + c.phase);
    }
    return w;
}

inline waveform add_noise(const waveform& w, double snr_db, std::uint64_t seed,
                          std::uint64_t stream = stream_id::custom) {
    if (w.samples.empty()) throw std::invalid_argument("empty waveform");
    if (!std::isfinite(snr_db)) return w;  // +inf sentinel: noise disabled
    double p = 0.0;
    for (double v : w.samples) p += v * v;
    p /= static_cast<double>(w.samples.size());
    const double sigma = std::sqrt(p * std::pow(10.0, -snr_db / 10.0));
    waveform out = w;
    out.seed = seed;
    philox4x32 rng(seed, stream);
    for (double& v : out.samples) v += sigma * rng.next_gaussian();
    return out;
}

struct QualityReport {
    double snr_db = 0.0;
    double thd_pct = 0.0;
    double sinad_db = 0.0;
    int harm_lo = 2;
    int harm_hi = 10;
};

// SNR/THD/SINAD over the largest whole number of fundamental cycles.
// Harmonic amplitudes come from rectangular-window DFT bins at h*f_sys.
inline QualityReport measure_quality(const waveform& w, double f_sys, int harm_lo = 2,
                                     int harm_hi = 10) {
    const double fs = w.fs;
    const std::size_t n = w.samples.size();
    const long cycles = static_cast<long>(std::floor(static_cast<double>(n) * f_sys / fs));
    if (cycles < 1) throw std::invalid_argument("record shorter than one fundamental cycle");
    std::size_t len = static_cast<std::size_t>(std::llround(cycles * fs / f_sys));
    if (len > n) len = n;
    const std::span<const double> x(w.samples.data(), len);

    double ptot = 0.0;
    for (double v : x) ptot += v * v;
    ptot /= static_cast<double>(len);

    auto amp_at = [&](double f) {
        const double k = f * static_cast<double>(len) / fs;
        return 2.0 * std::abs(dft_bin(x, k)) / static_cast<double>(len);
    };
    const double a1 = amp_at(f_sys);
    const double pfund = a1 * a1 / 2.0;

    double harm_sq = 0.0;
    for (int h = harm_lo; h <= harm_hi; ++h) {
        const double fh = h * f_sys;
        if (fh >= fs / 2.0) break;
        const double ah = amp_at(fh);
        harm_sq += ah * ah;
    }

    QualityReport q;
    q.harm_lo = harm_lo;
    q.harm_hi = harm_hi;
    q.thd_pct = a1 > 0.0 ? 100.0 * std::sqrt(harm_sq) / a1 : 0.0;
    const double floor_p = 1e-12 * ptot;
    const double pres = ptot - pfund;
    q.sinad_db = pres > floor_p ? 10.0 * std::log10(pfund / pres)
                                : std::numeric_limits<double>::infinity();
    const double pnoise = pres - harm_sq / 2.0;
    q.snr_db = pnoise > floor_p ? 10.0 * std::log10(pfund / pnoise)
                                : std::numeric_limits<double>::infinity();
    return q;
}

}  // namespace rocofbench
