#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "rocofbench/datasets.hpp"
#include "rocofbench/truth.hpp"
#include "rocofbench/wavegen.hpp"

using namespace rocofbench;
using Catch::Approx;

namespace {

double mean_power(const waveform& w) {
    double acc = 0.0;
    for (double v : w.samples) acc += v * v;
    return acc / static_cast<double>(w.samples.size());
}

}  // namespace

TEST_CASE("multitone: single fundamental is a pure cosine") {
    ToneSet s;
    s.system_freq = 50.0;
    s.fundamental_amplitude = 2.5;
    s.components = {{1.0, 1.0, 0.3}};
    auto w = synth_multitone(s, 5000.0, 0.2);
    REQUIRE(w.samples.size() == 1000);
    REQUIRE(w.fs == 5000.0);
    for (std::size_t n = 0; n < w.samples.size(); ++n) {
        double expect = 2.5 * std::cos(2.0 * std::numbers::pi * 50.0 * w.t(n) + 0.3);
        REQUIRE(w.samples[n] == Approx(expect).margin(1e-12));
    }
}

TEST_CASE("multitone: component validation") {
    ToneSet s;
    s.system_freq = 50.0;
    s.components = {{2.0, 0.05}};  // no fundamental
    REQUIRE_THROWS_AS(s.validate(), std::invalid_argument);

    s.components = {{1.0, 1.0}, {1.0, 1.0}};  // duplicate fundamental
    REQUIRE_THROWS_AS(s.validate(), std::invalid_argument);

    s.components = {{2.0, 0.05}, {1.0, 1.0}};  // unsorted
    REQUIRE_THROWS_AS(s.validate(), std::invalid_argument);

    s.components = {{1.0, 1.0}, {2.0, -0.05}};  // negative amplitude
    REQUIRE_THROWS_AS(s.validate(), std::invalid_argument);

    s.components = {{1.0, 1.0}, {2.0, 0.05}};
    REQUIRE_NOTHROW(s.validate());
}

TEST_CASE("multitone: harmonic distortion closed forms") {
    // harmonics 2..6 at 5 % and 7..10 at 2 % give
    // THD(2..6)  = sqrt(5*0.05^2)            = 11.1803 %
    // THD(2..10) = sqrt(5*0.05^2 + 4*0.02^2) = 11.8743 %
    // exact for a pure harmonic set: over an integer cycle count every tone
    // sits on an integer bin and the rectangular-window DFT separates them
    ToneSet s;
    s.system_freq = 50.0;
    s.fundamental_amplitude = 1.0;
    s.components = {{1.0, 1.0, 0.0}};
    for (int h = 2; h <= 6; ++h) s.components.push_back({static_cast<double>(h), 0.05, 0.0});
    for (int h = 7; h <= 10; ++h) s.components.push_back({static_cast<double>(h), 0.02, 0.0});
    auto w = synth_multitone(s, kFs, 1.0);
    auto q_lo = measure_quality(w, kFnom, 2, 6);
    auto q_hi = measure_quality(w, kFnom, 2, 10);
    REQUIRE(q_lo.thd_pct == Approx(100.0 * std::sqrt(5 * 0.05 * 0.05)).epsilon(1e-9));
    REQUIRE(q_hi.thd_pct ==
            Approx(100.0 * std::sqrt(5 * 0.05 * 0.05 + 4 * 0.02 * 0.02)).epsilon(1e-9));

    // the benchmark set adds interharmonics whose leakage shifts the bin
    // readings by well under a percent
    auto wb = synth_multitone(dataset1_toneset(), kFs, 1.0);
    auto qb = measure_quality(wb, kFnom, 2, 6);
    REQUIRE(qb.thd_pct == Approx(100.0 * std::sqrt(5 * 0.05 * 0.05)).epsilon(1e-2));
}

TEST_CASE("multitone: Parseval check on a commensurate tone set") {
    // every component completes an integer cycle count in 1 s, so the mean
    // power is exactly the sum of per-tone powers a^2/2
    ToneSet s;
    s.system_freq = 50.0;
    s.fundamental_amplitude = 1.0;
    s.components = {{1.0, 1.0, 0.1}, {2.0, 0.05, 0.7}, {3.0, 0.05, -1.2},
                    {4.0, 0.05, 0.0}, {5.0, 0.05, 2.2}, {6.0, 0.05, -2.9}};
    auto w = synth_multitone(s, 5000.0, 1.0);
    double expect = 0.5 * (1.0 + 5 * 0.05 * 0.05);
    REQUIRE(mean_power(w) == Approx(expect).epsilon(1e-9));
}

TEST_CASE("multitone: amplitude scaling is linear") {
    ToneSet base = dataset1_toneset();
    ToneSet scaled = base;
    scaled.fundamental_amplitude = base.fundamental_amplitude * 8.0;  // power of two
    auto w0 = synth_multitone(base, kFs, 0.5);
    auto w1 = synth_multitone(scaled, kFs, 0.5);
    for (std::size_t n = 0; n < w0.samples.size(); ++n)
        REQUIRE(w1.samples[n] == Approx(8.0 * w0.samples[n]).margin(1e-12));
    auto q0 = measure_quality(w0, kFnom);
    auto q1 = measure_quality(w1, kFnom);
    REQUIRE(q1.thd_pct == Approx(q0.thd_pct).epsilon(1e-9));
    REQUIRE(q1.sinad_db == Approx(q0.sinad_db).epsilon(1e-9));
}

TEST_CASE("oscillation: zero modulation depths give a pure cosine") {
    OscillationModel m;
    m.A = 1.5;
    m.f = 50.0;
    m.phi = 0.4;
    m.k_A = 0.0;
    m.f_A = 0.1;
    m.k_phi = 0.0;
    m.f_phi = 0.1;
    m.segments = {{0.0, 1.0, 0.0}};
    auto w = synth_oscillation(m, 5000.0);
    REQUIRE(w.samples.size() == 5000);
    for (std::size_t n = 0; n < w.samples.size(); n += 7) {
        double expect = 1.5 * std::cos(2.0 * std::numbers::pi * 50.0 * w.t(n) + 0.4);
        REQUIRE(w.samples[n] == Approx(expect).margin(1e-12));
    }
}

TEST_CASE("oscillation: model validation") {
    OscillationModel m = dataset2_model();
    REQUIRE_NOTHROW(m.validate());

    auto gap = m;
    gap.segments[2].t_start = 80.0;  // hole between segments
    REQUIRE_THROWS_AS(gap.validate(), std::invalid_argument);

    auto late = m;
    late.segments[0].t_start = 1.0;  // schedule must start at zero
    REQUIRE_THROWS_AS(late.validate(), std::invalid_argument);

    auto deep = m;
    deep.k_A = 1.0;  // envelope would touch zero
    REQUIRE_THROWS_AS(deep.validate(), std::invalid_argument);
}

TEST_CASE("oscillation: envelope peak and duration of the benchmark model") {
    auto m = dataset2_model();
    REQUIRE(m.duration() == Approx(220.5));
    // envelope maximum A*(1+k_A)
    auto w = synth_oscillation(m, 5000.0);
    double peak = 0.0;
    for (double v : w.samples) peak = std::max(peak, std::abs(v));
    REQUIRE(peak == Approx(m.A * (1.0 + m.k_A)).epsilon(2e-3));
    REQUIRE(peak <= m.A * (1.0 + m.k_A) + 1e-9);
}

TEST_CASE("oscillation: ramp schedule accumulates frequency offsets") {
    auto m = dataset2_model();
    // second segment ramps 2.28 mHz/s for 48 s: net rise 0.10944 Hz
    double r = 0.0, integral = 0.0;
    m.ramp_at(78.5, r, integral);
    REQUIRE(r == Approx(2.28e-3 * 48.0).margin(1e-12));

    auto ref = oscillation_reference(m, std::vector<double>{78.5});
    REQUIRE(ref.freq[0] ==
            Approx(m.f + 2.28e-3 * 48.0 -
                   m.k_phi * m.f_phi *
                       std::sin(2.0 * std::numbers::pi * m.f_phi * 78.5))
                .margin(1e-9));
}

TEST_CASE("oscillation: reference frequency/ROCOF are continuous across segment joins") {
    auto m = dataset2_model();
    std::vector<double> grid;
    for (std::size_t i = 1; i + 1 < m.segments.size(); ++i) {
        grid.push_back(m.segments[i].t_start - 1e-9);
        grid.push_back(m.segments[i].t_start + 1e-9);
    }
    auto ref = oscillation_reference(m, grid);
    for (std::size_t i = 0; i < grid.size(); i += 2)
        REQUIRE(ref.freq[i] == Approx(ref.freq[i + 1]).margin(1e-6));
}

TEST_CASE("oscillation: sample-to-sample phase increment stays bounded") {
    auto m = dataset2_model();
    double fs = 5000.0;
    auto w = synth_oscillation(m, fs);
    // worst-case instantaneous frequency: carrier + peak ramp excursion +
    // peak phase-modulation rate
    double max_exc = 0.0, acc = 0.0;
    for (const auto& seg : m.segments) {
        acc += seg.rf * (seg.t_stop - seg.t_start);
        max_exc = std::max(max_exc, std::abs(acc));
    }
    double fmax = m.f + max_exc + m.k_phi * m.f_phi;
    // adjacent zero crossings cannot be closer than 1/(2*fmax)
    std::size_t min_gap = w.samples.size();
    std::size_t last_cross = 0;
    bool seen = false;
    for (std::size_t n = 1; n < w.samples.size(); ++n) {
        if ((w.samples[n - 1] < 0.0) != (w.samples[n] < 0.0)) {
            if (seen) min_gap = std::min(min_gap, n - last_cross);
            last_cross = n;
            seen = true;
        }
    }
    double min_allowed = fs / (2.0 * fmax) * 0.98;
    REQUIRE(static_cast<double>(min_gap) >= min_allowed);
}

TEST_CASE("step: pre/post parameters and switch instant") {
    auto m = dataset3_model();
    double fs = 5000.0;
    auto w = synth_step(m, fs, 20.0);
    REQUIRE(w.samples.size() == 100000);

    std::size_t nstep = static_cast<std::size_t>(std::llround(m.t_step * fs));
    for (std::size_t n = 0; n < nstep; ++n) {
        double expect =
            m.pre_amplitude *
            std::cos(2.0 * std::numbers::pi * m.pre_freq * w.t(n) + m.pre_phase);
        REQUIRE(w.samples[n] == Approx(expect).margin(1e-9));
    }
    for (std::size_t n = nstep; n < w.samples.size(); n += 11) {
        double expect =
            m.post_amplitude *
            std::cos(2.0 * std::numbers::pi * m.post_freq * w.t(n) + m.post_phase);
        REQUIRE(w.samples[n] == Approx(expect).margin(1e-9));
    }
}

TEST_CASE("step: amplitude ratio across the benchmark step") {
    auto m = dataset3_model();
    auto w = synth_step(m, 5000.0, 20.0);
    auto rms = [&](std::size_t a, std::size_t b) {
        double acc = 0.0;
        for (std::size_t n = a; n < b; ++n) acc += w.samples[n] * w.samples[n];
        return std::sqrt(acc / static_cast<double>(b - a));
    };
    // integer cycle counts on both sides of the step
    double pre = rms(0, 50000);    // first 10 s
    double post = rms(75000, 100000);  // last 5 s
    REQUIRE(post / pre == Approx(m.post_amplitude / m.pre_amplitude).epsilon(1e-3));
}

TEST_CASE("step: validation") {
    auto m = dataset3_model();
    m.t_step = -1.0;
    REQUIRE_THROWS_AS(synth_step(m, 5000.0, 20.0), std::invalid_argument);
    m.t_step = 25.0;
    REQUIRE_THROWS_AS(synth_step(m, 5000.0, 20.0), std::invalid_argument);
}

TEST_CASE("step: degenerate step is a pure tone") {
    StepModel m;
    m.pre_amplitude = m.post_amplitude = 1.0;
    m.pre_freq = m.post_freq = 50.0;
    m.pre_phase = m.post_phase = 0.25;
    m.t_step = 7.0;
    auto w = synth_step(m, 5000.0, 14.0);
    auto q = measure_quality(w, 50.0);
    REQUIRE(q.thd_pct < 1e-6);
    REQUIRE(std::isinf(q.sinad_db));
}

TEST_CASE("add_noise: infinite SNR returns the input unchanged") {
    auto w = synth_multitone(dataset1_toneset(), kFs, 0.5);
    auto out = add_noise(w, std::numeric_limits<double>::infinity(), 42);
    REQUIRE(out.samples == w.samples);
}

TEST_CASE("add_noise: realized SNR matches the request") {
    auto w = synth_multitone(dataset1_narrowband(), kFs, 1.0);
    auto noisy = add_noise(w, 60.0, 42);
    double psig = mean_power(w);
    double pn = 0.0;
    for (std::size_t n = 0; n < w.samples.size(); ++n) {
        double d = noisy.samples[n] - w.samples[n];
        pn += d * d;
    }
    pn /= static_cast<double>(w.samples.size());
    double realized = 10.0 * std::log10(psig / pn);
    REQUIRE(realized == Approx(60.0).margin(0.3));

    // tighter bound with more averaging
    auto wl = synth_multitone(dataset1_narrowband(), kFs, 40.0);
    auto nl = add_noise(wl, 40.0, 42);
    double pl = 0.0;
    for (std::size_t n = 0; n < wl.samples.size(); ++n) {
        double d = nl.samples[n] - wl.samples[n];
        pl += d * d;
    }
    pl /= static_cast<double>(wl.samples.size());
    REQUIRE(10.0 * std::log10(mean_power(wl) / pl) == Approx(40.0).margin(0.2));
}

TEST_CASE("add_noise: deterministic per seed and stream") {
    auto w = synth_multitone(dataset1_narrowband(), kFs, 0.2);
    auto a = add_noise(w, 60.0, 42, stream_id::dataset1);
    auto b = add_noise(w, 60.0, 42, stream_id::dataset1);
    REQUIRE(a.samples == b.samples);
    REQUIRE(a.seed.has_value());
    REQUIRE(*a.seed == 42);

    auto c = add_noise(w, 60.0, 43, stream_id::dataset1);
    auto d = add_noise(w, 60.0, 42, stream_id::dataset2);
    REQUIRE(a.samples != c.samples);
    REQUIRE(a.samples != d.samples);
}

TEST_CASE("measure_quality: clean tone reports no distortion") {
    ToneSet s;
    s.system_freq = 50.0;
    s.components = {{1.0, 1.0}};
    auto w = synth_multitone(s, 5000.0, 1.0);
    auto q = measure_quality(w, 50.0);
    REQUIRE(q.thd_pct < 1e-6);
    REQUIRE(std::isinf(q.sinad_db));
    REQUIRE(std::isinf(q.snr_db));
}

TEST_CASE("measure_quality: benchmark tone set at 60 dB SNR") {
    auto w = synth_multitone(dataset1_toneset(), kFs, kDataset1Duration);
    auto noisy = add_noise(w, kDataset1SnrDb, 42, stream_id::dataset1);
    auto q = measure_quality(noisy, kFnom, 2, 10);
    REQUIRE(q.sinad_db == Approx(16.94).margin(0.5));
    REQUIRE(q.thd_pct == Approx(11.87).margin(0.25));
    REQUIRE(q.snr_db >= q.sinad_db);
}

TEST_CASE("measure_quality: noise-only distortion converges to the injected SNR") {
    ToneSet s;
    s.system_freq = 50.07;
    s.components = {{1.0, 1.0, 0.5}};
    auto w = synth_multitone(s, 5000.0, 10.0);
    auto noisy = add_noise(w, 46.24, 42, stream_id::dataset3);
    auto q = measure_quality(noisy, 50.07);
    REQUIRE(q.sinad_db == Approx(46.24).margin(0.3));
    REQUIRE(q.snr_db == Approx(46.24).margin(0.3));
    REQUIRE(q.snr_db >= q.sinad_db);
}
