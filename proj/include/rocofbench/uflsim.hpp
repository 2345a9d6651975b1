#pragma once

// Surrogate under-frequency load-shedding study: single-bus swing dynamics
// synthesize a frequency-modulated carrier, measurement chains (PLL or PMU
// estimator profiles) feed frequency/ROCOF relays, shed load closes the
// loop. Scored by energy not served over the horizon.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "rocofbench/estimators.hpp"
#include "rocofbench/prng.hpp"
#include "rocofbench/waveform.hpp"

namespace rocofbench {

struct LoadBlock {
    double size_mw = 0.0;
    int priority = 0;  // informational ordering, all blocks interchangeable here
};

struct OutageEvent {
    double t = 0.0;
    double delta_mw = 0.0;  // generation lost
};

struct GridModel {
    double f0 = 50.0;
    double h = 3.0;  // inertia constant, s
    double d = 1.0;  // load damping, pu/pu
    double base_power = 4500.0;
    std::vector<LoadBlock> load_blocks;
    std::vector<OutageEvent> outage_schedule;
    double floor_hz = 47.5;  // generator-protection collapse threshold
    double t_end = 240.0;
    double fs = 5000.0;  // carrier synthesis and integration grid

    double blocks_total() const {
        double acc = 0.0;
        for (const auto& b : load_blocks) acc += b.size_mw;
        return acc;
    }

    void validate() const {
        if (!(h > 0.0)) throw std::invalid_argument("inertia constant must be positive");
        if (!(base_power > 0.0)) throw std::invalid_argument("base power must be positive");
        if (load_blocks.empty()) throw std::invalid_argument("no load blocks");
        if (blocks_total() > base_power * (1.0 + 1e-9))
            throw std::invalid_argument("load blocks exceed base power");
        if (!(fs > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("bad time grid");
    }
};

inline GridModel default_grid() {
    GridModel g;
    const int nb = 16;
    for (int i = 0; i < nb; ++i)
        g.load_blocks.push_back({g.base_power / nb, i + 1});
    g.outage_schedule = {{180.0, 1500.0}};
    return g;
}

struct PllConfig {
    double kp = 180.0;
    double ki = 3200.0;
    double sample_rate = 5000.0;
    double ma_seconds = 0.6;  // relay-profile output smoothing

    void validate() const {
        if (!(kp > 0.0) || !(ki > 0.0)) throw std::invalid_argument("PLL gains must be positive");
        if (!(sample_rate > 0.0)) throw std::invalid_argument("bad PLL sample rate");
    }
};

struct RelayStage {
    double threshold_hz = 0.0;
    double shed_fraction = 0.0;  // of base power
};

enum class relay_kind { frequency_staged, rocof_proportional };

struct RelayScheme {
    relay_kind kind = relay_kind::frequency_staged;
    std::vector<RelayStage> stages = {
        {49.0, 0.125}, {48.8, 0.125}, {48.6, 0.125}, {48.4, 0.125}};
    double stage_dwell = 0.2;     // s below threshold before a stage commands
    double breaker_delay = 0.15;  // s from command to load disconnection
    double rocof_threshold = 0.5;  // Hz/s, on the 3-report |ROCOF| median
    double rocof_inhibit = 0.2;    // s between proportional sizing shots

    void validate() const {
        if (kind == relay_kind::frequency_staged) {
            if (stages.empty()) throw std::invalid_argument("no relay stages");
            for (std::size_t i = 0; i < stages.size(); ++i) {
                if (!(stages[i].shed_fraction > 0.0) || stages[i].shed_fraction > 1.0)
                    throw std::invalid_argument("shed fraction outside (0, 1]");
                if (i > 0 && !(stages[i].threshold_hz < stages[i - 1].threshold_hz))
                    throw std::invalid_argument("stage thresholds must be strictly ordered");
            }
        } else if (!(rocof_threshold > 0.0)) {
            throw std::invalid_argument("rocof threshold must be positive");
        }
        if (stage_dwell < 0.0 || breaker_delay < 0.0 || rocof_inhibit < 0.0)
            throw std::invalid_argument("negative relay timer");
    }
};

enum class measurement_source { pll, pmu_static_p, pmu_dynamic_m };

struct ShedEvent {
    double t = 0.0;
    std::string kind;  // "shed", "stageN_cmd", "rocof_cmd"
    double mw = 0.0;
};

struct UflsResult {
    double dt = 0.0;
    std::vector<double> freq;       // full integration grid
    std::vector<double> served_mw;  // full integration grid
    std::vector<ShedEvent> events;
    bool blackout = false;
    double blackout_t = std::numeric_limits<double>::quiet_NaN();
    double eens_mwh = 0.0;
    double total_shed_mw = 0.0;
    bool pll_lock_lost = false;
};

// explicit fixed-step swing-equation update:
//   df/dt = (f0 / 2H) * (imbalance_pu - D * (f - f0)/f0)
inline double step_dynamics(const GridModel& g, double f, double imbalance_pu, double dt) {
    if (!(dt > 0.0) || dt > 1e-3) throw std::invalid_argument("dt outside (0, 1 ms]");
    const double dfpu = (f - g.f0) / g.f0;
    return f + (g.f0 / (2.0 * g.h)) * (imbalance_pu - g.d * dfpu) * dt;
}

// single-phase quadrature PLL: quarter-cycle delayed copy forms the
// imaginary part, phase detector Im(z * e^{-j th}) normalized by |z|,
// PI loop integrates to the tracked angular rate.
class PllLoop {
  public:
    PllLoop(const PllConfig& cfg, double f0) : cfg_(cfg), f0_(f0) {
        cfg.validate();
        qdel_ = static_cast<std::size_t>(cfg.sample_rate / f0 / 4.0);
        delay_.assign(qdel_, 0.0);
        om_ = two_pi * f0;
        integ_ = om_;
        alpha_ = 1.0 / (0.05 * cfg.sample_rate);  // 50 ms detector smoothing
    }

    // feed one sample, returns the current frequency estimate in Hz
    double step(double x) {
        const double dt = 1.0 / cfg_.sample_rate;
        if (count_ >= qdel_) {
            const double xd = delay_[count_ % qdel_];
            const cdouble z(x, xd);
            const double mag = std::abs(z);
            double e = 0.0;
            // seed the NCO at the incoming phase once quadrature exists, so
            // the loop starts at equilibrium instead of slewing from zero
            if (!seeded_ && mag > 1e-9) {
                th_ = std::arg(z);
                seeded_ = true;
            }
            if (mag > 1e-9) {
                const cdouble rot(std::cos(-th_), std::sin(-th_));
                const cdouble m = z * rot;
                e = m.imag() / mag;
                const double off = m.real() / mag < 0.0 ? 1.0 : 0.0;
                ewma_ += alpha_ * (off - ewma_);
                if (static_cast<double>(count_) * dt > 0.2 && ewma_ > 0.45) lost_ = true;
            }
            integ_ += cfg_.ki * e * dt;
            om_ = integ_ + cfg_.kp * e;
            th_ += om_ * dt;
        }
        delay_[count_ % qdel_] = x;
        ++count_;
        return om_ / two_pi;
    }

    bool lock_lost() const { return lost_; }

  private:
    PllConfig cfg_;
    double f0_;
    std::size_t qdel_ = 25;
    std::vector<double> delay_;
    std::size_t count_ = 0;
    double th_ = 0.0;
    double om_ = 0.0;
    double integ_ = 0.0;
    double ewma_ = 0.0;
    double alpha_ = 0.0;
    bool seeded_ = false;
    bool lost_ = false;
};

struct PllTrack {
    std::vector<double> t;
    std::vector<double> freq;
    bool lock_lost = false;
};

// standalone frequency tracker: per-sample PLL, one-nominal-cycle moving
// average to strip the double-frequency detector ripple, decimated to the
// reporting grid
inline PllTrack pll_track(const waveform& w, const PllConfig& cfg, double f0 = 50.0,
                          double report_rate = 50.0) {
    cfg.validate();
    if (w.samples.empty()) throw std::invalid_argument("empty waveform");
    PllLoop loop(cfg, f0);
    const std::size_t ma = static_cast<std::size_t>(cfg.sample_rate / f0);
    const std::size_t hop = static_cast<std::size_t>(std::llround(cfg.sample_rate / report_rate));
    std::vector<double> ring(ma, f0);
    double sum = static_cast<double>(ma) * f0;
    PllTrack out;
    for (std::size_t n = 0; n < w.samples.size(); ++n) {
        const double v = loop.step(w.samples[n]);
        sum += v - ring[n % ma];
        ring[n % ma] = v;
        if (n % hop == 0 && n > 0) {
            out.t.push_back(w.t0 + static_cast<double>(n) / cfg.sample_rate);
            out.freq.push_back(sum / static_cast<double>(ma));
        }
    }
    out.lock_lost = loop.lock_lost();
    return out;
}

namespace detail {

inline double median3_abs(double a, double b, double c) {
    double x = std::abs(a), y = std::abs(b), z = std::abs(c);
    if (x > y) std::swap(x, y);
    if (y > z) std::swap(y, z);
    if (x > y) std::swap(x, y);
    return y;
}

}  // namespace detail

inline UflsResult run_ufls(const GridModel& grid, const RelayScheme& scheme,
                           measurement_source source, double snr_db, std::uint64_t seed,
                           const PllConfig& pll_cfg = {}) {
    grid.validate();
    scheme.validate();
    // the PLL always runs on the synthesized carrier
    if (pll_cfg.sample_rate != grid.fs)
        throw std::invalid_argument("PLL sample rate must match the grid waveform rate");

    const double fs = grid.fs;
    const double dt = 1.0 / fs;
    const std::size_t ns = static_cast<std::size_t>(std::llround(grid.t_end * fs));
    const std::size_t hop = static_cast<std::size_t>(std::llround(fs / 50.0));

    philox4x32 rng(seed, stream_id::ufls);
    const double sigma = std::sqrt(0.5) * std::pow(10.0, -snr_db / 20.0);

    const double blocks_total = grid.blocks_total();
    const double block_mw = blocks_total / static_cast<double>(grid.load_blocks.size());

    EstimatorConfig cfg_p;
    cfg_p.window_cycles = 3;
    cfg_p.fs = fs;
    cfg_p.f_nominal = grid.f0;
    EstimatorConfig cfg_m = cfg_p;
    cfg_m.window_cycles = 5;
    cfg_m.algo = algorithm::tfm;
    cfg_m.rocof = rocof_mode::derivative;
    const std::size_t np = cfg_p.window_samples();
    const std::size_t nm = cfg_m.window_samples();

    UflsResult res;
    res.dt = dt;
    res.freq.assign(ns, grid.f0);
    res.served_mw.assign(ns, blocks_total);

    PllLoop pll(pll_cfg, grid.f0);
    std::vector<double> pll_buf(ns, grid.f0);
    const std::size_t ma_n = static_cast<std::size_t>(pll_cfg.ma_seconds * fs);

    std::vector<double> x(ns, 0.0);
    double f = grid.f0;
    double phase = 0.0;
    double shed = 0.0;
    double trip = 0.0;
    std::size_t next_outage = 0;

    std::vector<std::pair<double, double>> pend;  // (landing time, MW)
    std::vector<double> stage_below(scheme.stages.size(),
                                    std::numeric_limits<double>::quiet_NaN());
    std::vector<bool> stage_done(scheme.stages.size(), false);
    double inhibit_until = 0.0;

    double prev_fp = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> rocof_hist;

    for (std::size_t n = 0; n < ns; ++n) {
        const double t = static_cast<double>(n) * dt;
        while (next_outage < grid.outage_schedule.size() &&
               grid.outage_schedule[next_outage].t <= t) {
            trip += grid.outage_schedule[next_outage].delta_mw;
            ++next_outage;
        }
        while (!pend.empty() && pend.front().first <= t) {
            double mw = std::min(pend.front().second, blocks_total - shed);
            pend.erase(pend.begin());
            shed += mw;
            res.events.push_back({t, "shed", mw});
        }

        const double imbalance = (shed - trip) / grid.base_power;
        f = step_dynamics(grid, f, imbalance, dt);
        res.freq[n] = f;
        res.served_mw[n] = blocks_total - shed;
        if (!res.blackout && f < grid.floor_hz) {
            res.blackout = true;
            res.blackout_t = t;
            std::fill(res.served_mw.begin() + static_cast<std::ptrdiff_t>(n),
                      res.served_mw.end(), 0.0);
            std::fill(res.freq.begin() + static_cast<std::ptrdiff_t>(n), res.freq.end(), f);
            break;
        }

        phase += two_pi * f * dt;
        x[n] = std::cos(phase) + sigma * rng.next_gaussian();
        pll_buf[n] = pll.step(x[n]);

        if (n % hop != 0 || n == 0) continue;

        if (scheme.kind == relay_kind::frequency_staged) {
            if (n < ma_n) continue;
            double acc = 0.0;
            for (std::size_t i = n - ma_n; i < n; ++i) acc += pll_buf[i];
            const double fhat = acc / static_cast<double>(ma_n);
            for (std::size_t si = 0; si < scheme.stages.size(); ++si) {
                if (stage_done[si]) continue;
                if (fhat < scheme.stages[si].threshold_hz) {
                    if (std::isnan(stage_below[si])) {
                        stage_below[si] = t;
                    } else if (t - stage_below[si] >= scheme.stage_dwell) {
                        stage_done[si] = true;
                        const double mw = scheme.stages[si].shed_fraction * grid.base_power;
                        pend.emplace_back(t + scheme.breaker_delay, mw);
                        std::sort(pend.begin(), pend.end());
                        res.events.push_back(
                            {t, "stage" + std::to_string(si + 1) + "_cmd", mw});
                    }
                } else {
                    stage_below[si] = std::numeric_limits<double>::quiet_NaN();
                }
            }
            continue;
        }

        // proportional ROCOF sizing from one of the PMU profiles
        if (source == measurement_source::pmu_static_p) {
            if (n < np) continue;
            const auto est = e_ipdft_estimate(
                std::span<const double>(x.data() + (n - np), np), cfg_p);
            if (!std::isnan(prev_fp))
                rocof_hist.push_back((est.freq - prev_fp) / (static_cast<double>(hop) * dt));
            prev_fp = est.freq;
        } else if (source == measurement_source::pmu_dynamic_m) {
            if (n < nm) continue;
            const auto est = tfm_estimate(
                std::span<const double>(x.data() + (n - nm), nm), cfg_m);
            rocof_hist.push_back(est.rocof);
        } else {
            throw std::invalid_argument("rocof scheme requires a PMU profile source");
        }

        if (rocof_hist.size() < 3 || t < inhibit_until) continue;
        const std::size_t k = rocof_hist.size();
        const double rmed =
            detail::median3_abs(rocof_hist[k - 3], rocof_hist[k - 2], rocof_hist[k - 1]);
        if (rmed < scheme.rocof_threshold) continue;

        const double need = 2.0 * grid.h * rmed / grid.f0 * grid.base_power;
        double committed = shed;
        for (const auto& p : pend) committed += p.second;
        const double extra = need - committed;
        long nb = std::lround(extra / block_mw);
        const long avail = static_cast<long>(std::floor((blocks_total - committed) / block_mw));
        nb = std::max(0L, std::min(nb, avail));
        if (nb > 0) {
            const double mw = static_cast<double>(nb) * block_mw;
            pend.emplace_back(t + scheme.breaker_delay, mw);
            std::sort(pend.begin(), pend.end());
            res.events.push_back({t, "rocof_cmd", mw});
            inhibit_until = t + scheme.rocof_inhibit;
        }
    }

    res.total_shed_mw = shed;
    res.pll_lock_lost = pll.lock_lost();

    double acc = 0.0;
    for (std::size_t n = 0; n + 1 < ns; ++n) {
        const double u0 = blocks_total - res.served_mw[n];
        const double u1 = blocks_total - res.served_mw[n + 1];
        acc += 0.5 * (u0 + u1) * dt;
    }
    res.eens_mwh = acc / 3600.0;
    return res;
}

}  // namespace rocofbench
