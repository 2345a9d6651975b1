#pragma once

// Benchmark orchestration shared by the CLI, the demos and the acceptance
// suite: canonical noisy records, the (algorithm x class x rocof-mode)
// stream sweep, reference alignment/scoring, previously published benchmark
// values for the report columns, and the CSV emitters.

#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "rocofbench/csv.hpp"
#include "rocofbench/datasets.hpp"
#include "rocofbench/estimators.hpp"
#include "rocofbench/metrics.hpp"
#include "rocofbench/truth.hpp"
#include "rocofbench/uflsim.hpp"
#include "rocofbench/wavegen.hpp"

namespace rocofbench {

inline const char* algo_name(algorithm a) {
    switch (a) {
        case algorithm::e_ipdft: return "e_ipdft";
        case algorithm::i_ipdft: return "i_ipdft";
        case algorithm::tfm: return "tfm";
    }
    return "?";
}

inline const char* class_tag(int window_cycles) { return window_cycles == 3 ? "P" : "M"; }

inline const char* mode_tag(rocof_mode m) {
    return m == rocof_mode::finite_difference ? "fin" : "der";
}

// ---- canonical noisy records ----

inline waveform make_dataset1(std::uint64_t seed = kDefaultSeed, double snr_db = kDataset1SnrDb,
                              double duration = kDataset1Duration) {
    waveform w = synth_multitone(dataset1_toneset(), kFs, duration);
    w.unit = "pu";
    w.label = "dataset1";
    return add_noise(w, snr_db, seed, stream_id::dataset1);
}

inline waveform make_dataset2(std::uint64_t seed = kDefaultSeed, double snr_db = kDataset2SnrDb,
                              const OscillationModel& model = dataset2_model()) {
    waveform w = synth_oscillation(model, kFs);
    w.unit = "kV";
    w.label = "dataset2";
    return add_noise(w, snr_db, seed, stream_id::dataset2);
}

inline waveform make_dataset3(std::uint64_t seed = kDefaultSeed, double snr_db = kDataset3SnrDb,
                              const StepModel& model = dataset3_model(),
                              double duration = kDataset3Duration) {
    waveform w = synth_step(model, kFs, duration);
    w.unit = "kV";
    w.label = "dataset3";
    return add_noise(w, snr_db, seed, stream_id::dataset3);
}

// ---- stream sweep ----

struct StreamResult {
    algorithm algo = algorithm::e_ipdft;
    int window_cycles = 5;
    rocof_mode mode = rocof_mode::finite_difference;
    std::vector<PhasorEstimate> est;
};

struct StreamSelection {
    std::vector<algorithm> algos{algorithm::e_ipdft, algorithm::i_ipdft, algorithm::tfm};
    std::vector<int> classes{3, 5};
};

inline std::vector<double> t_mids(const std::vector<PhasorEstimate>& est) {
    std::vector<double> v(est.size());
    for (std::size_t i = 0; i < est.size(); ++i) v[i] = est[i].t_mid;
    return v;
}

inline std::vector<double> freq_series(const std::vector<PhasorEstimate>& est) {
    std::vector<double> v(est.size());
    for (std::size_t i = 0; i < est.size(); ++i) v[i] = est[i].freq;
    return v;
}

inline std::vector<double> rocof_series(const std::vector<PhasorEstimate>& est) {
    std::vector<double> v(est.size());
    for (std::size_t i = 0; i < est.size(); ++i) v[i] = est[i].rocof;
    return v;
}

inline std::vector<double> nrmse_series(const std::vector<PhasorEstimate>& est) {
    std::vector<double> v(est.size());
    for (std::size_t i = 0; i < est.size(); ++i) v[i] = est[i].nrmse_ppm;
    return v;
}

// one estimator pass per (class, algorithm): the dynamic model runs once in
// derivative mode, and its finite-difference stream is derived from the same
// frequency estimates, so both modes share windows and per-window nrmse
inline std::vector<StreamResult> run_streams(const waveform& w, const EstimatorConfig& base,
                                             const StreamSelection& sel = {}) {
    std::vector<StreamResult> out;
    for (int cycles : sel.classes) {
        for (algorithm algo : sel.algos) {
            EstimatorConfig cfg = base;
            cfg.window_cycles = cycles;
            cfg.algo = algo;
            cfg.rocof = algo == algorithm::tfm ? rocof_mode::derivative
                                               : rocof_mode::finite_difference;
            auto est = run_stream(w, cfg);
            const auto wins = windows(w, cfg);
            for (std::size_t i = 0; i < est.size(); ++i)
                est[i].nrmse_ppm = nrmse_ppm(wins[i].samples, est[i], cfg);
            if (algo != algorithm::tfm) {
                out.push_back({algo, cycles, rocof_mode::finite_difference, std::move(est)});
                continue;
            }
            StreamResult fin{algo, cycles, rocof_mode::finite_difference, est};
            const auto fd = rocof_from_stream(freq_series(fin.est), cfg.hop_samples() / cfg.fs,
                                              rocof_mode::finite_difference);
            for (std::size_t i = 0; i < fin.est.size(); ++i) fin.est[i].rocof = fd[i];
            if (!fin.est.empty()) fin.est[0].flags |= flag_first_sample_rocof_undefined;
            out.push_back(std::move(fin));
            out.push_back({algo, cycles, rocof_mode::derivative, std::move(est)});
        }
    }
    return out;
}

// ---- references and scoring ----

inline ReferenceSeries dataset1_reference(std::span<const double> t_mid) {
    const ToneSet nb = dataset1_narrowband();
    ReferenceSeries ref;
    ref.source = reference_source::analytic;
    ref.t.assign(t_mid.begin(), t_mid.end());
    ref.freq = instantaneous_frequency(nb, t_mid);
    ref.rocof = instantaneous_rocof(nb, t_mid);
    return ref;
}

inline ReferenceSeries dataset2_reference(std::span<const double> t_mid,
                                          const OscillationModel& model = dataset2_model()) {
    return oscillation_reference(model, t_mid);
}

// the step model carries no frequency deviation: reference frequency is the
// carrier, reference rocof is fixed at zero
inline ReferenceSeries dataset3_reference(std::span<const double> t_mid,
                                          const StepModel& model = dataset3_model()) {
    ReferenceSeries ref;
    ref.source = reference_source::analytic;
    ref.t.assign(t_mid.begin(), t_mid.end());
    ref.freq.assign(t_mid.size(), model.pre_freq);
    ref.rocof.assign(t_mid.size(), 0.0);
    return ref;
}

// finite-difference streams are scored against the same finite difference
// applied to the true frequency at the reporting grid; derivative streams
// against the instantaneous value
inline std::vector<double> scored_rocof_reference(const ReferenceSeries& ref, rocof_mode mode,
                                                  double tr = 1.0 / kReportRate) {
    if (mode == rocof_mode::derivative) return ref.rocof;
    return rocof_reference(ref.freq, tr);
}

inline ErrorStats score_stream(const StreamResult& s, const ReferenceSeries& ref,
                               double tr = 1.0 / kReportRate) {
    return rfe_stats(rocof_series(s.est), scored_rocof_reference(ref, s.mode, tr));
}

// signed errors with flagged pairs dropped, for CDF construction
inline std::vector<double> rfe_errors(const StreamResult& s, const ReferenceSeries& ref,
                                      double tr = 1.0 / kReportRate) {
    const auto est = rocof_series(s.est);
    const auto r = scored_rocof_reference(ref, s.mode, tr);
    std::vector<double> out;
    out.reserve(est.size());
    for (std::size_t i = 0; i < est.size(); ++i)
        if (!std::isnan(est[i]) && !std::isnan(r[i])) out.push_back(est[i] - r[i]);
    return out;
}

// ---- previously published benchmark values (report reference columns) ----

struct BenchmarkRow {
    double e_fin = 0.0;
    double i_fin = 0.0;
    double tfm_fin = 0.0;
    double tfm_der = 0.0;
};

inline double benchmark_value(const BenchmarkRow& r, algorithm a, rocof_mode m) {
    if (a == algorithm::e_ipdft) return r.e_fin;
    if (a == algorithm::i_ipdft) return r.i_fin;
    return m == rocof_mode::derivative ? r.tfm_der : r.tfm_fin;
}

inline BenchmarkRow published_rfe_p95(int dataset, int window_cycles) {
    if (dataset == 1)
        return window_cycles == 3 ? BenchmarkRow{10.51, 5.59, 1.12, 1.11}
                                  : BenchmarkRow{2.03, 0.57, 0.38, 0.56};
    return window_cycles == 3 ? BenchmarkRow{0.24, 0.20, 0.09, 0.16}
                              : BenchmarkRow{0.09, 0.07, 0.03, 0.04};
}

inline BenchmarkRow published_nrmse_ppm(int window_cycles) {
    return window_cycles == 3 ? BenchmarkRow{263.0, 297.0, 112.0, 146.0}
                              : BenchmarkRow{161.0, 180.0, 62.0, 84.0};
}

struct NrmseBand {
    double mean = 0.0;
    double std = 0.0;
    double max = 0.0;
};

inline NrmseBand published_steady_nrmse(bool pre_event, int window_cycles) {
    if (pre_event)
        return window_cycles == 3 ? NrmseBand{81.94, 1.34, 85.70} : NrmseBand{52.40, 0.77, 54.31};
    return window_cycles == 3 ? NrmseBand{48.89, 1.35, 52.94} : NrmseBand{29.98, 0.69, 32.07};
}

inline std::string ieee_limit_label(int dataset, int window_cycles) {
    if (dataset == 1) return window_cycles == 3 ? "0.4" : "suspended";
    if (dataset == 2) return window_cycles == 3 ? "0.4" : "0.2";
    return "-";
}

// ---- CSV emitters ----

inline EstimatorConfig stream_config(const EstimatorConfig& base, const StreamResult& s) {
    EstimatorConfig cfg = base;
    cfg.window_cycles = s.window_cycles;
    cfg.algo = s.algo;
    cfg.rocof = s.mode;
    return cfg;
}

inline std::string estimator_echo(const EstimatorConfig& cfg) {
    std::ostringstream ss;
    ss << "fs=" << cfg.fs << " f_nominal=" << cfg.f_nominal << " rate=" << cfg.reporting_rate
       << " window_cycles=" << cfg.window_cycles << " algo=" << algo_name(cfg.algo)
       << " rocof=" << mode_tag(cfg.rocof) << " ipdft_iterations=" << cfg.ipdft_iterations
       << " iipdft_max_outer=" << cfg.iipdft_max_outer << " taylor_order=" << cfg.taylor_order
       << " atom_budget=" << cfg.atom_budget << " weighted_fit=" << (cfg.weighted_fit ? 1 : 0)
       << " condition_guard=" << cfg.condition_guard;
    return ss.str();
}

inline void write_estimates_csv(const std::string& path, const StreamResult& s,
                                const EstimatorConfig& base,
                                const std::vector<std::string>& comments = {}) {
    csv_writer out(path);
    for (const auto& c : comments) out.comment(c);
    out.comment(estimator_echo(stream_config(base, s)));
    out.row("t_mid,amplitude,phase,freq,rocof,flags");
    for (const auto& e : s.est) out.fields(e.t_mid, e.amplitude, e.phase, e.freq, e.rocof, e.flags);
}

inline void write_reference_csv(const std::string& path, const ReferenceSeries& ref,
                                const std::vector<std::string>& comments = {}) {
    csv_writer out(path);
    for (const auto& c : comments) out.comment(c);
    out.comment(std::string("source=") +
                (ref.source == reference_source::analytic ? "analytic" : "numeric"));
    out.row("t,freq,rocof");
    for (std::size_t i = 0; i < ref.t.size(); ++i) out.fields(ref.t[i], ref.freq[i], ref.rocof[i]);
}

inline void stats_header(csv_writer& out) {
    out.row("dataset,algorithm,class,rocof_mode,mean,std,p95,pearson,n");
}

inline void stats_row(csv_writer& out, const std::string& dataset, const StreamResult& s,
                      const ErrorStats& st) {
    if (st.pearson_defined)
        out.fields(dataset, algo_name(s.algo), class_tag(s.window_cycles), mode_tag(s.mode),
                   st.mean, st.std, st.p95_abs, st.pearson, st.n);
    else
        out.fields(dataset, algo_name(s.algo), class_tag(s.window_cycles), mode_tag(s.mode),
                   st.mean, st.std, st.p95_abs, "undefined", st.n);
}

inline void write_cdf_csv(const std::string& path, const EmpiricalCdf& cdf,
                          const std::vector<std::string>& comments = {}) {
    csv_writer out(path);
    for (const auto& c : comments) out.comment(c);
    out.row("abs_rfe,cum_prob");
    const auto& m = cdf.sorted_magnitudes();
    for (std::size_t i = 0; i < m.size(); ++i)
        out.fields(m[i], static_cast<double>(i + 1) / static_cast<double>(m.size()));
}

inline void write_nrmse_csv(const std::string& path, const StreamResult& s,
                            const std::vector<bool>* flags = nullptr,
                            const std::vector<std::string>& comments = {}) {
    csv_writer out(path);
    for (const auto& c : comments) out.comment(c);
    out.row(flags ? "t_mid,nrmse_ppm,flagged" : "t_mid,nrmse_ppm");
    for (std::size_t i = 0; i < s.est.size(); ++i) {
        if (flags)
            out.fields(s.est[i].t_mid, s.est[i].nrmse_ppm, (*flags)[i] ? 1 : 0);
        else
            out.fields(s.est[i].t_mid, s.est[i].nrmse_ppm);
    }
}

// ---- load-shedding scheme comparison ----

inline constexpr double kUflsSnrDb = 80.0;

inline RelayScheme staged_relay() { return {}; }

inline RelayScheme rocof_relay() {
    RelayScheme s;
    s.kind = relay_kind::rocof_proportional;
    return s;
}

struct UflsCompare {
    UflsResult staged;   // PLL frequency-staged
    UflsResult rocof_p;  // proportional rocof, static class-P profile
    UflsResult rocof_m;  // proportional rocof, dynamic class-M profile
};

inline UflsCompare run_ufls_compare(const GridModel& grid = default_grid(),
                                    double snr_db = kUflsSnrDb,
                                    std::uint64_t seed = kDefaultSeed,
                                    const RelayScheme& staged = staged_relay(),
                                    const RelayScheme& rocof = rocof_relay(),
                                    const PllConfig& pll = {}) {
    UflsCompare c;
    c.staged = run_ufls(grid, staged, measurement_source::pll, snr_db, seed, pll);
    c.rocof_p = run_ufls(grid, rocof, measurement_source::pmu_static_p, snr_db, seed, pll);
    c.rocof_m = run_ufls(grid, rocof, measurement_source::pmu_dynamic_m, snr_db, seed, pll);
    return c;
}

inline void write_ufls_trajectory(const std::string& path, const UflsResult& r,
                                  double blocks_total,
                                  const std::vector<std::string>& comments = {},
                                  double report_rate = 50.0) {
    csv_writer out(path);
    for (const auto& c : comments) out.comment(c);
    out.row("t,freq,served_mw,shed_mw");
    const auto hop = static_cast<std::size_t>(std::llround(1.0 / (r.dt * report_rate)));
    for (std::size_t n = 0; n < r.freq.size(); n += hop)
        out.fields(static_cast<double>(n) * r.dt, r.freq[n], r.served_mw[n],
                   blocks_total - r.served_mw[n]);
}

inline void write_ufls_events(const std::string& path, const UflsResult& r,
                              const std::vector<std::string>& comments = {}) {
    csv_writer out(path);
    for (const auto& c : comments) out.comment(c);
    out.row("t,kind,mw");
    for (const auto& e : r.events) out.fields(e.t, e.kind, e.mw);
}

}  // namespace rocofbench
