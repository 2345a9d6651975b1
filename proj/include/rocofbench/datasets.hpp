#pragma once

// Canonical benchmark fixtures: the three test waveforms and the
// estimator-class presets used across the CLI, demos, and tests.

#include <cstdint>

#include "rocofbench/estimators.hpp"
#include "rocofbench/wavegen.hpp"

namespace rocofbench {

inline constexpr double kFs = 5000.0;
inline constexpr double kFnom = 50.0;
inline constexpr double kReportRate = 50.0;
inline constexpr std::uint64_t kDefaultSeed = 42;

inline EstimatorConfig class_p_config() {
    EstimatorConfig c;
    c.window_cycles = 3;
    c.fs = kFs;
    c.f_nominal = kFnom;
    c.reporting_rate = kReportRate;
    return c;
}

inline EstimatorConfig class_m_config() {
    EstimatorConfig c;
    c.window_cycles = 5;
    c.fs = kFs;
    c.f_nominal = kFnom;
    c.reporting_rate = kReportRate;
    return c;
}

// steady fundamental plus inter-modulation tones, harmonics 2..10 and two
// out-of-band interharmonics; all phases zero, amplitudes relative to the
// fundamental
inline ToneSet dataset1_toneset() {
    ToneSet s;
    s.system_freq = kFnom;
    s.fundamental_amplitude = 1.0;
    s.components = {
        {0.243, 0.02},  {0.936, 0.01}, {1.0, 1.0},  {1.082, 0.005}, {1.625, 0.075},
        {2.0, 0.05},    {3.0, 0.05},   {4.0, 0.05}, {5.0, 0.05},    {6.0, 0.05},
        {7.0, 0.02},    {8.0, 0.02},   {9.0, 0.02}, {10.0, 0.02},
    };
    return s;
}

// the components a PMU cannot resolve from the fundamental: everything in
// the 45..55 Hz band. These define the frequency/ROCOF ground truth.
inline ToneSet dataset1_narrowband() {
    ToneSet s;
    s.system_freq = kFnom;
    s.fundamental_amplitude = 1.0;
    s.components = {{0.936, 0.01}, {1.0, 1.0}, {1.082, 0.005}};
    return s;
}

inline constexpr double kDataset1Duration = 5.0;
inline constexpr double kDataset1SnrDb = 60.0;

// amplitude/phase modulated carrier with a piecewise frequency-ramp
// schedule; 220.5 s
inline OscillationModel dataset2_model() {
    OscillationModel m;
    m.A = 71.45;
    m.f = 50.02;
    m.phi = -1.80;
    m.k_A = 0.136;
    m.f_A = 0.1531;
    m.k_phi = 0.0564;
    m.f_phi = 0.1526;
    m.segments = {
        {0.0, 30.5, 0.0},        {30.5, 78.5, 2.28e-3},   {78.5, 98.5, -2.29e-3},
        {98.5, 140.5, -2.05e-3}, {140.5, 180.5, 2.53e-3}, {180.5, 204.5, -1.42e-3},
        {204.5, 220.5, 0.0},
    };
    return m;
}

inline constexpr double kDataset2SnrDb = 60.0;

// islanding maneuver surrogate: amplitude/phase step at 14 s on a 50.07 Hz
// carrier, 20 s record. Distortion is noise-only by default; harmonic
// add-ons are config-selectable.
inline StepModel dataset3_model() {
    StepModel m;
    m.pre_amplitude = 77.66;
    m.pre_freq = 50.07;
    m.pre_phase = 1.032;
    m.post_amplitude = 80.14;
    m.post_freq = 50.07;
    m.post_phase = 0.884;
    m.t_step = 14.0;
    return m;
}

inline constexpr double kDataset3Duration = 20.0;
inline constexpr double kDataset3SnrDb = 46.24;
inline constexpr double kDataset3StepTime = 14.0;

}  // namespace rocofbench
