#pragma once

// Ground-truth frequency/ROCOF references: the analytic instantaneous
// frequency of a narrowband tone cluster (the components a PMU cannot
// resolve from the fundamental), its numeric-differentiation cross-check,
// and the closed-form references for the oscillation model.

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "rocofbench/spectrum.hpp"
#include "rocofbench/wavegen.hpp"

namespace rocofbench {

enum class reference_source { analytic, numeric_differentiation };

struct ReferenceSeries {
    std::vector<double> t;
    std::vector<double> freq;
    std::vector<double> rocof;
    reference_source source = reference_source::analytic;
};

namespace detail {

inline cdouble analytic_sum(const ToneSet& m, double t) {
    cdouble z(0.0, 0.0);
    for (const auto& c : m.components)
        z += m.fundamental_amplitude * c.norm_amplitude *
             std::polar(1.0, two_pi * c.harm_index * m.system_freq * t + c.phase);
    return z;
}

}  // namespace detail

// f(t) = (1/2pi) d/dt arg(sum_k A_k e^{j(2pi f_k t + theta_k)}), closed form
// via Im(z' conj(z))/|z|^2
inline double instantaneous_frequency_at(const ToneSet& m, double t) {
    cdouble z(0.0, 0.0), zp(0.0, 0.0);
    for (const auto& c : m.components) {
        const double f = c.harm_index * m.system_freq;
        const cdouble e = m.fundamental_amplitude * c.norm_amplitude *
                          std::polar(1.0, two_pi * f * t + c.phase);
        z += e;
        zp += cdouble(0.0, two_pi * f) * e;
    }
    const double p = std::norm(z);
    if (!(p > 0.0)) throw std::domain_error("envelope passes through zero, phase undefined");
    return std::imag(zp * std::conj(z)) / (two_pi * p);
}

inline std::vector<double> instantaneous_frequency(const ToneSet& m,
                                                   std::span<const double> t_grid) {
    m.validate();
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) out.push_back(instantaneous_frequency_at(m, t));
    return out;
}

// 5-point central differences of the unwrapped analytic-sum phase; the
// cross-check oracle for the closed form above
inline std::vector<double> instantaneous_frequency_numeric(const ToneSet& m,
                                                           std::span<const double> t_grid,
                                                           double h = 2e-4) {
    m.validate();
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        double ph[5];
        for (int i = 0; i < 5; ++i) {
            const cdouble z = detail::analytic_sum(m, t + (i - 2) * h);
            if (!(std::norm(z) > 0.0))
                throw std::domain_error("envelope passes through zero, phase undefined");
            ph[i] = std::arg(z);
        }
        // unwrap outward from the center point
        for (int i = 3; i < 5; ++i)
            ph[i] = ph[i - 1] + std::remainder(ph[i] - ph[i - 1], two_pi);
        for (int i = 1; i >= 0; --i)
            ph[i] = ph[i + 1] + std::remainder(ph[i] - ph[i + 1], two_pi);
        out.push_back((-ph[4] + 8.0 * ph[3] - 8.0 * ph[1] + ph[0]) / (12.0 * h) / two_pi);
    }
    return out;
}

// derivative of the analytic instantaneous frequency, for scoring the
// derivative ROCOF formulation
inline std::vector<double> instantaneous_rocof(const ToneSet& m, std::span<const double> t_grid,
                                               double h = 1e-4) {
    m.validate();
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid)
        out.push_back((instantaneous_frequency_at(m, t + h) -
                       instantaneous_frequency_at(m, t - h)) /
                      (2.0 * h));
    return out;
}

// rocof[n] = (freq[n] - freq[n-1]) / Tr, first element undefined (NaN)
inline std::vector<double> rocof_reference(const std::vector<double>& freq, double tr) {
    if (freq.size() < 2) throw std::invalid_argument("need at least 2 frequency points");
    std::vector<double> out(freq.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 1; i < freq.size(); ++i) out[i] = (freq[i] - freq[i - 1]) / tr;
    return out;
}

// closed-form frequency/ROCOF of the oscillation model:
//   freq(t)  = f + r(t) - k_phi f_phi sin(2 pi f_phi t)
//   rocof(t) = dr/dt    - 2 pi k_phi f_phi^2 cos(2 pi f_phi t)
inline ReferenceSeries oscillation_reference(const OscillationModel& m,
                                             std::span<const double> t_grid) {
    m.validate();
    ReferenceSeries ref;
    ref.source = reference_source::analytic;
    ref.t.assign(t_grid.begin(), t_grid.end());
    ref.freq.reserve(t_grid.size());
    ref.rocof.reserve(t_grid.size());
    for (double t : t_grid) {
        double r = 0.0, ri = 0.0;
        m.ramp_at(t, r, ri);
        double slope = 0.0;
        for (const auto& s : m.segments)
            if (t < s.t_stop || &s == &m.segments.back()) {
                slope = m.literal_ramp_phase ? 2.0 * s.rf : s.rf;
                break;
            }
        ref.freq.push_back(m.f + r - m.k_phi * m.f_phi * std::sin(two_pi * m.f_phi * t));
        ref.rocof.push_back(slope -
                            two_pi * m.k_phi * m.f_phi * m.f_phi * std::cos(two_pi * m.f_phi * t));
    }
    return ref;
}

}  // namespace rocofbench
