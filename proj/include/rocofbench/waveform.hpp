#pragma once

// Sampled waveform container plus CSV round-trip. The file format is a
// comment header carrying sample rate and provenance, then one sample per
// row: index,value.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rocofbench/csv.hpp"

namespace rocofbench {

struct waveform {
    double fs = 0.0;    // samples per second
    double t0 = 0.0;    // time of sample 0
    std::string unit = "pu";
    std::string label;  // free-form scenario tag
    std::optional<std::uint64_t> seed;  // noise seed, if any
    std::vector<double> samples;

    double t(std::size_t n) const { return t0 + static_cast<double>(n) / fs; }
    std::size_t size() const { return samples.size(); }
};

inline void write_waveform(const waveform& w, const std::string& path) {
    csv_writer out(path);
    std::string hdr = "fs=" + std::to_string(w.fs) + " unit=" + w.unit +
                      " t0=" + std::to_string(w.t0) +
                      " seed=" + (w.seed ? std::to_string(*w.seed) : std::string("none"));
    if (!w.label.empty()) hdr += " label=" + w.label;
    out.comment(hdr);
    out.row("n,value");
    for (std::size_t n = 0; n < w.samples.size(); ++n) out.fields(n, w.samples[n]);
}

inline waveform read_waveform(const std::string& path) {
    auto t = read_csv(path);
    waveform w;
    for (const auto& c : t.comments) {
        std::stringstream ss(c.substr(1));
        std::string tok;
        while (ss >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos) continue;
            auto key = tok.substr(0, eq);
            auto val = tok.substr(eq + 1);
            if (key == "fs") w.fs = std::stod(val);
            else if (key == "t0") w.t0 = std::stod(val);
            else if (key == "unit") w.unit = val;
            else if (key == "label") w.label = val;
            else if (key == "seed" && val != "none") w.seed = std::stoull(val);
        }
    }
    w.samples.reserve(t.rows.size());
    for (const auto& r : t.rows) {
        if (r.size() < 2) throw std::runtime_error("waveform row needs n,value: " + path);
        w.samples.push_back(to_double(r[1]));
    }
    return w;
}

}  // namespace rocofbench
