#pragma once

// Minimal CSV helpers. Comment lines start with '#'; values are written
// with enough digits to round-trip doubles.

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rocofbench {

class csv_writer {
public:
    explicit csv_writer(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open for writing: " + path);
        out_.precision(17);
    }

    void comment(const std::string& line) { out_ << "# " << line << "\n"; }

    void row(const std::string& line) { out_ << line << "\n"; }

    template <typename... Ts>
    void fields(const Ts&... vs) {
        bool first = true;
        ((out_ << (first ? "" : ","), first = false, out_ << vs), ...);
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

struct csv_table {
    std::vector<std::string> comments;
    std::string header;
    std::vector<std::vector<std::string>> rows;
};

inline csv_table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    csv_table t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            t.comments.push_back(line);
            continue;
        }
        if (!have_header) {
            t.header = line;
            have_header = true;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        t.rows.push_back(std::move(cells));
    }
    return t;
}

inline double to_double(const std::string& s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{}) throw std::runtime_error("bad number: " + s);
    return v;
}

}  // namespace rocofbench
