#pragma once

// INI-style configuration: [section] headers, key = value pairs, '#' or ';'
// comments. Unknown keys are kept so callers can reject or ignore them.

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rocofbench {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class config {
public:
    config() = default;

    static config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot open config: " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return from_string(ss.str(), path);
    }

    static config from_string(const std::string& text, const std::string& origin = "<string>") {
        config c;
        std::stringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto s = trim(line);
            if (s.empty() || s[0] == '#' || s[0] == ';') continue;
            if (s.front() == '[') {
                if (s.back() != ']')
                    throw config_error(origin + ":" + std::to_string(lineno) + ": unterminated section header");
                section = trim(s.substr(1, s.size() - 2));
                if (section.empty())
                    throw config_error(origin + ":" + std::to_string(lineno) + ": empty section name");
                continue;
            }
            auto eq = s.find('=');
            if (eq == std::string::npos)
                throw config_error(origin + ":" + std::to_string(lineno) + ": expected key = value");
            auto key = trim(s.substr(0, eq));
            auto val = trim(s.substr(eq + 1));
            if (key.empty())
                throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
            c.values_[section.empty() ? key : section + "." + key] = val;
        }
        return c;
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_str(const std::string& key, const std::string& dflt) const {
        auto it = values_.find(key);
        return it == values_.end() ? dflt : it->second;
    }

    double get_num(const std::string& key, double dflt) const {
        auto it = values_.find(key);
        if (it == values_.end()) return dflt;
        const std::string& s = it->second;
        double v = 0.0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size())
            throw config_error("key '" + key + "': not a number: " + s);
        return v;
    }

    long get_int(const std::string& key, long dflt) const {
        auto it = values_.find(key);
        if (it == values_.end()) return dflt;
        const std::string& s = it->second;
        long v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size())
            throw config_error("key '" + key + "': not an integer: " + s);
        return v;
    }

    bool get_bool(const std::string& key, bool dflt) const {
        auto it = values_.find(key);
        if (it == values_.end()) return dflt;
        const std::string& s = it->second;
        if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
        if (s == "false" || s == "0" || s == "no" || s == "off") return false;
        throw config_error("key '" + key + "': not a boolean: " + s);
    }

    const std::map<std::string, std::string>& items() const { return values_; }

private:
    static std::string trim(const std::string& s) {
        auto b = s.find_first_not_of(" \t");
        if (b == std::string::npos) return "";
        auto e = s.find_last_not_of(" \t");
        return s.substr(b, e - b + 1);
    }

    std::map<std::string, std::string> values_;
};

}  // namespace rocofbench
