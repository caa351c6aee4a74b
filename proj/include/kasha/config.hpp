// config.hpp — Flat sectioned key = value configuration with unit suffixes.

#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "kasha/units.hpp"

namespace kasha {

// "[section]" headers, "key = value" lines, '#' comments. Values may carry a
// unit suffix separated by whitespace ("omega = 23 THz").
class Config {
public:
    Config() = default;

    static Config parse(std::istream& in) {
        Config cfg;
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            if (trimmed.front() == '[') {
                if (trimmed.back() != ']')
                    throw std::invalid_argument("config line " +
                                                std::to_string(lineno) +
                                                ": malformed section header");
                section = trim(trimmed.substr(1, trimmed.size() - 2));
                continue;
            }
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": expected key = value");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": empty key");
            cfg.entries_[section + "." + key] = value;
        }
        return cfg;
    }

    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open config file " + path);
        return parse(in);
    }

    static Config parse_string(const std::string& text) {
        std::istringstream in(text);
        return parse(in);
    }

    bool has(const std::string& section, const std::string& key) const {
        return entries_.count(section + "." + key) > 0;
    }

    std::string get_string(const std::string& section, const std::string& key) const {
        const auto it = entries_.find(section + "." + key);
        if (it == entries_.end())
            throw std::invalid_argument("missing config field " + section + "." + key);
        return it->second;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        return has(section, key) ? get_string(section, key) : fallback;
    }

    double get_double(const std::string& section, const std::string& key) const {
        const auto [value, suffix] = split_quantity(section, key);
        if (!suffix.empty())
            throw std::invalid_argument("field " + section + "." + key +
                                        ": unexpected unit '" + suffix + "'");
        return value;
    }

    double get_double(const std::string& section, const std::string& key,
                      double fallback) const {
        return has(section, key) ? get_double(section, key) : fallback;
    }

    std::int64_t get_int(const std::string& section, const std::string& key) const {
        const double v = get_double(section, key);
        const auto i = static_cast<std::int64_t>(v);
        if (static_cast<double>(i) != v)
            throw std::invalid_argument("field " + section + "." + key +
                                        ": expected an integer");
        return i;
    }

    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const {
        return has(section, key) ? get_int(section, key) : fallback;
    }

    // rate in rad/s; a bare number is an error unless the suffix is "gamma0",
    // in which case gamma0_si scales it
    double get_rate_si(const std::string& section, const std::string& key,
                       double gamma0_si) const {
        const auto [value, suffix] = split_quantity(section, key);
        if (suffix == "gamma0") return value * gamma0_si;
        try {
            return units::rate_to_si(value, suffix);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("field " + section + "." + key +
                                        ": unknown rate unit '" + suffix + "'");
        }
    }

    double get_length_si(const std::string& section, const std::string& key) const {
        const auto [value, suffix] = split_quantity(section, key);
        try {
            return units::length_to_si(value, suffix);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("field " + section + "." + key +
                                        ": unknown length unit '" + suffix + "'");
        }
    }

    const std::map<std::string, std::string>& entries() const { return entries_; }

    void set(const std::string& section, const std::string& key,
             const std::string& value) {
        entries_[section + "." + key] = value;
    }

    // writes the entries back out in parseable [section] / key = value form
    void dump(std::ostream& out) const {
        std::string current_section = "\x01";
        for (const auto& [path, value] : entries_) {
            const auto dot = path.find('.');
            const std::string section = path.substr(0, dot);
            const std::string key = path.substr(dot + 1);
            if (section != current_section) {
                if (!section.empty()) out << "[" << section << "]\n";
                current_section = section;
            }
            out << key << " = " << value << "\n";
        }
    }

private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    std::pair<double, std::string> split_quantity(const std::string& section,
                                                  const std::string& key) const {
        const std::string raw = get_string(section, key);
        std::istringstream in(raw);
        double value;
        if (!(in >> value))
            throw std::invalid_argument("field " + section + "." + key +
                                        ": expected a number, got '" + raw + "'");
        std::string suffix, extra;
        in >> suffix;
        if (in >> extra)
            throw std::invalid_argument("field " + section + "." + key +
                                        ": trailing content '" + extra + "'");
        return {value, suffix};
    }

    std::map<std::string, std::string> entries_;
};

}  // namespace kasha
