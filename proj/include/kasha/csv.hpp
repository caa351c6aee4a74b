// csv.hpp — RFC-4180 compatible CSV emission.

#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kasha {

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out, int precision = 12) : out_(out) {
        out_.precision(precision);
    }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << quote(fields[i]);
        }
        out_ << "\r\n";
    }

    template <class... Args>
    void data_row(Args... values) {
        bool first = true;
        ((out_ << (first ? "" : ","), first = false, out_ << values), ...);
        out_ << "\r\n";
    }

    static std::string quote(const std::string& field) {
        if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
        std::string quoted = "\"";
        for (char c : field) {
            quoted += c;
            if (c == '"') quoted += '"';
        }
        quoted += '"';
        return quoted;
    }

private:
    std::ostream& out_;
};

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    return out;
}

}  // namespace kasha
