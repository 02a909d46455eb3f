#pragma once

#include <charconv>
#include <complex>
#include <fstream>
#include <string>
#include <vector>

#include "den/errors.hpp"

namespace den {

/// Locale-independent number formatting ('.' decimal point, shortest
/// round-trip representation).
inline std::string format_number(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

inline std::string format_complex(std::complex<double> z) {
    std::string s = format_number(z.real());
    s += (z.imag() < 0 ? "-" : "+");
    s += format_number(std::abs(z.imag()));
    s += "i";
    return s;
}

/// Minimal RFC-4180-style CSV writer. Header comment lines (prefixed '#')
/// carry the run-config echo for provenance.
class CsvWriter {
public:
    void comment(const std::string& line) { comments_.push_back(line); }
    void header(std::vector<std::string> cols) { columns_ = std::move(cols); }

    void row(const std::vector<std::string>& cells) {
        if (!columns_.empty() && cells.size() != columns_.size())
            throw ShapeMismatch("csv row width does not match header");
        rows_.push_back(cells);
    }

    void save(const std::string& path) const {
        std::ofstream os(path, std::ios::trunc);
        if (!os) throw ValidationError("cannot open for writing: " + path);
        for (const auto& c : comments_) os << "# " << c << "\n";
        if (!columns_.empty()) os << join(columns_) << "\n";
        for (const auto& r : rows_) os << join(r) << "\n";
        if (!os) throw ValidationError("write failed: " + path);
    }

private:
    static std::string join(const std::vector<std::string>& cells) {
        std::string out;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ",";
            bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
            if (quote) {
                out += '"';
                for (char ch : cells[i]) {
                    out += ch;
                    if (ch == '"') out += '"';
                }
                out += '"';
            } else {
                out += cells[i];
            }
        }
        return out;
    }

    std::vector<std::string> comments_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace den
