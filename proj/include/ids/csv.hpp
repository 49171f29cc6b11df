#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "ids/errors.hpp"

namespace ids {

// Number of decimal digits after the point in a numeric source text.
// Precision is a property of the text, not of the parsed value.
inline int decimal_digits(std::string_view s) {
    std::size_t dot = s.find('.');
    if (dot == std::string_view::npos) return 0;
    int n = 0;
    for (std::size_t i = dot + 1; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) ++n;
    return n;
}

inline bool parse_double(std::string_view s, double& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

inline bool parse_i64(std::string_view s, std::int64_t& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

inline void split_csv_line(std::string_view line, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

// Line-oriented CSV reader for the simple comma-separated formats used here
// (no quoting). Skips an optional leading "# <kind> v<N>" version comment.
class CsvReader {
public:
    explicit CsvReader(const std::string& path) : path_(path), in_(path) {
        if (!in_) throw MissingArtifactError(path);
    }

    // Reads the header row; returns false on empty file.
    bool read_header(std::vector<std::string_view>& fields) {
        while (std::getline(in_, line_)) {
            ++line_no_;
            if (!line_.empty() && line_[0] == '#') {
                if (version_.empty()) version_ = line_;
                continue;
            }
            strip_cr();
            split_csv_line(line_, fields);
            return true;
        }
        return false;
    }

    bool next(std::vector<std::string_view>& fields) {
        while (std::getline(in_, line_)) {
            ++line_no_;
            if (line_.empty()) continue;
            if (line_[0] == '#') continue;
            strip_cr();
            split_csv_line(line_, fields);
            return true;
        }
        return false;
    }

    long line_no() const { return line_no_; }
    const std::string& path() const { return path_; }
    const std::string& version_comment() const { return version_; }

private:
    void strip_cr() {
        if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    }

    std::string path_;
    std::ifstream in_;
    std::string line_;
    std::string version_;
    long line_no_ = 0;
};

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& kind, int version, const std::string& header)
        : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open for writing: " + path);
        out_ << "# " << kind << " v" << version << "\n" << header << "\n";
    }

    std::ofstream& stream() { return out_; }

    void line(const std::string& s) { out_ << s << "\n"; }

private:
    std::ofstream out_;
};

// Shortest round-trip decimal form of a double.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_fixed(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

}  // namespace ids
