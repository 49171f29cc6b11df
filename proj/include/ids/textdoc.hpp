#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ids/csv.hpp"
#include "ids/errors.hpp"

namespace ids {

// Versioned whitespace-separated text documents used for model artifacts.
// First line is "<kind> v<version>". Doubles are written with %.17g, which
// round-trips exactly, so save -> load -> save is byte-identical.
class TextDocWriter {
public:
    TextDocWriter(const std::string& path, const std::string& kind, int version) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open for writing: " + path);
        out_ << kind << " v" << version << "\n";
    }

    void kv(const std::string& key, std::int64_t v) { out_ << key << " " << v << "\n"; }
    void kv(const std::string& key, std::uint64_t v) { out_ << key << " " << v << "\n"; }
    void kv(const std::string& key, int v) { out_ << key << " " << v << "\n"; }
    void kv(const std::string& key, double v) { out_ << key << " " << fmt_double(v) << "\n"; }
    void kv(const std::string& key, const std::string& v) { out_ << key << " " << v << "\n"; }

    void vec(const std::string& key, const std::vector<double>& v) {
        out_ << key;
        for (double x : v) out_ << " " << fmt_double(x);
        out_ << "\n";
    }

    void raw(const std::string& line) { out_ << line << "\n"; }

    std::ofstream& stream() { return out_; }

private:
    std::ofstream out_;
};

class TextDocReader {
public:
    TextDocReader(const std::string& path, const std::string& kind, int version) : path_(path), in_(path) {
        if (!in_) throw MissingArtifactError(path);
        std::string k, v;
        if (!(in_ >> k >> v)) throw ArtifactVersionError(path, "missing version line");
        std::string want = "v" + std::to_string(version);
        if (k != kind || v != want)
            throw ArtifactVersionError(path, "expected '" + kind + " " + want + "', found '" + k + " " + v + "'");
    }

    std::string token() {
        std::string t;
        if (!(in_ >> t)) throw std::runtime_error(path_ + ": unexpected end of document");
        return t;
    }

    void expect(const std::string& tag) {
        std::string t = token();
        if (t != tag) throw std::runtime_error(path_ + ": expected '" + tag + "', found '" + t + "'");
    }

    std::int64_t integer() {
        std::int64_t v;
        std::string t = token();
        if (!parse_i64(t, v)) throw std::runtime_error(path_ + ": expected integer, found '" + t + "'");
        return v;
    }

    std::uint64_t uinteger() {
        std::string t = token();
        std::uint64_t v;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || p != t.data() + t.size())
            throw std::runtime_error(path_ + ": expected unsigned integer, found '" + t + "'");
        return v;
    }

    double number() {
        double v;
        std::string t = token();
        if (!parse_double(t, v)) throw std::runtime_error(path_ + ": expected number, found '" + t + "'");
        return v;
    }

    std::vector<double> numbers(std::size_t n) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = number();
        return v;
    }

    bool try_token(std::string& t) { return static_cast<bool>(in_ >> t); }

private:
    std::string path_;
    std::ifstream in_;
};

}  // namespace ids
