#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "ids/csv.hpp"
#include "ids/errors.hpp"
#include "ids/mcmil.hpp"
#include "ids/rng.hpp"

namespace ids {

// Flat key=value configuration. Unknown keys are rejected; CLI overrides win
// over file values, file values over defaults.
class PipelineConfig {
public:
    std::uint64_t seed = 1;

    int utc_offset_hours = 8;

    double stationary_radius_m = 200.0;
    double min_sleep_minutes = 240.0;

    int gmm_k = 8;
    int gmm_max_iters = 100;
    double gmm_tol = 1e-6;
    double gmm_var_floor_rel = 1e-4;

    int lda_words = 50;
    int lda_topics = 60;
    double lda_alpha = 0.0;  // 0: use 50/topics
    double lda_beta = 0.01;
    int lda_fit_iters = 500;
    int lda_infer_iters = 100;
    double lda_delta_m = 100.0;
    int lda_vocab_sample = 200000;  // 0: use all points

    int msp_window_days = 16;
    int msp_step_days = 4;
    int msp_range_days = 30;  // 0: full observed span
    std::vector<int> msp_scales{1, 2, 4};

    int mcmil_rounds = 50;
    int mcmil_max_depth = 3;
    double mcmil_alpha_max = 10.0;
    WeightMode mcmil_weight_mode = WeightMode::Exact;

    std::string train_model = "mcmil";
    double split_test_fraction = 0.3;
    std::uint64_t split_seed = 7;

    int synth_n_taxis = 50;
    int synth_n_days = 30;
    double synth_ids_fraction = 0.1;
    int synth_substitution_days = 14;
    int synth_gps_interval_s = 600;
    double synth_low_precision_fraction = 0.0;
    double synth_pu_rate_min = 12.0;
    double synth_pu_rate_max = 24.0;
    double synth_min_home_separation_m = 5000.0;
    double synth_min_hotspot_separation_m = 3000.0;
    double synth_roam_sigma_m = 4000.0;
    double synth_city_half_extent_m = 15000.0;
    double synth_hotspot_sigma_m = 400.0;

    double effective_lda_alpha() const { return lda_alpha > 0.0 ? lda_alpha : 50.0 / lda_topics; }

    static const std::map<std::string, std::string>& defaults() {
        static const std::map<std::string, std::string> d = {
            {"seed", "1"},
            {"ingest.utc_offset_hours", "8"},
            {"stl.stationary_radius_m", "200"},
            {"stl.min_sleep_minutes", "240"},
            {"gmm.k", "8"},
            {"gmm.max_iters", "100"},
            {"gmm.tol", "1e-6"},
            {"gmm.var_floor_rel", "1e-4"},
            {"lda.words", "50"},
            {"lda.topics", "60"},
            {"lda.alpha", "0"},
            {"lda.beta", "0.01"},
            {"lda.fit_iters", "500"},
            {"lda.infer_iters", "100"},
            {"lda.delta_m", "100"},
            {"lda.vocab_sample", "200000"},
            {"msp.window_days", "16"},
            {"msp.step_days", "4"},
            {"msp.range_days", "30"},
            {"msp.scales", "1,2,4"},
            {"mcmil.rounds", "50"},
            {"mcmil.max_depth", "3"},
            {"mcmil.alpha_max", "10"},
            {"mcmil.weight_mode", "exact"},
            {"train.model", "mcmil"},
            {"split.test_fraction", "0.3"},
            {"split.seed", "7"},
            {"synth.n_taxis", "50"},
            {"synth.n_days", "30"},
            {"synth.ids_fraction", "0.1"},
            {"synth.substitution_days", "14"},
            {"synth.gps_interval_s", "600"},
            {"synth.low_precision_fraction", "0"},
            {"synth.pu_rate_min", "12"},
            {"synth.pu_rate_max", "24"},
            {"synth.min_home_separation_m", "5000"},
            {"synth.min_hotspot_separation_m", "3000"},
            {"synth.roam_sigma_m", "4000"},
            {"synth.city_half_extent_m", "15000"},
            {"synth.hotspot_sigma_m", "400"},
        };
        return d;
    }

    // Parses an optional config file plus "key=value" overrides.
    static PipelineConfig load(const std::string& path, const std::vector<std::string>& overrides = {}) {
        std::map<std::string, std::string> kv = defaults();
        if (!path.empty()) {
            std::ifstream in(path);
            if (!in) throw MissingArtifactError(path);
            std::string line;
            long line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                apply_line(kv, line, path + ":" + std::to_string(line_no));
            }
        }
        for (const auto& ov : overrides) apply_line(kv, ov, "override '" + ov + "'");
        PipelineConfig cfg;
        cfg.parse_values(kv);
        cfg.values_ = std::move(kv);
        return cfg;
    }

    const std::map<std::string, std::string>& values() const { return values_; }

    // FNV-1a over the canonical sorted key=value listing of the full
    // effective configuration.
    std::uint64_t hash() const {
        std::string s;
        for (const auto& [k, v] : values_) {
            s += k;
            s += '=';
            s += v;
            s += '\n';
        }
        return hash_str(s);
    }

private:
    std::map<std::string, std::string> values_;

    static void apply_line(std::map<std::string, std::string>& kv, const std::string& raw, const std::string& where) {
        std::string line = raw;
        std::size_t hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        auto trim = [](std::string s) {
            std::size_t b = s.find_first_not_of(" \t\r");
            std::size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) return;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "expected key=value at " + where);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (kv.find(key) == kv.end()) throw ConfigError(key, "unknown key at " + where);
        kv[key] = value;
    }

    static double dbl(const std::map<std::string, std::string>& kv, const std::string& key, double lo, double hi) {
        double v;
        if (!parse_double(kv.at(key), v)) throw ConfigError(key, "not a number: '" + kv.at(key) + "'");
        if (v < lo || v > hi)
            throw ConfigError(key, "value " + kv.at(key) + " outside [" + fmt_double(lo) + ", " + fmt_double(hi) + "]");
        return v;
    }

    static std::int64_t integer(const std::map<std::string, std::string>& kv, const std::string& key, std::int64_t lo,
                                std::int64_t hi) {
        std::int64_t v;
        if (!parse_i64(kv.at(key), v)) throw ConfigError(key, "not an integer: '" + kv.at(key) + "'");
        if (v < lo || v > hi)
            throw ConfigError(key, "value " + kv.at(key) + " outside [" + std::to_string(lo) + ", " +
                                       std::to_string(hi) + "]");
        return v;
    }

    void parse_values(const std::map<std::string, std::string>& kv) {
        std::int64_t s;
        if (!parse_i64(kv.at("seed"), s)) throw ConfigError("seed", "not an integer");
        seed = static_cast<std::uint64_t>(s);
        utc_offset_hours = static_cast<int>(integer(kv, "ingest.utc_offset_hours", -14, 14));
        stationary_radius_m = dbl(kv, "stl.stationary_radius_m", 1.0, 100000.0);
        min_sleep_minutes = dbl(kv, "stl.min_sleep_minutes", 1.0, 1440.0);
        gmm_k = static_cast<int>(integer(kv, "gmm.k", 1, 1024));
        gmm_max_iters = static_cast<int>(integer(kv, "gmm.max_iters", 1, 100000));
        gmm_tol = dbl(kv, "gmm.tol", 0.0, 1.0);
        gmm_var_floor_rel = dbl(kv, "gmm.var_floor_rel", 1e-12, 1.0);
        lda_words = static_cast<int>(integer(kv, "lda.words", 1, 1000000));
        lda_topics = static_cast<int>(integer(kv, "lda.topics", 1, 100000));
        lda_alpha = dbl(kv, "lda.alpha", 0.0, 10000.0);
        lda_beta = dbl(kv, "lda.beta", 1e-9, 1000.0);
        lda_fit_iters = static_cast<int>(integer(kv, "lda.fit_iters", 1, 1000000));
        lda_infer_iters = static_cast<int>(integer(kv, "lda.infer_iters", 1, 1000000));
        lda_delta_m = dbl(kv, "lda.delta_m", 1e-6, 1000000.0);
        lda_vocab_sample = static_cast<int>(integer(kv, "lda.vocab_sample", 0, 1000000000));
        msp_window_days = static_cast<int>(integer(kv, "msp.window_days", 2, 10000));
        msp_step_days = static_cast<int>(integer(kv, "msp.step_days", 1, 10000));
        msp_range_days = static_cast<int>(integer(kv, "msp.range_days", 0, 1000000));
        msp_scales = parse_scales(kv.at("msp.scales"));
        for (int sc : msp_scales)
            if (msp_window_days % sc != 0)
                throw ConfigError("msp.scales", "window " + std::to_string(msp_window_days) +
                                                    " not divisible by scale " + std::to_string(sc));
        mcmil_rounds = static_cast<int>(integer(kv, "mcmil.rounds", 0, 100000));
        mcmil_max_depth = static_cast<int>(integer(kv, "mcmil.max_depth", 1, 32));
        mcmil_alpha_max = dbl(kv, "mcmil.alpha_max", 1e-6, 10000.0);
        const std::string& wm = kv.at("mcmil.weight_mode");
        if (wm == "exact")
            mcmil_weight_mode = WeightMode::Exact;
        else if (wm == "simplified")
            mcmil_weight_mode = WeightMode::Simplified;
        else
            throw ConfigError("mcmil.weight_mode", "must be 'exact' or 'simplified'");
        train_model = kv.at("train.model");
        if (train_model != "mcmil" && train_model != "mil" && train_model != "mil-stl" && train_model != "mil-pu" &&
            train_model != "logistic")
            throw ConfigError("train.model", "must be one of mcmil, mil, mil-stl, mil-pu, logistic");
        split_test_fraction = dbl(kv, "split.test_fraction", 0.0, 0.9);
        std::int64_t ss;
        if (!parse_i64(kv.at("split.seed"), ss)) throw ConfigError("split.seed", "not an integer");
        split_seed = static_cast<std::uint64_t>(ss);
        synth_n_taxis = static_cast<int>(integer(kv, "synth.n_taxis", 1, 10000000));
        synth_n_days = static_cast<int>(integer(kv, "synth.n_days", 1, 100000));
        synth_ids_fraction = dbl(kv, "synth.ids_fraction", 0.0, 1.0);
        synth_substitution_days = static_cast<int>(integer(kv, "synth.substitution_days", 1, 100000));
        synth_gps_interval_s = static_cast<int>(integer(kv, "synth.gps_interval_s", 1, 86400));
        synth_low_precision_fraction = dbl(kv, "synth.low_precision_fraction", 0.0, 1.0);
        synth_pu_rate_min = dbl(kv, "synth.pu_rate_min", 0.0, 10000.0);
        synth_pu_rate_max = dbl(kv, "synth.pu_rate_max", 0.0, 10000.0);
        if (synth_pu_rate_max < synth_pu_rate_min)
            throw ConfigError("synth.pu_rate_max", "must be >= synth.pu_rate_min");
        synth_min_home_separation_m = dbl(kv, "synth.min_home_separation_m", 0.0, 1e7);
        synth_min_hotspot_separation_m = dbl(kv, "synth.min_hotspot_separation_m", 0.0, 1e7);
        synth_roam_sigma_m = dbl(kv, "synth.roam_sigma_m", 0.0, 1e7);
        synth_city_half_extent_m = dbl(kv, "synth.city_half_extent_m", 1.0, 1e7);
        synth_hotspot_sigma_m = dbl(kv, "synth.hotspot_sigma_m", 0.0, 1e7);
    }

    static std::vector<int> parse_scales(const std::string& s) {
        std::vector<int> out;
        std::string cur;
        auto flush = [&]() {
            if (cur.empty()) return;
            std::int64_t v;
            if (!parse_i64(cur, v) || v < 1 || v > 10000) throw ConfigError("msp.scales", "bad scale '" + cur + "'");
            out.push_back(static_cast<int>(v));
            cur.clear();
        };
        for (char c : s) {
            if (c == ',')
                flush();
            else if (!std::isspace(static_cast<unsigned char>(c)))
                cur += c;
        }
        flush();
        if (out.empty()) throw ConfigError("msp.scales", "no scales given");
        return out;
    }
};

}  // namespace ids
