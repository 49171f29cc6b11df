#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "ids/csv.hpp"
#include "ids/dates.hpp"
#include "ids/errors.hpp"
#include "ids/eval.hpp"
#include "ids/sleep.hpp"
#include "ids/ssmsp.hpp"
#include "ids/textdoc.hpp"

namespace ids {

inline void require_file(const std::string& path) {
    if (!std::filesystem::exists(path)) throw MissingArtifactError(path);
}

// FNV-1a over the file bytes; used by the run manifest.
inline std::uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifactError(path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    return h;
}

// --- STL CSV: taxi_id,date,t_s,lon,lat,t_d ----------------------------------

inline void save_stl_csv(const std::string& path, const std::vector<SleepEpisode>& episodes) {
    CsvWriter w(path, "ids-stl", 1, "taxi_id,date,t_s,lon,lat,t_d");
    for (const auto& e : episodes) {
        w.stream() << e.taxi_id << ',' << format_date(e.local_date) << ',' << fmt_double(e.start_min) << ','
                   << fmt_double(e.loc_lon) << ',' << fmt_double(e.loc_lat) << ',' << fmt_double(e.duration_min)
                   << "\n";
    }
}

inline std::vector<SleepEpisode> load_stl_csv(const std::string& path) {
    CsvReader reader(path);
    std::vector<std::string_view> f;
    if (!reader.read_header(f)) return {};
    std::vector<SleepEpisode> out;
    while (reader.next(f)) {
        SleepEpisode e;
        if (f.size() != 6 || !parse_double(f[2], e.start_min) || !parse_double(f[3], e.loc_lon) ||
            !parse_double(f[4], e.loc_lat) || !parse_double(f[5], e.duration_min))
            throw std::runtime_error(path + ":" + std::to_string(reader.line_no()) + ": malformed STL row");
        e.taxi_id.assign(f[0]);
        e.local_date = parse_date(std::string(f[1]));
        e.canonical = true;
        out.push_back(std::move(e));
    }
    return out;
}

// --- shift classes: taxi_id,class,days_observed ------------------------------

inline void save_shifts_csv(const std::string& path, const std::map<std::string, std::pair<ShiftClass, int>>& shifts) {
    CsvWriter w(path, "ids-shifts", 1, "taxi_id,class,days_observed");
    for (const auto& [taxi, sc] : shifts) w.stream() << taxi << ',' << shift_name(sc.first) << ',' << sc.second << "\n";
}

inline std::map<std::string, ShiftClass> load_shifts_csv(const std::string& path) {
    CsvReader reader(path);
    std::vector<std::string_view> f;
    if (!reader.read_header(f)) return {};
    std::map<std::string, ShiftClass> out;
    while (reader.next(f)) {
        if (f.size() != 3) throw std::runtime_error(path + ": malformed shift row");
        ShiftClass c = f[1] == "one_shift"   ? ShiftClass::OneShift
                       : f[1] == "two_shift" ? ShiftClass::TwoShift
                                             : ShiftClass::Unknown;
        out.emplace(std::string(f[0]), c);
    }
    return out;
}

// --- per-day feature CSVs ----------------------------------------------------

// fv.csv: taxi_id,date,v1..vN ; theta.csv: taxi_id,date,theta_1..theta_N
inline void save_daily_vectors_csv(const std::string& path, const std::string& kind, const std::string& col_prefix,
                                   const std::map<std::string, std::map<int, std::vector<double>>>& rows, int dim) {
    std::string header = "taxi_id,date";
    for (int i = 1; i <= dim; ++i) header += "," + col_prefix + std::to_string(i);
    CsvWriter w(path, kind, 1, header);
    for (const auto& [taxi, days] : rows)
        for (const auto& [day, vec] : days) {
            w.stream() << taxi << ',' << format_date(day);
            for (double v : vec) w.stream() << ',' << fmt_double(v);
            w.stream() << "\n";
        }
}

inline std::map<std::string, std::map<int, std::vector<double>>> load_daily_vectors_csv(const std::string& path) {
    CsvReader reader(path);
    std::vector<std::string_view> f;
    if (!reader.read_header(f)) return {};
    std::size_t dim = f.size() - 2;
    std::map<std::string, std::map<int, std::vector<double>>> out;
    while (reader.next(f)) {
        if (f.size() != dim + 2)
            throw std::runtime_error(path + ":" + std::to_string(reader.line_no()) + ": wrong column count");
        std::vector<double> vec(dim);
        for (std::size_t i = 0; i < dim; ++i)
            if (!parse_double(f[i + 2], vec[i]))
                throw std::runtime_error(path + ":" + std::to_string(reader.line_no()) + ": bad number");
        out[std::string(f[0])][parse_date(std::string(f[1]))] = std::move(vec);
    }
    return out;
}

// --- bags --------------------------------------------------------------------

inline void save_bags(const std::string& path, const std::vector<Bag>& bags, int feature_len) {
    TextDocWriter w(path, "ids_bags", 1);
    w.kv("feature_len", feature_len);
    w.kv("bags", static_cast<int>(bags.size()));
    for (const auto& b : bags) {
        w.raw("bag " + b.taxi_id);
        for (BehaviorKind kind : {BehaviorKind::Stl, BehaviorKind::Pu}) {
            const auto& inst = b.instances(kind);
            w.raw(std::string("component ") + behavior_name(kind) + " " + std::to_string(inst.size()));
            for (const auto& ft : inst) {
                std::string line = "instance " + std::to_string(ft.window_start_day);
                for (double v : ft.values) line += " " + fmt_double(v);
                w.raw(line);
            }
        }
    }
}

inline std::vector<Bag> load_bags(const std::string& path, int* feature_len_out = nullptr) {
    TextDocReader r(path, "ids_bags", 1);
    r.expect("feature_len");
    int feature_len = static_cast<int>(r.integer());
    if (feature_len_out) *feature_len_out = feature_len;
    r.expect("bags");
    int n = static_cast<int>(r.integer());
    std::vector<Bag> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        r.expect("bag");
        Bag b;
        b.taxi_id = r.token();
        for (BehaviorKind kind : {BehaviorKind::Stl, BehaviorKind::Pu}) {
            r.expect("component");
            std::string kn = r.token();
            if (kn != behavior_name(kind)) throw std::runtime_error(path + ": unexpected component " + kn);
            int m = static_cast<int>(r.integer());
            for (int t = 0; t < m; ++t) {
                r.expect("instance");
                MspFeature ft;
                ft.kind = kind;
                ft.window_start_day = static_cast<int>(r.integer());
                ft.values = r.numbers(feature_len);
                (kind == BehaviorKind::Stl ? b.stl_instances : b.pu_instances).push_back(std::move(ft));
            }
        }
        out.push_back(std::move(b));
    }
    return out;
}

// --- split / scores / metrics -------------------------------------------------

inline void save_split_csv(const std::string& path, const std::map<std::string, std::string>& subset_by_taxi) {
    CsvWriter w(path, "ids-split", 1, "taxi_id,subset");
    for (const auto& [taxi, subset] : subset_by_taxi) w.stream() << taxi << ',' << subset << "\n";
}

inline std::map<std::string, std::string> load_split_csv(const std::string& path) {
    CsvReader reader(path);
    std::vector<std::string_view> f;
    if (!reader.read_header(f)) return {};
    std::map<std::string, std::string> out;
    while (reader.next(f)) {
        if (f.size() != 2) throw std::runtime_error(path + ": malformed split row");
        out.emplace(std::string(f[0]), std::string(f[1]));
    }
    return out;
}

inline void save_scores_csv(const std::string& path, const std::vector<ScoredTaxi>& scores) {
    CsvWriter w(path, "ids-scores", 1, "taxi_id,score");
    for (const auto& s : scores) w.stream() << s.taxi_id << ',' << fmt_double(s.score) << "\n";
}

inline std::vector<ScoredTaxi> load_scores_csv(const std::string& path) {
    CsvReader reader(path);
    std::vector<std::string_view> f;
    if (!reader.read_header(f)) return {};
    std::vector<ScoredTaxi> out;
    while (reader.next(f)) {
        ScoredTaxi s;
        if (f.size() != 2 || !parse_double(f[1], s.score))
            throw std::runtime_error(path + ":" + std::to_string(reader.line_no()) + ": malformed score row");
        s.taxi_id.assign(f[0]);
        out.push_back(std::move(s));
    }
    return out;
}

inline void save_metrics(const std::string& path, double auc, double ap, long n_pos, long n_neg) {
    std::ofstream out(path, std::ios::binary);
    out << "auc=" << fmt_double(auc) << " ap=" << fmt_double(ap) << " n_pos=" << n_pos << " n_neg=" << n_neg << "\n";
}

inline void save_ranked_csv(const std::string& path, const std::vector<ScoredTaxi>& ranked) {
    CsvWriter w(path, "ids-ranked", 1, "rank,taxi_id,score");
    for (std::size_t i = 0; i < ranked.size(); ++i)
        w.stream() << (i + 1) << ',' << ranked[i].taxi_id << ',' << fmt_double(ranked[i].score) << "\n";
}

// --- run manifest --------------------------------------------------------------

// One line per stage run: stage, config hash, seed, input hashes, outputs.
// Together with the config these pin down a reproducible run.
inline void manifest_append(const std::string& manifest_path, const std::string& stage, std::uint64_t config_hash,
                            std::uint64_t seed, const std::vector<std::string>& inputs,
                            const std::vector<std::string>& outputs) {
    std::ofstream out(manifest_path, std::ios::binary | std::ios::app);
    out << "stage=" << stage << " config_hash=" << config_hash << " seed=" << seed;
    for (const auto& in : inputs) out << " in=" << std::filesystem::path(in).filename().string() << ":" << hash_file(in);
    for (const auto& o : outputs) out << " out=" << std::filesystem::path(o).filename().string();
    out << "\n";
}

}  // namespace ids
