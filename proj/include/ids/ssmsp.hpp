#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ids/numeric.hpp"

namespace ids {

enum class BehaviorKind : int { Stl = 0, Pu = 1 };

inline const char* behavior_name(BehaviorKind k) { return k == BehaviorKind::Stl ? "stl" : "pu"; }

// One taxi-day: either behavior vector may be absent.
struct DailyBehavior {
    int day = 0;  // civil day index
    std::optional<std::vector<double>> f_stl;
    std::optional<std::vector<double>> f_pu;

    const std::optional<std::vector<double>>& get(BehaviorKind k) const {
        return k == BehaviorKind::Stl ? f_stl : f_pu;
    }
};

// Cosine distance, in [0, 2]. Callers must not pass zero vectors.
inline double cosine_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double na = l2_norm(a), nb = l2_norm(b);
    double c = dot(a, b) / (na * nb);
    c = std::clamp(c, -1.0, 1.0);
    return 1.0 - c;
}

struct SsPoint {
    int start_day = 0;  // the pair covers (start_day, start_day + 1)
    double s = 0.0;
};

struct SsSeries {
    std::vector<SsPoint> points;
    int skipped_absent = 0;
    int skipped_zero_norm = 0;
};

// Day-to-day behavior change: cosine distance between calendar-consecutive
// days. Pairs with an absent or zero-norm side are skipped and counted.
inline SsSeries self_similarity_series(const std::vector<DailyBehavior>& days, BehaviorKind kind) {
    SsSeries out;
    std::map<int, const std::vector<double>*> by_day;
    for (const auto& d : days) {
        const auto& f = d.get(kind);
        if (f.has_value()) by_day[d.day] = &*f;
    }
    if (by_day.empty()) return out;
    int first = by_day.begin()->first;
    int last = by_day.rbegin()->first;
    for (int day = first; day < last; ++day) {
        auto a = by_day.find(day);
        auto b = by_day.find(day + 1);
        if (a == by_day.end() || b == by_day.end()) {
            ++out.skipped_absent;
            continue;
        }
        if (l2_norm(*a->second) == 0.0 || l2_norm(*b->second) == 0.0) {
            ++out.skipped_zero_norm;
            continue;
        }
        out.points.push_back(SsPoint{day, cosine_distance(*a->second, *b->second)});
    }
    return out;
}

// Max and min of the change values whose pair start-day falls in
// [bucket_start, bucket_start + bucket_len). An empty bucket reads as
// "no observed change": (0, 0).
inline std::pair<double, double> pool_bucket(const std::vector<SsPoint>& series, int bucket_start, int bucket_len) {
    double mx = 0.0, mn = 0.0;
    bool any = false;
    for (const auto& p : series) {
        if (p.start_day < bucket_start || p.start_day >= bucket_start + bucket_len) continue;
        if (!any) {
            mx = mn = p.s;
            any = true;
        } else {
            mx = std::max(mx, p.s);
            mn = std::min(mn, p.s);
        }
    }
    return {mx, mn};
}

// s^c: per-bucket max/min at every scale, [max_1..max_B, min_1..min_B].
struct MspFeature {
    std::vector<double> values;
    int window_start_day = 0;
    BehaviorKind kind = BehaviorKind::Stl;
    bool missing = false;
};

inline int msp_bucket_count(const std::vector<int>& scales) {
    int b = 0;
    for (int s : scales) b += s;
    return b;
}

// Buckets are enumerated scale-major, left to right; boundaries are calendar
// positions within the window, so absent days do not shift them. A window
// with fewer than two available days is marked missing (all-zero values).
inline MspFeature msp_feature(const std::vector<DailyBehavior>& days, const SsSeries& series, int window_start_day,
                              int window_len, const std::vector<int>& scales, BehaviorKind kind) {
    if (scales.empty()) throw std::invalid_argument("msp_feature: no scales");
    for (int s : scales)
        if (s < 1 || window_len % s != 0)
            throw std::invalid_argument("msp_feature: window length not divisible by scale " + std::to_string(s));

    MspFeature f;
    f.window_start_day = window_start_day;
    f.kind = kind;
    const int b = msp_bucket_count(scales);
    f.values.assign(static_cast<std::size_t>(2) * b, 0.0);

    int available = 0;
    for (const auto& d : days)
        if (d.day >= window_start_day && d.day < window_start_day + window_len && d.get(kind).has_value()) ++available;
    if (available < 2) {
        f.missing = true;
        return f;
    }

    int idx = 0;
    for (int s : scales) {
        int blen = window_len / s;
        for (int bi = 0; bi < s; ++bi) {
            auto [mx, mn] = pool_bucket(series.points, window_start_day + bi * blen, blen);
            f.values[idx] = mx;
            f.values[static_cast<std::size_t>(b) + idx] = mn;
            ++idx;
        }
    }
    return f;
}

// The MC-MIL super feature set X_i = {S_i^k} for one taxi.
struct Bag {
    std::string taxi_id;
    std::optional<int> label;
    std::vector<MspFeature> stl_instances;
    std::vector<MspFeature> pu_instances;

    const std::vector<MspFeature>& instances(BehaviorKind k) const {
        return k == BehaviorKind::Stl ? stl_instances : pu_instances;
    }
};

struct BagBuildOptions {
    int window_len = 16;
    int step = 4;
    int range_days = 30;  // <= 0: use each taxi's full observed span
    std::vector<int> scales{1, 2, 4};
};

struct BagBuildReport {
    int taxis_too_short = 0;
    int pairs_skipped_zero_norm = 0;
};

// One bag per taxi: sliding windows (start offsets 0, step, 2*step, ... while
// offset + window_len <= T) yield one instance per behavior kind; missing
// features are omitted. Taxis spanning fewer than window_len days produce no
// bag. Deterministic: taxis are processed in id order.
inline std::vector<Bag> build_bags(const std::map<std::string, std::vector<DailyBehavior>>& per_taxi,
                                   const BagBuildOptions& opts, BagBuildReport* report = nullptr) {
    if (opts.window_len < 1 || opts.step < 1) throw std::invalid_argument("build_bags: bad window/step");
    std::vector<Bag> bags;
    for (const auto& [taxi_id, days_in] : per_taxi) {
        std::vector<DailyBehavior> days = days_in;
        std::sort(days.begin(), days.end(), [](const DailyBehavior& a, const DailyBehavior& b) { return a.day < b.day; });
        if (days.empty()) {
            if (report) ++report->taxis_too_short;
            continue;
        }
        int span = days.back().day - days.front().day + 1;
        int t_range = opts.range_days > 0 ? std::min(opts.range_days, span) : span;
        if (span < opts.window_len || t_range < opts.window_len) {
            if (report) ++report->taxis_too_short;
            continue;
        }
        Bag bag;
        bag.taxi_id = taxi_id;
        for (BehaviorKind kind : {BehaviorKind::Stl, BehaviorKind::Pu}) {
            SsSeries series = self_similarity_series(days, kind);
            if (report) report->pairs_skipped_zero_norm += series.skipped_zero_norm;
            for (int off = 0; off + opts.window_len <= t_range; off += opts.step) {
                MspFeature f = msp_feature(days, series, days.front().day + off, opts.window_len, opts.scales, kind);
                if (f.missing) continue;
                if (kind == BehaviorKind::Stl)
                    bag.stl_instances.push_back(std::move(f));
                else
                    bag.pu_instances.push_back(std::move(f));
            }
        }
        bags.push_back(std::move(bag));
    }
    return bags;
}

}  // namespace ids
