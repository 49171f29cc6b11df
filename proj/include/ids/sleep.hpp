#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ids/geo.hpp"
#include "ids/ingest.hpp"

namespace ids {

struct SleepEpisode {
    std::string taxi_id;
    int local_date = 0;
    double loc_lon = 0.0;   // episode centroid
    double loc_lat = 0.0;
    double start_min = 0.0; // minutes since local midnight
    double duration_min = 0.0;
    bool canonical = false; // longest episode of the day
};

struct SleepParams {
    double stationary_radius_m = 200.0;
    double min_sleep_minutes = 240.0;
};

// x^STL = [start time, lon, lat, duration]
using StlVec = std::array<double, 4>;
inline constexpr int kStlDim = 4;

inline StlVec stl_vector(const SleepEpisode& e) {
    return StlVec{e.start_min, e.loc_lon, e.loc_lat, e.duration_min};
}

namespace detail {

// Largest j such that the run anchored at i stays stationary: each next point
// must lie within `radius` of the centroid of the points accepted so far.
// The run also must not contain a service event and must not pass `event_stop`
// (first event ts >= ts of anchor).
inline int extend_stationary(const std::vector<GpsPoint>& pts, int i, double radius, std::int64_t event_stop) {
    double clon = pts[i].lon, clat = pts[i].lat;
    int count = 1;
    int j = i;
    while (j + 1 < static_cast<int>(pts.size())) {
        const GpsPoint& p = pts[static_cast<std::size_t>(j) + 1];
        if (p.ts > event_stop) break;  // an event would fall inside [ts_i, ts_{j+1}]
        if (distance_m(p.lon, p.lat, clon, clat) > radius) break;
        clon += (p.lon - clon) / (count + 1);
        clat += (p.lat - clat) / (count + 1);
        ++count;
        ++j;
    }
    return j;
}

}  // namespace detail

// Detects maximal stationary, event-free intervals of at least
// min_sleep_minutes. Maximality is interval containment over the candidate
// runs; overlapping survivors are resolved left to right so episodes within a
// day are disjoint. Chronological order; the longest episode is canonical.
inline std::vector<SleepEpisode> detect_sleep_episodes(const TaxiDay& day, const SleepParams& params,
                                                       std::int64_t utc_offset_s) {
    const auto& pts = day.gps;
    const int n = static_cast<int>(pts.size());
    if (n < 2) return {};

    std::vector<std::int64_t> event_ts;
    event_ts.reserve(day.events.size());
    for (const auto& e : day.events) event_ts.push_back(e.ts);
    std::sort(event_ts.begin(), event_ts.end());

    // Candidate per anchor: [i, jmax(i)]. A candidate is maximal iff no
    // earlier anchor reaches at least as far.
    struct Candidate {
        int i, j;
    };
    std::vector<Candidate> candidates;
    int best_j = -1;
    std::size_t ev_idx = 0;
    for (int i = 0; i < n; ++i) {
        while (ev_idx < event_ts.size() && event_ts[ev_idx] < pts[i].ts) ++ev_idx;
        // Event exactly at the anchor timestamp intersects even the singleton.
        if (ev_idx < event_ts.size() && event_ts[ev_idx] == pts[i].ts) continue;
        std::int64_t stop = ev_idx < event_ts.size() ? event_ts[ev_idx] : std::numeric_limits<std::int64_t>::max();
        int j = detail::extend_stationary(pts, i, params.stationary_radius_m, stop);
        if (j > best_j) {
            candidates.push_back({i, j});
            best_j = j;
        }
    }

    std::vector<SleepEpisode> episodes;
    int last_end = -1;
    for (const auto& c : candidates) {
        double duration_min = static_cast<double>(pts[c.j].ts - pts[c.i].ts) / 60.0;
        if (duration_min < params.min_sleep_minutes) continue;
        if (c.i <= last_end) continue;  // overlap with an earlier episode
        SleepEpisode ep;
        ep.taxi_id = day.taxi_id;
        ep.local_date = day.local_date;
        KahanSum slon, slat;
        for (int t = c.i; t <= c.j; ++t) {
            slon.add(pts[t].lon);
            slat.add(pts[t].lat);
        }
        ep.loc_lon = slon.sum / (c.j - c.i + 1);
        ep.loc_lat = slat.sum / (c.j - c.i + 1);
        ep.start_min = minutes_since_midnight(pts[c.i].ts, utc_offset_s);
        ep.duration_min = duration_min;
        episodes.push_back(std::move(ep));
        last_end = c.j;
    }

    int best = -1;
    double best_dur = -1.0;
    for (int k = 0; k < static_cast<int>(episodes.size()); ++k) {
        if (episodes[k].duration_min > best_dur) {
            best_dur = episodes[k].duration_min;
            best = k;
        }
    }
    if (best >= 0) episodes[best].canonical = true;
    return episodes;
}

// Minutes of the day spent outside detected sleep: GPS time span minus the
// qualifying episode durations.
inline double active_minutes(const TaxiDay& day, const std::vector<SleepEpisode>& episodes) {
    if (day.gps.size() < 2) return 0.0;
    double span = static_cast<double>(day.gps.back().ts - day.gps.front().ts) / 60.0;
    double asleep = 0.0;
    for (const auto& e : episodes) asleep += e.duration_min;
    return std::max(0.0, span - asleep);
}

// --- standardization --------------------------------------------------------

struct StandardizationStats {
    std::vector<double> mean;
    std::vector<double> stddev;  // floored; a constant dimension gets scale 1

    int dim() const { return static_cast<int>(mean.size()); }
};

inline StandardizationStats fit_standardization(const DataMatrix& data) {
    if (data.rows == 0) throw std::invalid_argument("fit_standardization: no data");
    StandardizationStats s;
    s.mean.assign(data.cols, 0.0);
    s.stddev.assign(data.cols, 0.0);
    for (int d = 0; d < data.cols; ++d) {
        KahanSum acc;
        for (int i = 0; i < data.rows; ++i) acc.add(data.at(i, d));
        s.mean[d] = acc.sum / data.rows;
        KahanSum var;
        for (int i = 0; i < data.rows; ++i) {
            double diff = data.at(i, d) - s.mean[d];
            var.add(diff * diff);
        }
        double sd = std::sqrt(var.sum / data.rows);
        s.stddev[d] = sd < 1e-9 ? 1.0 : sd;
    }
    return s;
}

inline void standardize_inplace(const StandardizationStats& s, double* x) {
    for (int d = 0; d < s.dim(); ++d) x[d] = (x[d] - s.mean[d]) / s.stddev[d];
}

inline void unstandardize_inplace(const StandardizationStats& s, double* x) {
    for (int d = 0; d < s.dim(); ++d) x[d] = x[d] * s.stddev[d] + s.mean[d];
}

inline DataMatrix standardize_all(const StandardizationStats& s, DataMatrix data) {
    for (int i = 0; i < data.rows; ++i) standardize_inplace(s, data.row(i));
    return data;
}

}  // namespace ids
