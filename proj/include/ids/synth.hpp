#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "ids/csv.hpp"
#include "ids/dates.hpp"
#include "ids/geo.hpp"
#include "ids/rng.hpp"

namespace ids {

struct Hotspot {
    double lon = 0.0;
    double lat = 0.0;
    double sigma_m = 400.0;
    double weight = 1.0;
};

struct DriverPersona {
    double home_lon = 0.0;
    double home_lat = 0.0;
    double home_jitter_m = 20.0;
    double sleep_start_mean_min = 120.0;  // minutes after local midnight
    double sleep_start_std_min = 20.0;
    double sleep_dur_mean_min = 450.0;
    double sleep_dur_std_min = 30.0;
    std::vector<Hotspot> hotspots;  // weights sum to 1
    double pu_rate = 18.0;          // expected pickups per day
};

struct SynthConfig {
    int n_taxis = 50;
    int n_days = 30;
    double ids_fraction = 0.1;
    int substitution_duration_days = 14;
    std::uint64_t seed = 1;
    int utc_offset_hours = 8;
    int start_year = 2015, start_month = 3, start_day = 2;

    // persona priors
    double city_center_lon = 116.40;
    double city_center_lat = 39.90;
    double city_half_extent_m = 15000.0;
    int hotspots_per_persona = 3;
    double hotspot_sigma_m = 400.0;
    double pu_rate_min = 12.0, pu_rate_max = 24.0;
    double sleep_start_min = 30.0, sleep_start_max = 280.0;
    double sleep_dur_min = 370.0, sleep_dur_max = 560.0;

    // separation of the substitute persona from the original
    double min_home_separation_m = 5000.0;
    double min_hotspot_separation_m = 3000.0;

    // trace shape
    int gps_interval_s = 600;
    double roam_sigma_m = 4000.0;
    double low_precision_fraction = 0.0;  // fraction of rows written with 5 decimals
};

struct FleetLabel {
    std::string taxi_id;
    int label = 0;
    int event_day = -1;  // day offset of the substitution start, -1 for negatives
};

namespace detail {

inline void offset_lonlat(double lon0, double lat0, double dx_m, double dy_m, double& lon, double& lat) {
    lat = lat0 + dy_m / meters_per_deg_lat();
    lon = lon0 + dx_m / meters_per_deg_lon(lat0);
}

inline DriverPersona sample_persona(const SynthConfig& cfg, Rng& rng) {
    DriverPersona p;
    offset_lonlat(cfg.city_center_lon, cfg.city_center_lat, rng.uniform(-cfg.city_half_extent_m, cfg.city_half_extent_m),
                  rng.uniform(-cfg.city_half_extent_m, cfg.city_half_extent_m), p.home_lon, p.home_lat);
    p.sleep_start_mean_min = rng.uniform(cfg.sleep_start_min, cfg.sleep_start_max);
    p.sleep_start_std_min = rng.uniform(2.0, 5.0);
    p.sleep_dur_mean_min = rng.uniform(cfg.sleep_dur_min, cfg.sleep_dur_max);
    p.sleep_dur_std_min = rng.uniform(3.0, 7.0);
    p.pu_rate = rng.uniform(cfg.pu_rate_min, cfg.pu_rate_max);
    p.hotspots.resize(cfg.hotspots_per_persona);
    double wsum = 0.0;
    for (auto& h : p.hotspots) {
        offset_lonlat(cfg.city_center_lon, cfg.city_center_lat,
                      rng.uniform(-cfg.city_half_extent_m, cfg.city_half_extent_m),
                      rng.uniform(-cfg.city_half_extent_m, cfg.city_half_extent_m), h.lon, h.lat);
        h.sigma_m = cfg.hotspot_sigma_m;
        h.weight = 0.2 + rng.uniform();
        wsum += h.weight;
    }
    for (auto& h : p.hotspots) h.weight /= wsum;
    return p;
}

inline double hotspot_min_distance(const DriverPersona& a, const DriverPersona& b) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ha : a.hotspots)
        for (const auto& hb : b.hotspots) best = std::min(best, distance_m(ha.lon, ha.lat, hb.lon, hb.lat));
    return best;
}

// A substitute persona kept well apart from the original: distant home and
// disjoint hotspot supports, so a planted substitution is detectable.
inline DriverPersona sample_separated_persona(const SynthConfig& cfg, const DriverPersona& base, Rng& rng) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        DriverPersona cand = sample_persona(cfg, rng);
        if (distance_m(cand.home_lon, cand.home_lat, base.home_lon, base.home_lat) < cfg.min_home_separation_m)
            continue;
        if (hotspot_min_distance(cand, base) < cfg.min_hotspot_separation_m) continue;
        return cand;
    }
    // Force separation by translating the base home outside the city box.
    DriverPersona cand = sample_persona(cfg, rng);
    offset_lonlat(base.home_lon, base.home_lat, 2.5 * cfg.city_half_extent_m, 2.5 * cfg.city_half_extent_m,
                  cand.home_lon, cand.home_lat);
    for (auto& h : cand.hotspots)
        offset_lonlat(h.lon, h.lat, 2.5 * cfg.city_half_extent_m, 2.5 * cfg.city_half_extent_m, h.lon, h.lat);
    return cand;
}

inline void sample_hotspot_point(const DriverPersona& p, Rng& rng, double& lon, double& lat) {
    double r = rng.uniform();
    double acc = 0.0;
    const Hotspot* pick = &p.hotspots.back();
    for (const auto& h : p.hotspots) {
        acc += h.weight;
        if (r < acc) {
            pick = &h;
            break;
        }
    }
    offset_lonlat(pick->lon, pick->lat, rng.normal(0.0, pick->sigma_m), rng.normal(0.0, pick->sigma_m), lon, lat);
}

}  // namespace detail

// Seeded synthetic fleet: emits the ingest trace/trip CSV formats plus
// labels.csv (taxi_id,label,event_day). Taxis chosen for substitution switch
// to an independently drawn persona for substitution_duration_days starting
// at a random day; exactly round(ids_fraction * n_taxis) taxis are positive.
inline std::vector<FleetLabel> generate_fleet(const SynthConfig& cfg, const std::string& trace_path,
                                              const std::string& trips_path, const std::string& labels_path) {
    if (cfg.ids_fraction < 0.0 || cfg.ids_fraction > 1.0)
        throw std::invalid_argument("generate_fleet: ids_fraction must be in [0,1]");
    const std::int64_t offset_s = static_cast<std::int64_t>(cfg.utc_offset_hours) * 3600;
    const int day0 = days_from_civil(cfg.start_year, cfg.start_month, cfg.start_day);

    CsvWriter trace(trace_path, "ids-trace", 1, "taxi_id,lon,lat,ts");
    CsvWriter trips(trips_path, "ids-trips", 1, "taxi_id,o_ts,o_lon,o_lat,d_ts,d_lon,d_lat");
    CsvWriter labels(labels_path, "ids-labels", 1, "taxi_id,label,event_day");

    // positive taxis: deterministic count, seeded selection
    int n_pos = static_cast<int>(std::llround(cfg.ids_fraction * cfg.n_taxis));
    std::vector<int> order(cfg.n_taxis);
    for (int i = 0; i < cfg.n_taxis; ++i) order[i] = i;
    Rng master(mix_seed(cfg.seed, 0x5e1ec7));
    master.shuffle(order);
    std::vector<char> is_pos(cfg.n_taxis, 0);
    for (int i = 0; i < n_pos; ++i) is_pos[order[i]] = 1;

    std::vector<FleetLabel> out;
    out.reserve(cfg.n_taxis);

    struct TracePoint {
        std::int64_t ts;
        double lon, lat;
    };

    for (int taxi = 0; taxi < cfg.n_taxis; ++taxi) {
        char idbuf[16];
        std::snprintf(idbuf, sizeof(idbuf), "T%05d", taxi);
        std::string taxi_id = idbuf;
        Rng rng(mix_seed(cfg.seed, 0x7a31, static_cast<std::uint64_t>(taxi)));

        DriverPersona base = detail::sample_persona(cfg, rng);
        DriverPersona sub;
        FleetLabel label;
        label.taxi_id = taxi_id;
        if (is_pos[taxi]) {
            sub = detail::sample_separated_persona(cfg, base, rng);
            label.label = 1;
            // keep the substituted stretch inside the observed horizon when it fits
            int lo = std::min(4, std::max(1, cfg.n_days - 2));
            int hi = std::max(lo, cfg.n_days - cfg.substitution_duration_days - 2);
            hi = std::min(hi, std::max(1, cfg.n_days - 3));
            label.event_day = rng.uniform_int(lo, hi);
        }
        out.push_back(label);

        for (int day = 0; day < cfg.n_days; ++day) {
            const DriverPersona& p =
                (label.label == 1 && day >= label.event_day && day < label.event_day + cfg.substitution_duration_days)
                    ? sub
                    : base;
            const std::int64_t midnight = day_start_ts(day0 + day, offset_s);

            double sleep_start = std::clamp(rng.normal(p.sleep_start_mean_min, p.sleep_start_std_min), 10.0, 320.0);
            double sleep_dur = std::clamp(rng.normal(p.sleep_dur_mean_min, p.sleep_dur_std_min), 330.0, 620.0);
            double sleep_end = sleep_start + sleep_dur;

            std::vector<TracePoint> pts;
            auto home_point = [&](double t) {
                TracePoint tp;
                tp.ts = midnight + static_cast<std::int64_t>(t * 60.0);
                detail::offset_lonlat(p.home_lon, p.home_lat, rng.normal(0.0, p.home_jitter_m),
                                      rng.normal(0.0, p.home_jitter_m), tp.lon, tp.lat);
                return tp;
            };
            for (double t = 0.0; t < 1440.0; t += cfg.gps_interval_s / 60.0) {
                if (t >= sleep_start && t <= sleep_end) {
                    pts.push_back(home_point(t));
                } else {
                    TracePoint tp;
                    tp.ts = midnight + static_cast<std::int64_t>(t * 60.0);
                    detail::sample_hotspot_point(p, rng, tp.lon, tp.lat);
                    double dx = rng.normal(0.0, cfg.roam_sigma_m), dy = rng.normal(0.0, cfg.roam_sigma_m);
                    detail::offset_lonlat(tp.lon, tp.lat, dx, dy, tp.lon, tp.lat);
                    pts.push_back(tp);
                }
            }
            // the vehicle parks and leaves at the exact episode boundaries
            pts.push_back(home_point(sleep_start));
            pts.push_back(home_point(sleep_end));

            // trips start after sleep, end before midnight
            int n_trips = rng.poisson(p.pu_rate);
            double trip_lo = sleep_end + 30.0, trip_hi = 1380.0;
            struct Trip {
                std::int64_t o_ts, d_ts;
                double o_lon, o_lat, d_lon, d_lat;
            };
            std::vector<Trip> day_trips;
            for (int tr = 0; tr < n_trips && trip_lo < trip_hi; ++tr) {
                double t_pu = rng.uniform(trip_lo, trip_hi);
                double dur = rng.uniform(8.0, 40.0);
                if (t_pu + dur > 1435.0) continue;
                Trip trip;
                trip.o_ts = midnight + static_cast<std::int64_t>(t_pu * 60.0);
                trip.d_ts = midnight + static_cast<std::int64_t>((t_pu + dur) * 60.0);
                detail::sample_hotspot_point(p, rng, trip.o_lon, trip.o_lat);
                detail::offset_lonlat(trip.o_lon, trip.o_lat, rng.normal(0.0, 3000.0), rng.normal(0.0, 3000.0),
                                      trip.d_lon, trip.d_lat);
                day_trips.push_back(trip);
                // the taxi is at the endpoints when service happens
                pts.push_back(TracePoint{trip.o_ts, trip.o_lon, trip.o_lat});
                pts.push_back(TracePoint{trip.d_ts, trip.d_lon, trip.d_lat});
            }
            std::sort(day_trips.begin(), day_trips.end(), [](const Trip& a, const Trip& b) { return a.o_ts < b.o_ts; });
            std::sort(pts.begin(), pts.end(), [](const TracePoint& a, const TracePoint& b) { return a.ts < b.ts; });

            for (const auto& tp : pts) {
                int digits = (cfg.low_precision_fraction > 0.0 && rng.uniform() < cfg.low_precision_fraction) ? 5 : 6;
                trace.stream() << taxi_id << ',' << fmt_fixed(tp.lon, digits) << ',' << fmt_fixed(tp.lat, digits) << ','
                               << tp.ts << "\n";
            }
            for (const auto& tr : day_trips) {
                trips.stream() << taxi_id << ',' << tr.o_ts << ',' << fmt_fixed(tr.o_lon, 6) << ','
                               << fmt_fixed(tr.o_lat, 6) << ',' << tr.d_ts << ',' << fmt_fixed(tr.d_lon, 6) << ','
                               << fmt_fixed(tr.d_lat, 6) << "\n";
            }
        }
    }

    for (const auto& l : out)
        labels.stream() << l.taxi_id << ',' << l.label << ',' << l.event_day << "\n";
    return out;
}

inline std::vector<FleetLabel> load_labels_csv(const std::string& path) {
    CsvReader reader(path);
    std::vector<std::string_view> f;
    if (!reader.read_header(f)) return {};
    std::vector<FleetLabel> out;
    while (reader.next(f)) {
        FleetLabel l;
        std::int64_t lab, day;
        if (f.size() != 3 || !parse_i64(f[1], lab) || !parse_i64(f[2], day))
            throw std::runtime_error(path + ":" + std::to_string(reader.line_no()) + ": malformed label row");
        l.taxi_id.assign(f[0]);
        l.label = static_cast<int>(lab);
        l.event_day = static_cast<int>(day);
        out.push_back(std::move(l));
    }
    return out;
}

}  // namespace ids
