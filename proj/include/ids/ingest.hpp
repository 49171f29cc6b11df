#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ids/csv.hpp"
#include "ids/dates.hpp"
#include "ids/numeric.hpp"

namespace ids {

enum class EventKind : int { PickUp = 0, DropOff = 1 };

struct GpsPoint {
    std::string taxi_id;
    double lon = 0.0;
    double lat = 0.0;
    std::int64_t ts = 0;
    // Decimal digits of the lon/lat source text; -1 when unknown.
    int lon_decimals = -1;
    int lat_decimals = -1;
};

struct ServiceEvent {
    std::string taxi_id;
    EventKind kind = EventKind::PickUp;
    double lon = 0.0;
    double lat = 0.0;
    std::int64_t ts = 0;
};

// A taximeter event whose coordinates are not yet known.
struct RawEvent {
    std::string taxi_id;
    EventKind kind = EventKind::PickUp;
    std::int64_t ts = 0;
};

struct TripRecord {
    std::string taxi_id;
    std::int64_t origin_ts = 0;
    double origin_lon = 0.0;
    double origin_lat = 0.0;
    std::int64_t dest_ts = 0;
    double dest_lon = 0.0;
    double dest_lat = 0.0;
};

enum class ShiftClass : int { OneShift = 0, TwoShift = 1, Unknown = 2 };

inline const char* shift_name(ShiftClass c) {
    switch (c) {
        case ShiftClass::OneShift: return "one_shift";
        case ShiftClass::TwoShift: return "two_shift";
        default: return "unknown";
    }
}

struct TaxiDay {
    std::string taxi_id;
    int local_date = 0;  // civil day index of the configured local offset
    std::vector<GpsPoint> gps;        // sorted by ts
    std::vector<ServiceEvent> events; // sorted by ts
    ShiftClass shift = ShiftClass::Unknown;
};

struct IngestReport {
    std::int64_t trace_rows_read = 0;
    std::int64_t trace_rows_malformed = 0;
    std::int64_t trace_rows_low_precision = 0;
    std::int64_t trip_rows_read = 0;
    std::int64_t trip_rows_malformed = 0;
    std::int64_t trips_rejected = 0;
    std::int64_t events_dropped_no_trace = 0;
    std::int64_t taxis_one_shift = 0;
    std::int64_t taxis_two_shift = 0;
    std::int64_t taxis_unknown_shift = 0;
    std::vector<long> malformed_lines;  // first few, with line numbers

    void note_malformed(long line_no) {
        if (malformed_lines.size() < 20) malformed_lines.push_back(line_no);
    }

    std::string to_text() const {
        std::string s;
        s += "trace_rows_read " + std::to_string(trace_rows_read) + "\n";
        s += "trace_rows_malformed " + std::to_string(trace_rows_malformed) + "\n";
        s += "trace_rows_low_precision " + std::to_string(trace_rows_low_precision) + "\n";
        s += "trip_rows_read " + std::to_string(trip_rows_read) + "\n";
        s += "trip_rows_malformed " + std::to_string(trip_rows_malformed) + "\n";
        s += "trips_rejected " + std::to_string(trips_rejected) + "\n";
        s += "events_dropped_no_trace " + std::to_string(events_dropped_no_trace) + "\n";
        if (!malformed_lines.empty()) {
            s += "malformed_at_lines";
            for (long l : malformed_lines) s += " " + std::to_string(l);
            s += "\n";
        }
        return s;
    }
};

// Keeps only points whose lon AND lat source text carry at least `min_digits`
// decimal digits. Order preserved; never fails.
inline std::vector<GpsPoint> filter_gps_precision(const std::vector<GpsPoint>& points, int min_digits = 6) {
    std::vector<GpsPoint> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        if (p.lon_decimals >= min_digits && p.lat_decimals >= min_digits) out.push_back(p);
    }
    return out;
}

// Assigns each raw event the coordinates of the GPS point nearest in time.
// Ties go to the earlier GPS point. Events with no trace are dropped and
// counted. `trace` must be sorted by ts and belong to the same taxi.
inline std::vector<ServiceEvent> match_service_events(const std::vector<GpsPoint>& trace,
                                                      const std::vector<RawEvent>& raw_events,
                                                      IngestReport* report = nullptr) {
    std::vector<ServiceEvent> out;
    out.reserve(raw_events.size());
    for (const auto& ev : raw_events) {
        if (trace.empty()) {
            if (report) ++report->events_dropped_no_trace;
            continue;
        }
        auto it = std::lower_bound(trace.begin(), trace.end(), ev.ts,
                                   [](const GpsPoint& p, std::int64_t t) { return p.ts < t; });
        const GpsPoint* best;
        if (it == trace.end()) {
            best = &trace.back();
        } else if (it == trace.begin()) {
            best = &*it;
        } else {
            const GpsPoint* prev = &*(it - 1);
            const GpsPoint* next = &*it;
            best = (ev.ts - prev->ts) <= (next->ts - ev.ts) ? prev : next;
        }
        out.push_back(ServiceEvent{ev.taxi_id, ev.kind, best->lon, best->lat, ev.ts});
    }
    return out;
}

// Expands each trip into one PU (origin) and one DO (destination) event.
// Trips violating origin_ts < dest_ts are rejected and counted.
inline std::vector<ServiceEvent> expand_trips(const std::vector<TripRecord>& trips, IngestReport* report = nullptr) {
    std::vector<ServiceEvent> out;
    out.reserve(trips.size() * 2);
    for (const auto& t : trips) {
        if (!(t.origin_ts < t.dest_ts)) {
            if (report) ++report->trips_rejected;
            continue;
        }
        out.push_back(ServiceEvent{t.taxi_id, EventKind::PickUp, t.origin_lon, t.origin_lat, t.origin_ts});
        out.push_back(ServiceEvent{t.taxi_id, EventKind::DropOff, t.dest_lon, t.dest_lat, t.dest_ts});
    }
    std::sort(out.begin(), out.end(), [](const ServiceEvent& a, const ServiceEvent& b) {
        if (a.taxi_id != b.taxi_id) return a.taxi_id < b.taxi_id;
        if (a.ts != b.ts) return a.ts < b.ts;
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    return out;
}

// Buckets one taxi's records into local civil days. Every record lands in
// exactly one day; days are returned date-sorted with sorted contents.
inline std::vector<TaxiDay> segment_days(const std::string& taxi_id, std::vector<GpsPoint> gps,
                                         std::vector<ServiceEvent> events, std::int64_t utc_offset_s) {
    std::sort(gps.begin(), gps.end(), [](const GpsPoint& a, const GpsPoint& b) { return a.ts < b.ts; });
    std::sort(events.begin(), events.end(), [](const ServiceEvent& a, const ServiceEvent& b) { return a.ts < b.ts; });
    std::map<int, TaxiDay> days;
    auto day_of = [&](std::int64_t ts) { return local_day(ts, utc_offset_s); };
    for (auto& p : gps) {
        TaxiDay& d = days[day_of(p.ts)];
        d.gps.push_back(std::move(p));
    }
    for (auto& e : events) {
        TaxiDay& d = days[day_of(e.ts)];
        d.events.push_back(std::move(e));
    }
    std::vector<TaxiDay> out;
    out.reserve(days.size());
    for (auto& [date, d] : days) {
        d.taxi_id = taxi_id;
        d.local_date = date;
        out.push_back(std::move(d));
    }
    return out;
}

inline constexpr double kOneShiftMaxActiveMin = 18.0 * 60.0;
inline constexpr double kTwoShiftMinActiveMin = 20.0 * 60.0;
inline constexpr int kMinObservedDaysForShift = 7;

// Median-day rule: one qualifying sleep episode and <= 18 h active means
// one-shift; >= 20 h active means two-shift; anything else is unknown.
inline ShiftClass classify_shift(const std::vector<int>& sleep_episodes_per_day,
                                 const std::vector<double>& active_minutes_per_day) {
    if (sleep_episodes_per_day.size() != active_minutes_per_day.size())
        throw std::invalid_argument("classify_shift: per-day vectors differ in length");
    if (static_cast<int>(sleep_episodes_per_day.size()) < kMinObservedDaysForShift) return ShiftClass::Unknown;
    int med_episodes = lower_median(sleep_episodes_per_day);
    double med_active = lower_median(active_minutes_per_day);
    if (med_episodes == 1 && med_active <= kOneShiftMaxActiveMin) return ShiftClass::OneShift;
    if (med_active >= kTwoShiftMinActiveMin) return ShiftClass::TwoShift;
    return ShiftClass::Unknown;
}

// --- CSV formats -----------------------------------------------------------

// trace CSV: taxi_id,lon,lat,ts
inline std::map<std::string, std::vector<GpsPoint>> load_trace_csv(const std::string& path, IngestReport& report) {
    CsvReader reader(path);
    std::vector<std::string_view> f;
    if (!reader.read_header(f)) return {};
    std::map<std::string, std::vector<GpsPoint>> by_taxi;
    while (reader.next(f)) {
        ++report.trace_rows_read;
        GpsPoint p;
        if (f.size() != 4 || !parse_double(f[1], p.lon) || !parse_double(f[2], p.lat) || !parse_i64(f[3], p.ts)) {
            ++report.trace_rows_malformed;
            report.note_malformed(reader.line_no());
            continue;
        }
        p.lon_decimals = decimal_digits(f[1]);
        p.lat_decimals = decimal_digits(f[2]);
        p.taxi_id.assign(f[0]);
        by_taxi[p.taxi_id].push_back(std::move(p));
    }
    for (auto& [id, pts] : by_taxi)
        std::sort(pts.begin(), pts.end(), [](const GpsPoint& a, const GpsPoint& b) { return a.ts < b.ts; });
    return by_taxi;
}

// trip CSV: taxi_id,o_ts,o_lon,o_lat,d_ts,d_lon,d_lat
inline std::map<std::string, std::vector<TripRecord>> load_trips_csv(const std::string& path, IngestReport& report) {
    CsvReader reader(path);
    std::vector<std::string_view> f;
    if (!reader.read_header(f)) return {};
    std::map<std::string, std::vector<TripRecord>> by_taxi;
    while (reader.next(f)) {
        ++report.trip_rows_read;
        TripRecord t;
        if (f.size() != 7 || !parse_i64(f[1], t.origin_ts) || !parse_double(f[2], t.origin_lon) ||
            !parse_double(f[3], t.origin_lat) || !parse_i64(f[4], t.dest_ts) || !parse_double(f[5], t.dest_lon) ||
            !parse_double(f[6], t.dest_lat)) {
            ++report.trip_rows_malformed;
            report.note_malformed(reader.line_no());
            continue;
        }
        t.taxi_id.assign(f[0]);
        by_taxi[t.taxi_id].push_back(std::move(t));
    }
    return by_taxi;
}

// event CSV: taxi_id,kind,lon,lat,ts with kind 0 = PU, 1 = DO
inline void save_events_csv(const std::string& path, const std::vector<ServiceEvent>& events) {
    CsvWriter w(path, "ids-events", 1, "taxi_id,kind,lon,lat,ts");
    for (const auto& e : events) {
        w.stream() << e.taxi_id << ',' << static_cast<int>(e.kind) << ',' << fmt_double(e.lon) << ','
                   << fmt_double(e.lat) << ',' << e.ts << "\n";
    }
}

inline std::map<std::string, std::vector<ServiceEvent>> load_events_csv(const std::string& path) {
    CsvReader reader(path);
    std::vector<std::string_view> f;
    if (!reader.read_header(f)) return {};
    std::map<std::string, std::vector<ServiceEvent>> by_taxi;
    while (reader.next(f)) {
        ServiceEvent e;
        std::int64_t kind;
        if (f.size() != 5 || !parse_i64(f[1], kind) || !parse_double(f[2], e.lon) || !parse_double(f[3], e.lat) ||
            !parse_i64(f[4], e.ts))
            throw std::runtime_error(path + ":" + std::to_string(reader.line_no()) + ": malformed event row");
        e.kind = kind == 0 ? EventKind::PickUp : EventKind::DropOff;
        e.taxi_id.assign(f[0]);
        by_taxi[e.taxi_id].push_back(std::move(e));
    }
    return by_taxi;
}

}  // namespace ids
