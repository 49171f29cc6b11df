#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "ids/artifacts.hpp"
#include "ids/config.hpp"
#include "ids/eval.hpp"
#include "ids/gmm_fv.hpp"
#include "ids/ingest.hpp"
#include "ids/mcmil.hpp"
#include "ids/pu_lda.hpp"
#include "ids/sleep.hpp"
#include "ids/ssmsp.hpp"
#include "ids/synth.hpp"

namespace ids::stages {

namespace fs = std::filesystem;

// --- synth -------------------------------------------------------------------

inline SynthConfig synth_config_from(const PipelineConfig& cfg) {
    SynthConfig sc;
    sc.n_taxis = cfg.synth_n_taxis;
    sc.n_days = cfg.synth_n_days;
    sc.ids_fraction = cfg.synth_ids_fraction;
    sc.substitution_duration_days = cfg.synth_substitution_days;
    sc.seed = cfg.seed;
    sc.utc_offset_hours = cfg.utc_offset_hours;
    sc.gps_interval_s = cfg.synth_gps_interval_s;
    sc.low_precision_fraction = cfg.synth_low_precision_fraction;
    sc.pu_rate_min = cfg.synth_pu_rate_min;
    sc.pu_rate_max = cfg.synth_pu_rate_max;
    sc.min_home_separation_m = cfg.synth_min_home_separation_m;
    sc.min_hotspot_separation_m = cfg.synth_min_hotspot_separation_m;
    sc.roam_sigma_m = cfg.synth_roam_sigma_m;
    sc.city_half_extent_m = cfg.synth_city_half_extent_m;
    sc.hotspot_sigma_m = cfg.synth_hotspot_sigma_m;
    return sc;
}

inline void run_synth(const PipelineConfig& cfg, const std::string& out_trace, const std::string& out_trips,
                      const std::string& out_labels, const std::string& manifest = "") {
    generate_fleet(synth_config_from(cfg), out_trace, out_trips, out_labels);
    if (!manifest.empty())
        manifest_append(manifest, "synth", cfg.hash(), cfg.seed, {}, {out_trace, out_trips, out_labels});
}

// --- ingest ------------------------------------------------------------------

namespace detail {

inline std::map<std::string, std::vector<GpsPoint>> load_filtered_trace(const std::string& path, IngestReport& rep) {
    auto by_taxi = load_trace_csv(path, rep);
    for (auto& [taxi, pts] : by_taxi) {
        std::size_t before = pts.size();
        pts = filter_gps_precision(pts);
        rep.trace_rows_low_precision += static_cast<std::int64_t>(before - pts.size());
    }
    return by_taxi;
}

}  // namespace detail

// Expands trips to PU/DO events and geo-locates each one at the GPS point
// nearest in time, as the pre-processing prescribes.
inline void run_ingest(const PipelineConfig& cfg, const std::string& trace_path, const std::string& trips_path,
                       const std::string& out_events, const std::string& out_report,
                       const std::string& manifest = "") {
    require_file(trace_path);
    require_file(trips_path);
    IngestReport rep;
    auto trace = detail::load_filtered_trace(trace_path, rep);
    auto trips = load_trips_csv(trips_path, rep);

    static const std::vector<GpsPoint> kEmptyTrace;
    std::vector<ServiceEvent> all_events;
    for (const auto& [taxi, taxi_trips] : trips) {
        auto expanded = expand_trips(taxi_trips, &rep);
        std::vector<RawEvent> raw;
        raw.reserve(expanded.size());
        for (const auto& e : expanded) raw.push_back(RawEvent{e.taxi_id, e.kind, e.ts});
        auto it = trace.find(taxi);
        const auto& taxi_trace = it == trace.end() ? kEmptyTrace : it->second;
        auto matched = match_service_events(taxi_trace, raw, &rep);
        all_events.insert(all_events.end(), matched.begin(), matched.end());
    }
    save_events_csv(out_events, all_events);
    std::ofstream rout(out_report, std::ios::binary);
    rout << rep.to_text();
    rout.close();
    if (!manifest.empty())
        manifest_append(manifest, "ingest", cfg.hash(), cfg.seed, {trace_path, trips_path}, {out_events, out_report});
}

// --- extract-stl ---------------------------------------------------------------

inline void run_extract_stl(const PipelineConfig& cfg, const std::string& trace_path, const std::string& events_path,
                            const std::string& out_stl, const std::string& out_shifts,
                            const std::string& report_append = "", const std::string& manifest = "") {
    require_file(trace_path);
    require_file(events_path);
    IngestReport rep;
    auto trace = detail::load_filtered_trace(trace_path, rep);
    auto events = load_events_csv(events_path);
    const std::int64_t offset = static_cast<std::int64_t>(cfg.utc_offset_hours) * 3600;
    SleepParams params{cfg.stationary_radius_m, cfg.min_sleep_minutes};

    std::vector<SleepEpisode> canonical;
    std::map<std::string, std::pair<ShiftClass, int>> shifts;
    long one_shift = 0, two_shift = 0, unknown = 0;
    for (auto& [taxi, pts] : trace) {
        auto ev_it = events.find(taxi);
        std::vector<ServiceEvent> evs = ev_it == events.end() ? std::vector<ServiceEvent>{} : ev_it->second;
        auto days = segment_days(taxi, std::move(pts), std::move(evs), offset);
        std::vector<int> episodes_per_day;
        std::vector<double> active_min;
        std::vector<std::vector<SleepEpisode>> per_day;
        per_day.reserve(days.size());
        for (const auto& day : days) {
            auto eps = detect_sleep_episodes(day, params, offset);
            episodes_per_day.push_back(static_cast<int>(eps.size()));
            active_min.push_back(active_minutes(day, eps));
            per_day.push_back(std::move(eps));
        }
        ShiftClass sc = classify_shift(episodes_per_day, active_min);
        shifts[taxi] = {sc, static_cast<int>(days.size())};
        if (sc == ShiftClass::OneShift) {
            ++one_shift;
            for (const auto& eps : per_day)
                for (const auto& e : eps)
                    if (e.canonical) canonical.push_back(e);
        } else if (sc == ShiftClass::TwoShift) {
            ++two_shift;
        } else {
            ++unknown;
        }
    }
    save_stl_csv(out_stl, canonical);
    save_shifts_csv(out_shifts, shifts);
    if (!report_append.empty()) {
        std::ofstream rout(report_append, std::ios::binary | std::ios::app);
        rout << "taxis_one_shift " << one_shift << "\n"
             << "taxis_two_shift " << two_shift << "\n"
             << "taxis_unknown_shift " << unknown << "\n";
    }
    if (!manifest.empty())
        manifest_append(manifest, "extract-stl", cfg.hash(), cfg.seed, {trace_path, events_path},
                        {out_stl, out_shifts});
}

// --- fit-gmm -------------------------------------------------------------------

inline void run_fit_gmm(const PipelineConfig& cfg, const std::string& stl_path, const std::string& out_model,
                        const std::string& manifest = "") {
    require_file(stl_path);
    auto episodes = load_stl_csv(stl_path);
    DataMatrix x(static_cast<int>(episodes.size()), kStlDim);
    for (std::size_t i = 0; i < episodes.size(); ++i) {
        StlVec v = stl_vector(episodes[i]);
        std::copy(v.begin(), v.end(), x.row(static_cast<int>(i)));
    }
    StandardizationStats stats = fit_standardization(x);
    x = standardize_all(stats, std::move(x));
    GmmFitOptions opts;
    opts.max_iters = cfg.gmm_max_iters;
    opts.tol = cfg.gmm_tol;
    opts.var_floor_rel = cfg.gmm_var_floor_rel;
    GmmModel model = fit_gmm(x, cfg.gmm_k, mix_seed(cfg.seed, hash_str("gmm")), opts);
    model.stats = stats;
    model.save(out_model);
    if (!manifest.empty()) manifest_append(manifest, "fit-gmm", cfg.hash(), cfg.seed, {stl_path}, {out_model});
}

// --- PU corpus helpers -----------------------------------------------------------

namespace detail {

// Pickup points of one-shift taxis, grouped per taxi-day.
inline std::map<std::string, std::map<int, std::vector<PuPoint>>> build_pu_points(
    const std::map<std::string, std::vector<ServiceEvent>>& events, const std::map<std::string, ShiftClass>& shifts,
    std::int64_t utc_offset_s) {
    std::map<std::string, std::map<int, std::vector<PuPoint>>> out;
    for (const auto& [taxi, evs] : events) {
        auto s = shifts.find(taxi);
        if (s == shifts.end() || s->second != ShiftClass::OneShift) continue;
        for (const auto& e : evs) {
            if (e.kind != EventKind::PickUp) continue;
            PuPoint p;
            p.t_min = minutes_since_midnight(e.ts, utc_offset_s);
            p.lon = e.lon;
            p.lat = e.lat;
            out[taxi][local_day(e.ts, utc_offset_s)].push_back(p);
        }
    }
    return out;
}

// One token per pickup, sampled from the two-word soft membership with a
// per-document seed, so tokenization is reproducible across stages.
inline std::vector<PuDoc> tokenize_corpus(const std::map<std::string, std::map<int, std::vector<PuPoint>>>& points,
                                          const Vocabulary& vocab, double delta, std::uint64_t seed) {
    std::vector<PuDoc> docs;
    const std::uint64_t salt = mix_seed(seed, hash_str("tokens"));
    for (const auto& [taxi, days] : points) {
        for (const auto& [day, pts] : days) {
            PuDoc doc;
            doc.taxi_id = taxi;
            doc.local_date = day;
            Rng rng(mix_seed(salt, hash_str(taxi), static_cast<std::uint64_t>(day)));
            doc.word_ids.reserve(pts.size());
            for (const auto& p : pts) doc.word_ids.push_back(sample_token(soft_word_membership(p, vocab, delta), rng));
            docs.push_back(std::move(doc));
        }
    }
    return docs;
}

}  // namespace detail

// --- fit-lda ---------------------------------------------------------------------

inline void run_fit_lda(const PipelineConfig& cfg, const std::string& events_path, const std::string& shifts_path,
                        const std::string& out_vocab, const std::string& out_lda, const std::string& manifest = "") {
    require_file(events_path);
    require_file(shifts_path);
    auto events = load_events_csv(events_path);
    auto shifts = load_shifts_csv(shifts_path);
    const std::int64_t offset = static_cast<std::int64_t>(cfg.utc_offset_hours) * 3600;
    auto points = detail::build_pu_points(events, shifts, offset);

    std::vector<PuPoint> all;
    for (const auto& [taxi, days] : points)
        for (const auto& [day, pts] : days) all.insert(all.end(), pts.begin(), pts.end());
    if (cfg.lda_vocab_sample > 0 && static_cast<int>(all.size()) > cfg.lda_vocab_sample) {
        Rng rng(mix_seed(cfg.seed, hash_str("vocab-sample")));
        rng.shuffle(all);
        all.resize(cfg.lda_vocab_sample);
    }
    Vocabulary vocab = build_vocabulary(all, cfg.lda_words, mix_seed(cfg.seed, hash_str("vocab")));
    double delta = standardized_delta(vocab, cfg.lda_delta_m);
    auto docs = detail::tokenize_corpus(points, vocab, delta, cfg.seed);
    LdaModel lda = fit_lda(docs, cfg.lda_topics, cfg.effective_lda_alpha(), cfg.lda_beta, cfg.lda_fit_iters,
                           mix_seed(cfg.seed, hash_str("lda")), nullptr, vocab.w);
    vocab.save(out_vocab);
    lda.save(out_lda);
    if (!manifest.empty())
        manifest_append(manifest, "fit-lda", cfg.hash(), cfg.seed, {events_path, shifts_path}, {out_vocab, out_lda});
}

// --- encode ------------------------------------------------------------------------

inline void run_encode(const PipelineConfig& cfg, const std::string& stl_path, const std::string& gmm_path,
                       const std::string& events_path, const std::string& shifts_path, const std::string& vocab_path,
                       const std::string& lda_path, const std::string& out_fv, const std::string& out_theta,
                       const std::string& manifest = "") {
    require_file(stl_path);
    require_file(gmm_path);
    require_file(events_path);
    require_file(shifts_path);
    require_file(vocab_path);
    require_file(lda_path);

    GmmModel gmm = GmmModel::load(gmm_path);
    auto episodes = load_stl_csv(stl_path);
    std::map<std::string, std::map<int, std::vector<double>>> fv_rows;
    for (const auto& e : episodes) {
        StlVec v = stl_vector(e);
        DataMatrix bucket(1, kStlDim);
        std::copy(v.begin(), v.end(), bucket.row(0));
        standardize_inplace(gmm.stats, bucket.row(0));
        auto fv = fisher_vector(gmm, bucket);
        if (fv.has_value()) fv_rows[e.taxi_id][e.local_date] = std::move(fv->values);
    }
    save_daily_vectors_csv(out_fv, "ids-fv", "v", fv_rows, 2 * gmm.d * gmm.k);

    Vocabulary vocab = Vocabulary::load(vocab_path);
    LdaModel lda = LdaModel::load(lda_path);
    auto events = load_events_csv(events_path);
    auto shifts = load_shifts_csv(shifts_path);
    const std::int64_t offset = static_cast<std::int64_t>(cfg.utc_offset_hours) * 3600;
    auto points = detail::build_pu_points(events, shifts, offset);
    double delta = standardized_delta(vocab, cfg.lda_delta_m);
    auto docs = detail::tokenize_corpus(points, vocab, delta, cfg.seed);
    const std::uint64_t theta_salt = mix_seed(cfg.seed, hash_str("theta"));
    std::map<std::string, std::map<int, std::vector<double>>> theta_rows;
    for (const auto& doc : docs) {
        ThetaVector theta = infer_topics(lda, doc, cfg.lda_infer_iters,
                                         mix_seed(theta_salt, hash_str(doc.taxi_id),
                                                  static_cast<std::uint64_t>(doc.local_date)));
        if (!theta.missing) theta_rows[doc.taxi_id][doc.local_date] = std::move(theta.values);
    }
    save_daily_vectors_csv(out_theta, "ids-theta", "theta_", theta_rows, lda.t_topics);
    if (!manifest.empty())
        manifest_append(manifest, "encode", cfg.hash(), cfg.seed,
                        {stl_path, gmm_path, events_path, shifts_path, vocab_path, lda_path}, {out_fv, out_theta});
}

// --- features ------------------------------------------------------------------------

inline void run_features(const PipelineConfig& cfg, const std::string& fv_path, const std::string& theta_path,
                         const std::string& out_bags, const std::string& out_features_csv,
                         const std::string& manifest = "") {
    require_file(fv_path);
    require_file(theta_path);
    auto fv = load_daily_vectors_csv(fv_path);
    auto theta = load_daily_vectors_csv(theta_path);

    std::map<std::string, std::vector<DailyBehavior>> per_taxi;
    auto day_map = [](const std::map<int, std::vector<double>>& m) { return m; };
    std::map<std::string, std::map<int, DailyBehavior>> merged;
    for (auto& [taxi, days] : fv)
        for (auto& [day, vec] : day_map(days)) {
            DailyBehavior& b = merged[taxi][day];
            b.day = day;
            b.f_stl = vec;
        }
    for (auto& [taxi, days] : theta)
        for (auto& [day, vec] : day_map(days)) {
            DailyBehavior& b = merged[taxi][day];
            b.day = day;
            b.f_pu = vec;
        }
    for (auto& [taxi, days] : merged) {
        auto& list = per_taxi[taxi];
        list.reserve(days.size());
        for (auto& [day, b] : days) list.push_back(std::move(b));
    }

    BagBuildOptions opts;
    opts.window_len = cfg.msp_window_days;
    opts.step = cfg.msp_step_days;
    opts.range_days = cfg.msp_range_days;
    opts.scales = cfg.msp_scales;
    BagBuildReport rep;
    auto bags = build_bags(per_taxi, opts, &rep);
    const int feature_len = 2 * msp_bucket_count(opts.scales);
    save_bags(out_bags, bags, feature_len);

    std::string header = "taxi_id,kind,window_start";
    for (int i = 1; i <= feature_len; ++i) header += ",v" + std::to_string(i);
    CsvWriter w(out_features_csv, "ids-features", 1, header);
    for (const auto& b : bags)
        for (BehaviorKind kind : {BehaviorKind::Stl, BehaviorKind::Pu})
            for (const auto& ft : b.instances(kind)) {
                w.stream() << b.taxi_id << ',' << behavior_name(kind) << ',' << format_date(ft.window_start_day);
                for (double v : ft.values) w.stream() << ',' << fmt_double(v);
                w.stream() << "\n";
            }
    if (!manifest.empty())
        manifest_append(manifest, "features", cfg.hash(), cfg.seed, {fv_path, theta_path},
                        {out_bags, out_features_csv});
}

// --- train ---------------------------------------------------------------------------

inline ModelVariant variant_from_name(const std::string& name) {
    if (name == "mcmil") return ModelVariant::McMil;
    if (name == "mil") return ModelVariant::MilConcat;
    if (name == "mil-stl") return ModelVariant::MilStl;
    if (name == "mil-pu") return ModelVariant::MilPu;
    throw ConfigError("train.model", "unknown model '" + name + "'");
}

inline void run_train(const PipelineConfig& cfg, const std::string& bags_path, const std::string& labels_path,
                      const std::string& model_name, const std::string& out_model, const std::string& out_split,
                      const std::string& manifest = "") {
    require_file(bags_path);
    require_file(labels_path);
    int feature_len = 0;
    auto bags = load_bags(bags_path, &feature_len);
    auto labels = load_labels_csv(labels_path);
    std::map<std::string, int> label_by_taxi;
    for (const auto& l : labels) label_by_taxi[l.taxi_id] = l.label;

    std::vector<Bag> labeled;
    for (auto& b : bags) {
        auto it = label_by_taxi.find(b.taxi_id);
        if (it == label_by_taxi.end()) continue;
        b.label = it->second;
        labeled.push_back(b);
    }
    if (labeled.empty()) throw std::runtime_error("train: no labeled bags");

    // stratified split, seeded; taxis are sorted before shuffling so the
    // assignment depends only on ids, labels, and the split seed
    std::vector<std::string> pos, neg;
    for (const auto& b : labeled) (*b.label == 1 ? pos : neg).push_back(b.taxi_id);
    std::map<std::string, std::string> subset;
    Rng rng(mix_seed(cfg.split_seed, hash_str("split")));
    for (auto* group : {&pos, &neg}) {
        std::sort(group->begin(), group->end());
        rng.shuffle(*group);
        std::size_t n_test = static_cast<std::size_t>(std::llround(cfg.split_test_fraction * group->size()));
        for (std::size_t i = 0; i < group->size(); ++i) subset[(*group)[i]] = i < n_test ? "test" : "train";
    }
    save_split_csv(out_split, subset);

    std::vector<Bag> train_set;
    for (const auto& b : labeled)
        if (subset[b.taxi_id] == "train") train_set.push_back(b);

    if (model_name == "logistic") {
        auto tb = make_train_bags(train_set, ModelVariant::MilConcat, feature_len);
        LogisticModel m = train_logistic(tb, 2 * feature_len);
        m.save(out_model);
    } else {
        ModelVariant variant = variant_from_name(model_name);
        auto tb = make_train_bags(train_set, variant, feature_len);
        McMilOptions opts;
        opts.rounds = cfg.mcmil_rounds;
        opts.max_depth = cfg.mcmil_max_depth;
        opts.alpha_max = cfg.mcmil_alpha_max;
        opts.seed = mix_seed(cfg.seed, hash_str("mcmil"));
        opts.weight_mode = cfg.mcmil_weight_mode;
        McMilModel m = train_mcmil(tb, opts, variant_sources(variant), variant_feature_lens(variant, feature_len));
        m.save(out_model);
    }
    if (!manifest.empty())
        manifest_append(manifest, "train", cfg.hash(), cfg.seed, {bags_path, labels_path}, {out_model, out_split});
}

// --- score ---------------------------------------------------------------------------

inline std::string peek_artifact_kind(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingArtifactError(path);
    std::string kind;
    in >> kind;
    return kind;
}

inline void run_score(const PipelineConfig& cfg, const std::string& bags_path, const std::string& model_path,
                      const std::string& out_scores, const std::string& manifest = "") {
    require_file(bags_path);
    require_file(model_path);
    int feature_len = 0;
    auto bags = load_bags(bags_path, &feature_len);
    std::vector<ScoredTaxi> scores;
    scores.reserve(bags.size());

    std::string kind = peek_artifact_kind(model_path);
    if (kind == "ids_logistic_model") {
        LogisticModel m = LogisticModel::load(model_path);
        auto tb = make_train_bags(bags, ModelVariant::MilConcat, feature_len);
        for (const auto& b : tb) scores.push_back(ScoredTaxi{b.id, m.score(bag_mean_feature(b, 2 * feature_len)), {}});
    } else {
        McMilModel m = McMilModel::load(model_path);
        ModelVariant variant = ModelVariant::McMil;
        if (m.components.size() == 1) {
            switch (m.components[0].source) {
                case FeatureSource::Stl: variant = ModelVariant::MilStl; break;
                case FeatureSource::Pu: variant = ModelVariant::MilPu; break;
                default: variant = ModelVariant::MilConcat; break;
            }
        }
        auto tb = make_train_bags(bags, variant, feature_len);
        for (const auto& b : tb) scores.push_back(ScoredTaxi{b.id, score_bag(m, b), {}});
    }
    save_scores_csv(out_scores, scores);
    if (!manifest.empty())
        manifest_append(manifest, "score", cfg.hash(), cfg.seed, {bags_path, model_path}, {out_scores});
}

// --- evaluate -------------------------------------------------------------------------

struct EvalResult {
    double auc = 0.0;
    double ap = 0.0;
    long n_pos = 0;
    long n_neg = 0;
};

inline EvalResult run_evaluate(const PipelineConfig& cfg, const std::string& scores_path,
                               const std::string& labels_path, const std::string& split_path,
                               const std::string& subset, const std::string& out_metrics,
                               const std::string& out_ranked, const std::string& manifest = "") {
    require_file(scores_path);
    require_file(labels_path);
    auto scores = load_scores_csv(scores_path);
    auto labels = load_labels_csv(labels_path);
    std::map<std::string, int> label_by_taxi;
    for (const auto& l : labels) label_by_taxi[l.taxi_id] = l.label;

    std::map<std::string, std::string> split;
    if (!split_path.empty()) {
        require_file(split_path);
        split = load_split_csv(split_path);
    }

    std::vector<ScoredTaxi> selected;
    for (auto& s : scores) {
        if (!split.empty() && !subset.empty()) {
            auto it = split.find(s.taxi_id);
            if (it == split.end() || it->second != subset) continue;
        }
        auto lb = label_by_taxi.find(s.taxi_id);
        if (lb != label_by_taxi.end()) s.label = lb->second;
        selected.push_back(s);
    }
    EvalResult res;
    for (const auto& s : selected) {
        if (!s.label.has_value()) continue;
        (*s.label == 1 ? res.n_pos : res.n_neg) += 1;
    }
    res.auc = roc_auc(selected);
    res.ap = average_precision(selected);
    save_metrics(out_metrics, res.auc, res.ap, res.n_pos, res.n_neg);
    save_ranked_csv(out_ranked, rank_suspects(selected));
    if (!manifest.empty()) {
        std::vector<std::string> ins{scores_path, labels_path};
        if (!split_path.empty()) ins.push_back(split_path);
        manifest_append(manifest, "evaluate", cfg.hash(), cfg.seed, ins, {out_metrics, out_ranked});
    }
    return res;
}

// --- full pipeline -----------------------------------------------------------------------

struct PipelinePaths {
    std::string trace, trips, labels, events, report, stl, shifts, gmm, vocab, lda, fv, theta, bags, features, model,
        split, scores, metrics, ranked, manifest;

    static PipelinePaths in_dir(const std::string& dir) {
        PipelinePaths p;
        auto j = [&](const char* name) { return (fs::path(dir) / name).string(); };
        p.trace = j("trace.csv");
        p.trips = j("trips.csv");
        p.labels = j("labels.csv");
        p.events = j("events.csv");
        p.report = j("ingest_report.txt");
        p.stl = j("stl.csv");
        p.shifts = j("shifts.csv");
        p.gmm = j("gmm_model.txt");
        p.vocab = j("vocab.txt");
        p.lda = j("lda_model.txt");
        p.fv = j("fv.csv");
        p.theta = j("theta.csv");
        p.bags = j("bags.txt");
        p.features = j("features.csv");
        p.model = j("model.txt");
        p.split = j("split.csv");
        p.scores = j("scores.csv");
        p.metrics = j("metrics.txt");
        p.ranked = j("ranked.csv");
        p.manifest = j("manifest.txt");
        return p;
    }
};

// synth -> ingest -> extract-stl -> fit-gmm -> fit-lda -> encode -> features
// -> train -> score -> evaluate (test subset when a split exists)
inline EvalResult run_pipeline(const PipelineConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    PipelinePaths p = PipelinePaths::in_dir(out_dir);
    std::ofstream(p.manifest, std::ios::binary).close();  // fresh manifest per run
    run_synth(cfg, p.trace, p.trips, p.labels, p.manifest);
    run_ingest(cfg, p.trace, p.trips, p.events, p.report, p.manifest);
    run_extract_stl(cfg, p.trace, p.events, p.stl, p.shifts, p.report, p.manifest);
    run_fit_gmm(cfg, p.stl, p.gmm, p.manifest);
    run_fit_lda(cfg, p.events, p.shifts, p.vocab, p.lda, p.manifest);
    run_encode(cfg, p.stl, p.gmm, p.events, p.shifts, p.vocab, p.lda, p.fv, p.theta, p.manifest);
    run_features(cfg, p.fv, p.theta, p.bags, p.features, p.manifest);
    run_train(cfg, p.bags, p.labels, cfg.train_model, p.model, p.split, p.manifest);
    run_score(cfg, p.bags, p.model, p.scores, p.manifest);
    std::string subset = cfg.split_test_fraction > 0.0 ? "test" : "";
    std::string split_path = subset.empty() ? "" : p.split;
    return run_evaluate(cfg, p.scores, p.labels, split_path, subset, p.metrics, p.ranked, p.manifest);
}

}  // namespace ids::stages
