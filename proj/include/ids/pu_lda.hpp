#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ids/geo.hpp"
#include "ids/kmeans.hpp"
#include "ids/numeric.hpp"
#include "ids/rng.hpp"
#include "ids/sleep.hpp"
#include "ids/textdoc.hpp"

namespace ids {

// x^PU = [pickup time, lon, lat]
struct PuPoint {
    double t_min = 0.0;  // minutes since local midnight
    double lon = 0.0;
    double lat = 0.0;
};

inline constexpr int kPuDim = 3;

// Pickup words: k-means centers in standardized (t, lon, lat) space.
struct Vocabulary {
    int w = 0;
    StandardizationStats stats;
    DataMatrix centers;  // w x 3

    void save(const std::string& path) const {
        TextDocWriter wr(path, "ids_vocabulary", 1);
        wr.kv("W", w);
        wr.kv("D", kPuDim);
        wr.vec("stats_mean", stats.mean);
        wr.vec("stats_std", stats.stddev);
        for (int c = 0; c < w; ++c)
            wr.vec("center", std::vector<double>(centers.row(c), centers.row(c) + kPuDim));
    }

    static Vocabulary load(const std::string& path) {
        TextDocReader r(path, "ids_vocabulary", 1);
        Vocabulary v;
        r.expect("W");
        v.w = static_cast<int>(r.integer());
        r.expect("D");
        if (r.integer() != kPuDim) throw std::runtime_error(path + ": unexpected dimension");
        r.expect("stats_mean");
        v.stats.mean = r.numbers(kPuDim);
        r.expect("stats_std");
        v.stats.stddev = r.numbers(kPuDim);
        v.centers = DataMatrix(v.w, kPuDim);
        for (int c = 0; c < v.w; ++c) {
            r.expect("center");
            auto row = r.numbers(kPuDim);
            std::copy(row.begin(), row.end(), v.centers.row(c));
        }
        return v;
    }
};

inline DataMatrix pu_points_matrix(const std::vector<PuPoint>& pts) {
    DataMatrix m(static_cast<int>(pts.size()), kPuDim);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        m.at(static_cast<int>(i), 0) = pts[i].t_min;
        m.at(static_cast<int>(i), 1) = pts[i].lon;
        m.at(static_cast<int>(i), 2) = pts[i].lat;
    }
    return m;
}

// Clusters pickup points into W words. Requires |points| >= 10*W.
inline Vocabulary build_vocabulary(const std::vector<PuPoint>& points, int w, std::uint64_t seed) {
    if (w < 1) throw std::invalid_argument("build_vocabulary: W must be >= 1");
    if (static_cast<int>(points.size()) < 10 * w)
        throw std::invalid_argument("build_vocabulary: need at least 10*W points, got " +
                                    std::to_string(points.size()) + " for W=" + std::to_string(w));
    DataMatrix m = pu_points_matrix(points);
    Vocabulary v;
    v.w = w;
    v.stats = fit_standardization(m);
    m = standardize_all(v.stats, std::move(m));
    Rng rng(seed);
    KmeansResult km = kmeans(m, w, rng, 300);
    v.centers = std::move(km.centers);
    return v;
}

// Squared-distance scale delta for the soft membership kernel: `meters` of
// GPS uncertainty converted to the standardized vocabulary space.
inline double standardized_delta(const Vocabulary& v, double meters) {
    double dlat = meters / meters_per_deg_lat() / v.stats.stddev[2];
    double ref_lat = v.stats.mean[2];
    double dlon = meters / meters_per_deg_lon(ref_lat) / v.stats.stddev[1];
    return 0.5 * (dlat * dlat + dlon * dlon);
}

struct WordMembership {
    int word_a = 0;  // nearest center
    int word_b = 0;  // second nearest (== word_a when W == 1)
    double o_a = 1.0;
    double o_b = 0.0;  // o_a + o_b == 1 exactly
};

// Gaussian-kernel membership over the two nearest words:
// o_a = exp(-d_a^2/delta) / (exp(-d_a^2/delta) + exp(-d_b^2/delta)).
inline WordMembership soft_word_membership(const PuPoint& p, const Vocabulary& v, double delta) {
    if (delta <= 0.0) throw std::invalid_argument("soft_word_membership: delta must be > 0");
    double x[kPuDim] = {p.t_min, p.lon, p.lat};
    standardize_inplace(v.stats, x);
    int a = -1, b = -1;
    double da = std::numeric_limits<double>::infinity(), db = da;
    for (int c = 0; c < v.w; ++c) {
        double d2 = detail::sq_dist(x, v.centers.row(c), kPuDim);
        if (d2 < da) {
            db = da;
            b = a;
            da = d2;
            a = c;
        } else if (d2 < db) {
            db = d2;
            b = c;
        }
    }
    WordMembership wm;
    wm.word_a = a;
    if (v.w == 1) return wm;
    wm.word_b = b;
    wm.o_a = 1.0 / (1.0 + std::exp((da - db) / delta));
    wm.o_b = 1.0 - wm.o_a;
    return wm;
}

// One token per pickup, sampled from the membership probabilities.
inline int sample_token(const WordMembership& wm, Rng& rng) {
    return rng.uniform() < wm.o_a ? wm.word_a : wm.word_b;
}

// A taxi-day document of word tokens.
struct PuDoc {
    std::string taxi_id;
    int local_date = 0;
    std::vector<int> word_ids;
};

struct LdaModel {
    int t_topics = 0;
    int w = 0;
    double alpha = 0.0;
    double beta = 0.0;
    DataMatrix topic_word;            // t_topics x w, post-burn-in averaged counts
    std::vector<double> topic_totals; // row sums of topic_word

    void save(const std::string& path) const {
        TextDocWriter wr(path, "ids_lda_model", 1);
        wr.kv("T", t_topics);
        wr.kv("W", w);
        wr.kv("alpha", alpha);
        wr.kv("beta", beta);
        for (int t = 0; t < t_topics; ++t)
            wr.vec("topic", std::vector<double>(topic_word.row(t), topic_word.row(t) + w));
        wr.vec("totals", topic_totals);
    }

    static LdaModel load(const std::string& path) {
        TextDocReader r(path, "ids_lda_model", 1);
        LdaModel m;
        r.expect("T");
        m.t_topics = static_cast<int>(r.integer());
        r.expect("W");
        m.w = static_cast<int>(r.integer());
        r.expect("alpha");
        m.alpha = r.number();
        r.expect("beta");
        m.beta = r.number();
        m.topic_word = DataMatrix(m.t_topics, m.w);
        for (int t = 0; t < m.t_topics; ++t) {
            r.expect("topic");
            auto row = r.numbers(m.w);
            std::copy(row.begin(), row.end(), m.topic_word.row(t));
        }
        r.expect("totals");
        m.topic_totals = r.numbers(m.t_topics);
        return m;
    }
};

struct LdaFitInfo {
    int skipped_empty_docs = 0;
    int sampled_sweeps = 0;
};

// Collapsed Gibbs sampler. The returned topic-word matrix is the average of
// the live counts over every 10th sweep after burn-in (iters/2), so column
// sums still equal corpus word frequencies. `w_vocab` fixes the vocabulary
// size; 0 infers it from the corpus.
inline LdaModel fit_lda(const std::vector<PuDoc>& docs, int t_topics, double alpha, double beta, int iters,
                        std::uint64_t seed, LdaFitInfo* info = nullptr, int w_vocab = 0) {
    if (t_topics < 1) throw std::invalid_argument("fit_lda: T must be >= 1");
    if (docs.empty()) throw std::invalid_argument("fit_lda: empty corpus");
    int w = w_vocab;
    for (const auto& d : docs)
        for (int id : d.word_ids) {
            if (id < 0) throw std::invalid_argument("fit_lda: negative word id");
            w = std::max(w, id + 1);
        }
    if (w == 0) throw std::invalid_argument("fit_lda: corpus has no tokens");

    std::vector<const PuDoc*> live;
    live.reserve(docs.size());
    for (const auto& d : docs) {
        if (d.word_ids.empty()) {
            if (info) ++info->skipped_empty_docs;
            continue;
        }
        live.push_back(&d);
    }
    if (live.empty()) throw std::invalid_argument("fit_lda: all documents empty");

    const int m_docs = static_cast<int>(live.size());
    DataMatrix n_tw(t_topics, w);
    std::vector<double> n_t(t_topics, 0.0);
    DataMatrix n_dt(m_docs, t_topics);
    std::vector<std::vector<int>> z(m_docs);

    Rng rng(seed);
    for (int di = 0; di < m_docs; ++di) {
        const auto& ids = live[di]->word_ids;
        z[di].resize(ids.size());
        for (std::size_t n = 0; n < ids.size(); ++n) {
            int t = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(t_topics)));
            z[di][n] = t;
            n_tw.at(t, ids[n]) += 1.0;
            n_t[t] += 1.0;
            n_dt.at(di, t) += 1.0;
        }
    }

    DataMatrix acc_tw(t_topics, w);
    std::vector<double> acc_t(t_topics, 0.0);
    int samples = 0;
    const int burn = iters / 2;
    std::vector<double> probs(t_topics);
    const double wbeta = w * beta;
    for (int sweep = 0; sweep < iters; ++sweep) {
        for (int di = 0; di < m_docs; ++di) {
            const auto& ids = live[di]->word_ids;
            for (std::size_t n = 0; n < ids.size(); ++n) {
                int word = ids[n];
                int old_t = z[di][n];
                n_tw.at(old_t, word) -= 1.0;
                n_t[old_t] -= 1.0;
                n_dt.at(di, old_t) -= 1.0;
                for (int t = 0; t < t_topics; ++t)
                    probs[t] = (n_dt.at(di, t) + alpha) * (n_tw.at(t, word) + beta) / (n_t[t] + wbeta);
                int new_t = rng.weighted_index(probs);
                z[di][n] = new_t;
                n_tw.at(new_t, word) += 1.0;
                n_t[new_t] += 1.0;
                n_dt.at(di, new_t) += 1.0;
            }
        }
        if (sweep >= burn && (sweep - burn) % 10 == 0) {
            for (std::size_t i = 0; i < acc_tw.values.size(); ++i) acc_tw.values[i] += n_tw.values[i];
            for (int t = 0; t < t_topics; ++t) acc_t[t] += n_t[t];
            ++samples;
        }
    }
    if (samples == 0) {  // iters == 0: fall back to the initialized counts
        acc_tw = n_tw;
        acc_t = n_t;
        samples = 1;
    }
    if (info) info->sampled_sweeps = samples;

    LdaModel model;
    model.t_topics = t_topics;
    model.w = w;
    model.alpha = alpha;
    model.beta = beta;
    model.topic_word = std::move(acc_tw);
    for (double& v : model.topic_word.values) v /= samples;
    model.topic_totals.assign(t_topics, 0.0);
    for (int t = 0; t < t_topics; ++t) model.topic_totals[t] = acc_t[t] / samples;
    return model;
}

// f^PU: per-day topic proportions.
struct ThetaVector {
    std::vector<double> values;
    bool missing = false;
};

// Fold-in Gibbs against the fixed topic-word counts. theta_t is
// (n_t + alpha) / (N + T*alpha) averaged over post-burn-in sweeps.
inline ThetaVector infer_topics(const LdaModel& m, const PuDoc& doc, int iters, std::uint64_t seed) {
    ThetaVector theta;
    theta.values.assign(m.t_topics, 1.0 / m.t_topics);
    if (doc.word_ids.empty()) {
        theta.missing = true;
        return theta;
    }
    const int n_tokens = static_cast<int>(doc.word_ids.size());
    Rng rng(seed);
    std::vector<int> z(n_tokens);
    std::vector<double> n_dt(m.t_topics, 0.0);
    for (int n = 0; n < n_tokens; ++n) {
        int t = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(m.t_topics)));
        z[n] = t;
        n_dt[t] += 1.0;
    }
    const double wbeta = m.w * m.beta;
    std::vector<double> probs(m.t_topics);
    std::vector<double> acc(m.t_topics, 0.0);
    int samples = 0;
    const int burn = iters / 2;
    for (int sweep = 0; sweep < iters; ++sweep) {
        for (int n = 0; n < n_tokens; ++n) {
            int word = doc.word_ids[n];
            if (word >= m.w) continue;  // unseen word: no topic evidence
            n_dt[z[n]] -= 1.0;
            for (int t = 0; t < m.t_topics; ++t)
                probs[t] = (n_dt[t] + m.alpha) * (m.topic_word.at(t, word) + m.beta) / (m.topic_totals[t] + wbeta);
            int new_t = rng.weighted_index(probs);
            z[n] = new_t;
            n_dt[new_t] += 1.0;
        }
        if (sweep >= burn) {
            double denom = n_tokens + m.t_topics * m.alpha;
            for (int t = 0; t < m.t_topics; ++t) acc[t] += (n_dt[t] + m.alpha) / denom;
            ++samples;
        }
    }
    if (samples > 0) {
        double total = 0.0;
        for (int t = 0; t < m.t_topics; ++t) total += acc[t];
        for (int t = 0; t < m.t_topics; ++t) theta.values[t] = acc[t] / total;
    }
    return theta;
}

}  // namespace ids
