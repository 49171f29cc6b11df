#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ids/ssmsp.hpp"
#include "ids/textdoc.hpp"

namespace ids {

// Probability clamp applied wherever a probability enters a quotient or log.
inline constexpr double kProbEps = 1e-7;

inline double clamp_prob(double p) { return std::clamp(p, kProbEps, 1.0 - kProbEps); }

// P^k_t = logistic of the additive score.
inline double instance_prob(double h) { return clamp_prob(1.0 / (1.0 + std::exp(-h))); }

// Noise-or: P = 1 - prod(1 - p). Empty input contributes nothing (0).
inline double noise_or(const std::vector<double>& ps) {
    double q = 1.0;
    for (double p : ps) q *= 1.0 - p;
    return 1.0 - q;
}

inline double component_prob(const std::vector<double>& instance_probs) { return noise_or(instance_probs); }

inline double bag_prob(const std::vector<double>& comp_probs) { return clamp_prob(noise_or(comp_probs)); }

// --- CART weak learner ------------------------------------------------------

struct TreeNode {
    int feature = -1;      // -1: leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int sign = 1;          // leaf output, +1 or -1

    bool is_leaf() const { return feature < 0; }
};

struct WeakClassifier {
    std::vector<TreeNode> nodes;

    int predict(const double* x) const {
        int i = 0;
        while (!nodes[i].is_leaf()) i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
        return nodes[i].sign;
    }

    int predict(const std::vector<double>& x) const { return predict(x.data()); }
};

namespace detail {

struct TreeBuilder {
    const std::vector<std::vector<double>>& xs;
    const std::vector<int>& targets;       // sign(w)
    const std::vector<double>& sample_w;   // |w|
    int max_depth;
    std::vector<TreeNode> nodes;

    int build(std::vector<int> idx, int depth) {
        double wpos = 0.0, wneg = 0.0;
        for (int i : idx) (targets[i] > 0 ? wpos : wneg) += sample_w[i];
        const double total = wpos + wneg;
        auto make_leaf = [&]() {
            TreeNode leaf;
            leaf.sign = wpos >= wneg ? 1 : -1;  // tie goes positive
            nodes.push_back(leaf);
            return static_cast<int>(nodes.size()) - 1;
        };
        if (depth >= max_depth || wpos <= 0.0 || wneg <= 0.0 || total <= 0.0) return make_leaf();

        const int dim = static_cast<int>(xs[idx[0]].size());
        double parent_cost = total - (wpos * wpos + wneg * wneg) / total;
        double best_gain = 0.0;
        int best_f = -1;
        double best_thr = 0.0;
        std::vector<std::pair<double, int>> order(idx.size());
        for (int f = 0; f < dim; ++f) {
            for (std::size_t i = 0; i < idx.size(); ++i) order[i] = {xs[idx[i]][f], idx[i]};
            std::sort(order.begin(), order.end());
            double lp = 0.0, ln = 0.0;
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                int s = order[i].second;
                (targets[s] > 0 ? lp : ln) += sample_w[s];
                if (order[i].first == order[i + 1].first) continue;
                double lw = lp + ln, rw = total - lw;
                if (lw <= 0.0 || rw <= 0.0) continue;
                double rp = wpos - lp, rn = wneg - ln;
                double cost = (lw - (lp * lp + ln * ln) / lw) + (rw - (rp * rp + rn * rn) / rw);
                double gain = parent_cost - cost;
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best_f = f;
                    best_thr = 0.5 * (order[i].first + order[i + 1].first);
                }
            }
        }
        if (best_f < 0) return make_leaf();

        std::vector<int> left_idx, right_idx;
        for (int i : idx) (xs[i][best_f] <= best_thr ? left_idx : right_idx).push_back(i);
        int me = static_cast<int>(nodes.size());
        nodes.push_back(TreeNode{});
        nodes[me].feature = best_f;
        nodes[me].threshold = best_thr;
        int l = build(std::move(left_idx), depth + 1);
        int r = build(std::move(right_idx), depth + 1);
        nodes[me].left = l;
        nodes[me].right = r;
        return me;
    }
};

}  // namespace detail

// CART on signed weights: predicts sign(w) with sample weight |w|, splits by
// weighted Gini, leaves output the weighted-majority sign (tie -> +1).
inline WeakClassifier fit_weak(const std::vector<std::vector<double>>& xs, const std::vector<double>& weights,
                               int max_depth) {
    if (xs.empty() || xs.size() != weights.size()) throw std::invalid_argument("fit_weak: bad inputs");
    std::vector<int> targets(xs.size());
    std::vector<double> sw(xs.size());
    std::vector<int> idx;
    idx.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        targets[i] = weights[i] >= 0.0 ? 1 : -1;
        sw[i] = std::abs(weights[i]);
        idx.push_back(static_cast<int>(i));
    }
    detail::TreeBuilder builder{xs, targets, sw, max_depth, {}};
    // The builder appends the root first, so node 0 is always the entry.
    builder.build(std::move(idx), 0);
    WeakClassifier w;
    w.nodes = std::move(builder.nodes);
    return w;
}

// --- model ------------------------------------------------------------------

enum class FeatureSource : int { Stl = 0, Pu = 1, ConcatStlPu = 2 };

inline const char* feature_source_name(FeatureSource s) {
    switch (s) {
        case FeatureSource::Stl: return "stl";
        case FeatureSource::Pu: return "pu";
        default: return "concat";
    }
}

enum class WeightMode : int { Exact = 0, Simplified = 1 };

struct BoostedComponent {
    FeatureSource source = FeatureSource::Stl;
    int n_features = 0;
    std::vector<double> alphas;
    std::vector<WeakClassifier> trees;

    // H^k(s) = sum_j alpha_j h_j(s)
    double raw_score(const std::vector<double>& x) const {
        double h = 0.0;
        for (std::size_t j = 0; j < trees.size(); ++j) h += alphas[j] * trees[j].predict(x);
        return h;
    }
};

struct McMilOptions {
    int rounds = 50;
    int max_depth = 3;
    double alpha_max = 10.0;
    std::uint64_t seed = 1;
    WeightMode weight_mode = WeightMode::Exact;
};

struct McMilModel {
    std::vector<BoostedComponent> components;
    McMilOptions opts;

    void save(const std::string& path) const;
    static McMilModel load(const std::string& path);
};

// A bag prepared for training/scoring: instances grouped per component.
struct TrainBag {
    std::string id;
    int label = -1;  // 0/1; -1 when unlabeled
    std::vector<std::vector<std::vector<double>>> comps;  // [component][instance][feature]
};

// Instance probabilities for every bag under the current per-instance scores.
inline std::vector<std::vector<std::vector<double>>> probs_from_scores(
    const std::vector<std::vector<std::vector<double>>>& h) {
    auto probs = h;
    for (auto& bag : probs)
        for (auto& comp : bag)
            for (double& v : comp) v = instance_prob(v);
    return probs;
}

inline double bag_prob_from_instance_probs(const std::vector<std::vector<double>>& comps) {
    std::vector<double> cp(comps.size());
    for (std::size_t k = 0; k < comps.size(); ++k) cp[k] = component_prob(comps[k]);
    return bag_prob(cp);
}

// log L = sum_i y_i log P_i + (1 - y_i) log(1 - P_i), with clamped P_i.
inline double total_log_likelihood(const std::vector<std::vector<std::vector<double>>>& probs,
                                   const std::vector<int>& labels) {
    double ll = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        double p = bag_prob_from_instance_probs(probs[i]);
        ll += labels[i] == 1 ? std::log(p) : std::log(1.0 - p);
    }
    return ll;
}

// AnyBoost instance weights for component k: the derivative of the bag
// log-likelihood with respect to the additive score at each instance,
//   w_it = [y/P_i - (1-y)/(1-P_i)] * prod_{j!=k}(1-P^j)
//        * prod_{j!=t}(1-P^k_j) * P^k_t (1-P^k_t).
// The simplified mode is the collapsed form (y_i - P_i)/P_i * P^k_t.
inline std::vector<std::vector<double>> instance_weights_from_probs(
    const std::vector<std::vector<std::vector<double>>>& probs, const std::vector<int>& labels, int k,
    WeightMode mode = WeightMode::Exact) {
    std::vector<std::vector<double>> weights(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const auto& comps = probs[i];
        const auto& inst = comps[k];
        weights[i].assign(inst.size(), 0.0);
        if (inst.empty()) continue;
        std::vector<double> cp(comps.size());
        for (std::size_t j = 0; j < comps.size(); ++j) cp[j] = component_prob(comps[j]);
        double p_bag = bag_prob(cp);
        if (mode == WeightMode::Simplified) {
            double factor = (labels[i] - p_bag) / p_bag;
            for (std::size_t t = 0; t < inst.size(); ++t) weights[i][t] = factor * inst[t];
            continue;
        }
        double dldp = labels[i] == 1 ? 1.0 / p_bag : -1.0 / (1.0 - p_bag);
        double prod_other = 1.0;
        for (std::size_t j = 0; j < comps.size(); ++j)
            if (j != static_cast<std::size_t>(k)) prod_other *= 1.0 - cp[j];
        // prefix/suffix products of (1 - p) avoid dividing by near-zero terms
        const std::size_t n = inst.size();
        std::vector<double> pre(n + 1, 1.0), suf(n + 1, 1.0);
        for (std::size_t t = 0; t < n; ++t) pre[t + 1] = pre[t] * (1.0 - inst[t]);
        for (std::size_t t = n; t-- > 0;) suf[t] = suf[t + 1] * (1.0 - inst[t]);
        for (std::size_t t = 0; t < n; ++t) {
            double prod_inst = pre[t] * suf[t + 1];
            weights[i][t] = dldp * prod_other * prod_inst * inst[t] * (1.0 - inst[t]);
        }
    }
    return weights;
}

namespace detail {

inline std::vector<std::vector<std::vector<double>>> component_scores(const McMilModel& m,
                                                                      const std::vector<TrainBag>& bags) {
    std::vector<std::vector<std::vector<double>>> h(bags.size());
    for (std::size_t i = 0; i < bags.size(); ++i) {
        h[i].resize(m.components.size());
        for (std::size_t k = 0; k < m.components.size(); ++k) {
            const auto& inst = bags[i].comps[k];
            h[i][k].resize(inst.size());
            for (std::size_t t = 0; t < inst.size(); ++t) h[i][k][t] = m.components[k].raw_score(inst[t]);
        }
    }
    return h;
}

}  // namespace detail

inline std::vector<std::vector<double>> instance_weights(const McMilModel& m, const std::vector<TrainBag>& bags,
                                                         int k, WeightMode mode = WeightMode::Exact) {
    std::vector<int> labels(bags.size());
    for (std::size_t i = 0; i < bags.size(); ++i) labels[i] = bags[i].label;
    return instance_weights_from_probs(probs_from_scores(detail::component_scores(m, bags)), labels, k, mode);
}

// Maximizes the total log-likelihood of H^k + alpha * h over [0, alpha_max]
// by golden-section search (absolute tolerance 1e-4). Returns 0 when no
// alpha > 0 improves on alpha = 0.
inline double line_search_alpha(const std::vector<std::vector<std::vector<double>>>& h /*current scores*/,
                                const std::vector<std::vector<double>>& tree_pred /*[bag][t] of comp k*/,
                                const std::vector<int>& labels, int k, double alpha_max) {
    // the other components do not depend on alpha
    std::vector<double> prod_other(h.size(), 1.0);
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j < h[i].size(); ++j) {
            if (j == static_cast<std::size_t>(k)) continue;
            double q = 1.0;
            for (double s : h[i][j]) q *= 1.0 - instance_prob(s);
            prod_other[i] *= q;  // = 1 - P^j
        }
    auto eval = [&](double alpha) {
        double ll = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i) {
            double q = 1.0;
            for (std::size_t t = 0; t < h[i][k].size(); ++t)
                q *= 1.0 - instance_prob(h[i][k][t] + alpha * tree_pred[i][t]);
            double p = clamp_prob(1.0 - q * prod_other[i]);
            ll += labels[i] == 1 ? std::log(p) : std::log(1.0 - p);
        }
        return ll;
    };

    const double f0 = eval(0.0);
    const double invphi = 0.6180339887498949;
    double a = 0.0, b = alpha_max;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = eval(c), fd = eval(d);
    while (b - a > 1e-4) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = eval(d);
        }
    }
    double best_alpha = 0.5 * (a + b);
    double best_ll = eval(best_alpha);
    double f_max = eval(alpha_max);
    if (f_max >= best_ll) {
        best_alpha = alpha_max;
        best_ll = f_max;
    }
    return best_ll > f0 ? best_alpha : 0.0;
}

struct McMilTrainInfo {
    std::vector<double> ll_history;  // after every accepted update
    int trees_discarded = 0;
};

// Boosting with round-robin component updates: instance weights, a CART fit
// to them, then a line-searched coefficient. The training log-likelihood
// never decreases.
inline McMilModel train_mcmil(const std::vector<TrainBag>& bags, const McMilOptions& opts,
                              const std::vector<FeatureSource>& sources, const std::vector<int>& n_features,
                              McMilTrainInfo* info = nullptr) {
    if (bags.empty()) throw std::invalid_argument("train_mcmil: no bags");
    const int n_comps = static_cast<int>(sources.size());
    for (const auto& b : bags)
        if (static_cast<int>(b.comps.size()) != n_comps) throw std::invalid_argument("train_mcmil: bag arity mismatch");
    std::vector<int> labels(bags.size());
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < bags.size(); ++i) {
        labels[i] = bags[i].label;
        if (labels[i] == 1) has_pos = true;
        else if (labels[i] == 0) has_neg = true;
        else throw std::invalid_argument("train_mcmil: unlabeled training bag");
    }
    if (!has_pos || !has_neg) throw std::invalid_argument("train_mcmil: need both classes in the labels");

    McMilModel model;
    model.opts = opts;
    model.components.resize(n_comps);
    for (int k = 0; k < n_comps; ++k) {
        model.components[k].source = sources[k];
        model.components[k].n_features = n_features[k];
    }

    // current per-instance additive scores, updated incrementally
    std::vector<std::vector<std::vector<double>>> h(bags.size());
    for (std::size_t i = 0; i < bags.size(); ++i) {
        h[i].resize(n_comps);
        for (int k = 0; k < n_comps; ++k) h[i][k].assign(bags[i].comps[k].size(), 0.0);
    }

    double prev_ll = total_log_likelihood(probs_from_scores(h), labels);
    if (info) info->ll_history.push_back(prev_ll);

    for (int round = 0; round < opts.rounds; ++round) {
        for (int k = 0; k < n_comps; ++k) {
            auto weights = instance_weights_from_probs(probs_from_scores(h), labels, k, opts.weight_mode);
            std::vector<std::vector<double>> xs;
            std::vector<double> ws;
            for (std::size_t i = 0; i < bags.size(); ++i)
                for (std::size_t t = 0; t < bags[i].comps[k].size(); ++t) {
                    xs.push_back(bags[i].comps[k][t]);
                    ws.push_back(weights[i][t]);
                }
            if (xs.empty()) continue;
            double wmax = 0.0;
            for (double v : ws) wmax = std::max(wmax, std::abs(v));
            if (wmax <= 0.0) continue;  // converged for this component

            WeakClassifier tree = fit_weak(xs, ws, opts.max_depth);

            std::vector<std::vector<double>> pred(bags.size());
            for (std::size_t i = 0; i < bags.size(); ++i) {
                pred[i].resize(bags[i].comps[k].size());
                for (std::size_t t = 0; t < bags[i].comps[k].size(); ++t)
                    pred[i][t] = tree.predict(bags[i].comps[k][t]);
            }
            double alpha = line_search_alpha(h, pred, labels, k, opts.alpha_max);
            if (alpha <= 0.0) {
                if (info) ++info->trees_discarded;
                continue;
            }
            model.components[k].alphas.push_back(alpha);
            model.components[k].trees.push_back(std::move(tree));
            for (std::size_t i = 0; i < bags.size(); ++i)
                for (std::size_t t = 0; t < bags[i].comps[k].size(); ++t) h[i][k][t] += alpha * pred[i][t];

            double ll = total_log_likelihood(probs_from_scores(h), labels);
            if (ll < prev_ll - 1e-9) throw std::logic_error("train_mcmil: log-likelihood decreased");
            prev_ll = ll;
            if (info) info->ll_history.push_back(ll);
        }
    }
    return model;
}

// P_i for one bag under the trained model.
inline double score_bag(const McMilModel& m, const TrainBag& bag) {
    std::vector<double> cp(m.components.size());
    for (std::size_t k = 0; k < m.components.size(); ++k) {
        std::vector<double> ip(bag.comps[k].size());
        for (std::size_t t = 0; t < bag.comps[k].size(); ++t)
            ip[t] = instance_prob(m.components[k].raw_score(bag.comps[k][t]));
        cp[k] = component_prob(ip);
    }
    return bag_prob(cp);
}

// --- model file -------------------------------------------------------------

inline void McMilModel::save(const std::string& path) const {
    TextDocWriter w(path, "ids_mcmil_model", 1);
    w.kv("components", static_cast<int>(components.size()));
    w.kv("rounds", opts.rounds);
    w.kv("max_depth", opts.max_depth);
    w.kv("alpha_max", opts.alpha_max);
    w.kv("seed", opts.seed);
    w.kv("weight_mode", opts.weight_mode == WeightMode::Exact ? std::string("exact") : std::string("simplified"));
    for (const auto& c : components) {
        w.raw(std::string("component ") + feature_source_name(c.source) + " " + std::to_string(c.n_features) + " " +
              std::to_string(c.trees.size()));
        for (std::size_t j = 0; j < c.trees.size(); ++j) {
            w.raw("tree " + fmt_double(c.alphas[j]) + " " + std::to_string(c.trees[j].nodes.size()));
            for (const auto& n : c.trees[j].nodes) {
                if (n.is_leaf())
                    w.raw("leaf " + std::to_string(n.sign));
                else
                    w.raw("split " + std::to_string(n.feature) + " " + fmt_double(n.threshold) + " " +
                          std::to_string(n.left) + " " + std::to_string(n.right));
            }
        }
    }
}

inline McMilModel McMilModel::load(const std::string& path) {
    TextDocReader r(path, "ids_mcmil_model", 1);
    McMilModel m;
    r.expect("components");
    int n_comps = static_cast<int>(r.integer());
    r.expect("rounds");
    m.opts.rounds = static_cast<int>(r.integer());
    r.expect("max_depth");
    m.opts.max_depth = static_cast<int>(r.integer());
    r.expect("alpha_max");
    m.opts.alpha_max = r.number();
    r.expect("seed");
    m.opts.seed = r.uinteger();
    r.expect("weight_mode");
    m.opts.weight_mode = r.token() == "simplified" ? WeightMode::Simplified : WeightMode::Exact;
    m.components.resize(n_comps);
    for (int k = 0; k < n_comps; ++k) {
        r.expect("component");
        std::string src = r.token();
        BoostedComponent& c = m.components[k];
        c.source = src == "stl" ? FeatureSource::Stl : src == "pu" ? FeatureSource::Pu : FeatureSource::ConcatStlPu;
        c.n_features = static_cast<int>(r.integer());
        int n_trees = static_cast<int>(r.integer());
        c.alphas.resize(n_trees);
        c.trees.resize(n_trees);
        for (int j = 0; j < n_trees; ++j) {
            r.expect("tree");
            c.alphas[j] = r.number();
            int n_nodes = static_cast<int>(r.integer());
            c.trees[j].nodes.resize(n_nodes);
            for (int i = 0; i < n_nodes; ++i) {
                std::string tag = r.token();
                TreeNode& node = c.trees[j].nodes[i];
                if (tag == "leaf") {
                    node.sign = static_cast<int>(r.integer());
                } else if (tag == "split") {
                    node.feature = static_cast<int>(r.integer());
                    node.threshold = r.number();
                    node.left = static_cast<int>(r.integer());
                    node.right = static_cast<int>(r.integer());
                } else {
                    throw std::runtime_error(path + ": bad node tag '" + tag + "'");
                }
            }
        }
    }
    return m;
}

// --- bag preparation --------------------------------------------------------

enum class ModelVariant : int { McMil = 0, MilConcat = 1, MilStl = 2, MilPu = 3 };

inline const char* model_variant_name(ModelVariant v) {
    switch (v) {
        case ModelVariant::McMil: return "mcmil";
        case ModelVariant::MilConcat: return "mil";
        case ModelVariant::MilStl: return "mil-stl";
        default: return "mil-pu";
    }
}

// Converts ssmsp bags to the component layout of a model variant. For the
// concatenated MIL baseline, instances are aligned by window start; a missing
// half is zero-filled ("no observed change").
inline std::vector<TrainBag> make_train_bags(const std::vector<Bag>& bags, ModelVariant variant, int feature_len) {
    std::vector<TrainBag> out;
    out.reserve(bags.size());
    for (const auto& b : bags) {
        TrainBag tb;
        tb.id = b.taxi_id;
        tb.label = b.label.value_or(-1);
        switch (variant) {
            case ModelVariant::McMil: {
                tb.comps.resize(2);
                for (const auto& f : b.stl_instances) tb.comps[0].push_back(f.values);
                for (const auto& f : b.pu_instances) tb.comps[1].push_back(f.values);
                break;
            }
            case ModelVariant::MilStl: {
                tb.comps.resize(1);
                for (const auto& f : b.stl_instances) tb.comps[0].push_back(f.values);
                break;
            }
            case ModelVariant::MilPu: {
                tb.comps.resize(1);
                for (const auto& f : b.pu_instances) tb.comps[0].push_back(f.values);
                break;
            }
            case ModelVariant::MilConcat: {
                tb.comps.resize(1);
                std::map<int, std::pair<const MspFeature*, const MspFeature*>> by_window;
                for (const auto& f : b.stl_instances) by_window[f.window_start_day].first = &f;
                for (const auto& f : b.pu_instances) by_window[f.window_start_day].second = &f;
                for (const auto& [day, pair] : by_window) {
                    std::vector<double> v(static_cast<std::size_t>(2) * feature_len, 0.0);
                    if (pair.first) std::copy(pair.first->values.begin(), pair.first->values.end(), v.begin());
                    if (pair.second) std::copy(pair.second->values.begin(), pair.second->values.end(), v.begin() + feature_len);
                    tb.comps[0].push_back(std::move(v));
                }
                break;
            }
        }
        out.push_back(std::move(tb));
    }
    return out;
}

inline std::vector<FeatureSource> variant_sources(ModelVariant v) {
    switch (v) {
        case ModelVariant::McMil: return {FeatureSource::Stl, FeatureSource::Pu};
        case ModelVariant::MilConcat: return {FeatureSource::ConcatStlPu};
        case ModelVariant::MilStl: return {FeatureSource::Stl};
        default: return {FeatureSource::Pu};
    }
}

inline std::vector<int> variant_feature_lens(ModelVariant v, int feature_len) {
    switch (v) {
        case ModelVariant::McMil: return {feature_len, feature_len};
        case ModelVariant::MilConcat: return {2 * feature_len};
        default: return {feature_len};
    }
}

// --- logistic-regression baseline -------------------------------------------

// Plain logistic regression on the mean of the concatenated instance vectors
// of a bag. Deterministic full-batch gradient ascent.
struct LogisticModel {
    std::vector<double> weights;
    double bias = 0.0;

    double score(const std::vector<double>& x) const {
        double h = bias;
        for (std::size_t i = 0; i < x.size() && i < weights.size(); ++i) h += weights[i] * x[i];
        return clamp_prob(1.0 / (1.0 + std::exp(-h)));
    }

    void save(const std::string& path) const {
        TextDocWriter w(path, "ids_logistic_model", 1);
        w.kv("dim", static_cast<int>(weights.size()));
        w.kv("bias", bias);
        w.vec("weights", weights);
    }

    static LogisticModel load(const std::string& path) {
        TextDocReader r(path, "ids_logistic_model", 1);
        LogisticModel m;
        r.expect("dim");
        int dim = static_cast<int>(r.integer());
        r.expect("bias");
        m.bias = r.number();
        r.expect("weights");
        m.weights = r.numbers(dim);
        return m;
    }
};

inline std::vector<double> bag_mean_feature(const TrainBag& bag, int dim) {
    std::vector<double> mean(dim, 0.0);
    int n = 0;
    for (const auto& inst : bag.comps[0]) {
        for (int i = 0; i < dim; ++i) mean[i] += inst[i];
        ++n;
    }
    if (n > 0)
        for (double& v : mean) v /= n;
    return mean;
}

inline LogisticModel train_logistic(const std::vector<TrainBag>& bags, int dim, int iters = 2000, double lr = 0.5,
                                    double l2 = 1e-4) {
    bool has_pos = false, has_neg = false;
    for (const auto& b : bags) {
        if (b.label == 1) has_pos = true;
        else if (b.label == 0) has_neg = true;
    }
    if (!has_pos || !has_neg) throw std::invalid_argument("train_logistic: need both classes");
    std::vector<std::vector<double>> xs;
    std::vector<int> ys;
    for (const auto& b : bags) {
        xs.push_back(bag_mean_feature(b, dim));
        ys.push_back(b.label);
    }
    LogisticModel m;
    m.weights.assign(dim, 0.0);
    const double n = static_cast<double>(xs.size());
    for (int it = 0; it < iters; ++it) {
        std::vector<double> grad(dim, 0.0);
        double grad_b = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double h = m.bias;
            for (int j = 0; j < dim; ++j) h += m.weights[j] * xs[i][j];
            double err = 1.0 / (1.0 + std::exp(-h)) - ys[i];
            for (int j = 0; j < dim; ++j) grad[j] += err * xs[i][j];
            grad_b += err;
        }
        for (int j = 0; j < dim; ++j) m.weights[j] -= lr * (grad[j] / n + l2 * m.weights[j]);
        m.bias -= lr * grad_b / n;
    }
    return m;
}

}  // namespace ids
