#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ids/kmeans.hpp"
#include "ids/numeric.hpp"
#include "ids/rng.hpp"
#include "ids/sleep.hpp"
#include "ids/textdoc.hpp"

namespace ids {

inline constexpr double kLog2Pi = 1.8378770664093454836;

// Diagonal-covariance Gaussian mixture. Mixture weights are kept in soft-max
// form: w_k = exp(alpha_k) / sum_i exp(alpha_i).
struct GmmModel {
    int k = 0;
    int d = 0;
    std::vector<double> alphas;
    std::vector<double> weights;
    DataMatrix means;  // k x d
    DataMatrix vars;   // k x d, sigma^2, floored
    StandardizationStats stats;  // raw-space preconditioning, stored with the model

    // log p_k(x) for one component, x standardized
    double log_component_density(int c, const double* x) const {
        double s = 0.0;
        const double* mu = means.row(c);
        const double* var = vars.row(c);
        for (int j = 0; j < d; ++j) {
            double diff = x[j] - mu[j];
            s += kLog2Pi + std::log(var[j]) + diff * diff / var[j];
        }
        return -0.5 * s;
    }

    // log u_lambda(x) = log sum_k w_k p_k(x)
    double log_density(const double* x) const {
        double m = -std::numeric_limits<double>::infinity();
        std::vector<double> lp(k);
        for (int c = 0; c < k; ++c) {
            lp[c] = std::log(weights[c]) + log_component_density(c, x);
            m = std::max(m, lp[c]);
        }
        if (!std::isfinite(m)) return m;
        double s = 0.0;
        for (int c = 0; c < k; ++c) s += std::exp(lp[c] - m);
        return m + std::log(s);
    }

    void save(const std::string& path) const {
        TextDocWriter w(path, "ids_gmm_model", 1);
        w.kv("K", k);
        w.kv("D", d);
        w.vec("alphas", alphas);
        w.vec("weights", weights);
        for (int c = 0; c < k; ++c)
            w.vec("mean", std::vector<double>(means.row(c), means.row(c) + d));
        for (int c = 0; c < k; ++c)
            w.vec("var", std::vector<double>(vars.row(c), vars.row(c) + d));
        w.vec("stats_mean", stats.mean);
        w.vec("stats_std", stats.stddev);
    }

    static GmmModel load(const std::string& path) {
        TextDocReader r(path, "ids_gmm_model", 1);
        GmmModel m;
        r.expect("K");
        m.k = static_cast<int>(r.integer());
        r.expect("D");
        m.d = static_cast<int>(r.integer());
        r.expect("alphas");
        m.alphas = r.numbers(m.k);
        r.expect("weights");
        m.weights = r.numbers(m.k);
        m.means = DataMatrix(m.k, m.d);
        m.vars = DataMatrix(m.k, m.d);
        for (int c = 0; c < m.k; ++c) {
            r.expect("mean");
            auto v = r.numbers(m.d);
            std::copy(v.begin(), v.end(), m.means.row(c));
        }
        for (int c = 0; c < m.k; ++c) {
            r.expect("var");
            auto v = r.numbers(m.d);
            std::copy(v.begin(), v.end(), m.vars.row(c));
        }
        r.expect("stats_mean");
        m.stats.mean = r.numbers(m.d);
        r.expect("stats_std");
        m.stats.stddev = r.numbers(m.d);
        return m;
    }
};

struct GmmFitOptions {
    int max_iters = 100;
    double tol = 1e-6;
    double var_floor_rel = 1e-4;  // floor = rel * per-dimension data variance
};

struct GmmFitInfo {
    std::vector<double> ll_history;  // mean log-likelihood per EM iteration
    int iterations = 0;
    int reseeds = 0;
};

// Posterior component probabilities gamma(k) for a standardized point,
// computed in log space. If every component underflows to zero density the
// result is uniform and `underflow_counter` is bumped.
inline std::vector<double> responsibilities(const GmmModel& m, const double* x, long* underflow_counter = nullptr) {
    std::vector<double> lp(m.k);
    double mx = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < m.k; ++c) {
        lp[c] = std::log(m.weights[c]) + m.log_component_density(c, x);
        mx = std::max(mx, lp[c]);
    }
    std::vector<double> g(m.k);
    if (!std::isfinite(mx)) {
        if (underflow_counter) ++(*underflow_counter);
        std::fill(g.begin(), g.end(), 1.0 / m.k);
        return g;
    }
    double s = 0.0;
    for (int c = 0; c < m.k; ++c) {
        g[c] = std::exp(lp[c] - mx);
        s += g[c];
    }
    for (int c = 0; c < m.k; ++c) g[c] /= s;
    return g;
}

// EM for the diagonal GMM. Requires |data| >= 10k. Seeded with k-means++;
// mean log-likelihood is non-decreasing between consecutive EM steps (a
// degenerate-component re-seed resets that baseline).
inline GmmModel fit_gmm(const DataMatrix& data, int k, std::uint64_t seed, const GmmFitOptions& opts = {},
                        GmmFitInfo* info = nullptr) {
    const int n = data.rows, d = data.cols;
    if (k < 1) throw std::invalid_argument("fit_gmm: K must be >= 1");
    if (n < 10 * k)
        throw std::invalid_argument("fit_gmm: need at least 10*K points, got " + std::to_string(n) + " for K=" +
                                    std::to_string(k));

    std::vector<double> data_var(d, 0.0), data_mean(d, 0.0);
    for (int j = 0; j < d; ++j) {
        KahanSum s;
        for (int i = 0; i < n; ++i) s.add(data.at(i, j));
        data_mean[j] = s.sum / n;
        KahanSum v;
        for (int i = 0; i < n; ++i) {
            double diff = data.at(i, j) - data_mean[j];
            v.add(diff * diff);
        }
        data_var[j] = v.sum / n;
    }
    std::vector<double> floor(d);
    for (int j = 0; j < d; ++j) floor[j] = std::max(opts.var_floor_rel * data_var[j], 1e-12);

    GmmModel m;
    m.k = k;
    m.d = d;
    m.weights.assign(k, 1.0 / k);
    m.alphas.assign(k, std::log(1.0 / k));
    m.means = DataMatrix(k, d);
    m.vars = DataMatrix(k, d);
    Rng rng(seed);
    auto seeds = kmeanspp_seed_indices(data, k, rng);
    for (int c = 0; c < k; ++c) {
        for (int j = 0; j < d; ++j) {
            m.means.at(c, j) = data.at(seeds[c], j);
            m.vars.at(c, j) = std::max(data_var[j], floor[j]);
        }
    }

    std::vector<double> lp(k);
    std::vector<double> nk(k);
    DataMatrix mu_acc(k, d), var_acc(k, d);
    std::vector<double> point_ll(n);
    double prev_ll = -std::numeric_limits<double>::infinity();
    bool baseline_valid = false;
    for (int iter = 0; iter < opts.max_iters; ++iter) {
        // E-step
        std::fill(nk.begin(), nk.end(), 0.0);
        std::fill(mu_acc.values.begin(), mu_acc.values.end(), 0.0);
        std::fill(var_acc.values.begin(), var_acc.values.end(), 0.0);
        KahanSum ll;
        for (int i = 0; i < n; ++i) {
            const double* x = data.row(i);
            double mx = -std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                lp[c] = std::log(m.weights[c]) + m.log_component_density(c, x);
                mx = std::max(mx, lp[c]);
            }
            double s = 0.0;
            for (int c = 0; c < k; ++c) {
                lp[c] = std::exp(lp[c] - mx);
                s += lp[c];
            }
            point_ll[i] = mx + std::log(s);
            ll.add(point_ll[i]);
            for (int c = 0; c < k; ++c) {
                double g = lp[c] / s;
                nk[c] += g;
                double* ma = mu_acc.row(c);
                double* va = var_acc.row(c);
                for (int j = 0; j < d; ++j) {
                    ma[j] += g * x[j];
                    va[j] += g * x[j] * x[j];
                }
            }
        }
        double mean_ll = ll.sum / n;
        if (info) {
            info->ll_history.push_back(mean_ll);
            info->iterations = iter + 1;
        }
        if (baseline_valid && mean_ll < prev_ll - 1e-9)
            throw std::logic_error("fit_gmm: log-likelihood decreased");
        bool converged = baseline_valid && std::abs(mean_ll - prev_ll) < opts.tol;
        prev_ll = mean_ll;
        baseline_valid = true;
        if (converged) break;

        // M-step
        bool reseeded = false;
        for (int c = 0; c < k; ++c) {
            if (nk[c] < 1e-8) {
                // re-seed the dead component from the worst-explained point
                int worst = 0;
                for (int i = 1; i < n; ++i)
                    if (point_ll[i] < point_ll[worst]) worst = i;
                for (int j = 0; j < d; ++j) {
                    m.means.at(c, j) = data.at(worst, j);
                    m.vars.at(c, j) = std::max(data_var[j], floor[j]);
                }
                m.weights[c] = 1.0 / n;
                reseeded = true;
                if (info) ++info->reseeds;
                continue;
            }
            m.weights[c] = nk[c] / n;
            for (int j = 0; j < d; ++j) {
                double mu = mu_acc.at(c, j) / nk[c];
                m.means.at(c, j) = mu;
                double var = var_acc.at(c, j) / nk[c] - mu * mu;
                m.vars.at(c, j) = std::max(var, floor[j]);
            }
        }
        double wsum = 0.0;
        for (double w : m.weights) wsum += w;
        for (double& w : m.weights) w /= wsum;
        if (reseeded) baseline_valid = false;  // re-seeding may lower the likelihood
    }
    for (int c = 0; c < k; ++c) m.alphas[c] = std::log(m.weights[c]);
    return m;
}

// --- Fisher vector ----------------------------------------------------------

struct FisherVector {
    std::vector<double> values;  // 2*D*K, mu block then sigma block, k-major d-minor
    int bucket_size = 0;
};

// Gradient of the bucket log-likelihood sum_x log u_lambda(x) with respect to
// the component means and standard deviations, before the 1/T scaling and the
// l2 normalization. Accumulation is compensated so the result is stable under
// permutations of the bucket.
inline std::vector<double> fv_gradient_sums(const GmmModel& m, const DataMatrix& bucket,
                                            long* underflow_counter = nullptr) {
    const int k = m.k, d = m.d;
    std::vector<KahanSum> acc(static_cast<std::size_t>(2) * k * d);
    for (int i = 0; i < bucket.rows; ++i) {
        const double* x = bucket.row(i);
        std::vector<double> g = responsibilities(m, x, underflow_counter);
        for (int c = 0; c < k; ++c) {
            const double* mu = m.means.row(c);
            const double* var = m.vars.row(c);
            for (int j = 0; j < d; ++j) {
                double diff = x[j] - mu[j];
                double sigma = std::sqrt(var[j]);
                acc[static_cast<std::size_t>(c) * d + j].add(g[c] * diff / var[j]);
                acc[static_cast<std::size_t>(k) * d + c * d + j].add(
                    g[c] * (diff * diff / (var[j] * sigma) - 1.0 / sigma));
            }
        }
    }
    std::vector<double> out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] = acc[i].sum;
    return out;
}

// f^STL: gradient sums scaled by 1/T, then l2-normalized. An empty bucket has
// no encoding (missing feature); a zero gradient stays an all-zero vector.
inline std::optional<FisherVector> fisher_vector(const GmmModel& m, const DataMatrix& bucket,
                                                 long* underflow_counter = nullptr) {
    if (bucket.rows == 0) return std::nullopt;
    FisherVector fv;
    fv.bucket_size = bucket.rows;
    fv.values = fv_gradient_sums(m, bucket, underflow_counter);
    for (double& v : fv.values) v /= bucket.rows;
    double norm = l2_norm(fv.values);
    if (norm > 0.0)
        for (double& v : fv.values) v /= norm;
    return fv;
}

}  // namespace ids
