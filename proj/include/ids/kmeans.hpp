#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "ids/numeric.hpp"
#include "ids/rng.hpp"

namespace ids {

namespace detail {

inline double sq_dist(const double* a, const double* b, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

}  // namespace detail

// k-means++ seeding: returns k row indices of `data`.
inline std::vector<int> kmeanspp_seed_indices(const DataMatrix& data, int k, Rng& rng) {
    const int n = data.rows;
    if (k <= 0 || n < k) throw std::invalid_argument("kmeanspp: need at least k points");
    std::vector<int> chosen;
    chosen.reserve(k);
    chosen.push_back(static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n))));
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    while (static_cast<int>(chosen.size()) < k) {
        const double* c = data.row(chosen.back());
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], detail::sq_dist(data.row(i), c, data.cols));
            total += d2[i];
        }
        int pick = -1;
        if (total > 0.0) {
            double r = rng.uniform() * total;
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += d2[i];
                if (r < acc) {
                    pick = i;
                    break;
                }
            }
        }
        if (pick < 0) {
            // all remaining points coincide with chosen centers
            pick = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n)));
        }
        chosen.push_back(pick);
    }
    return chosen;
}

struct KmeansResult {
    DataMatrix centers;
    std::vector<int> assignment;
    double sse = 0.0;
    int iterations = 0;
    std::vector<double> sse_history;  // per-iteration, non-increasing
};

// Lloyd's algorithm with k-means++ init. Empty clusters are re-seeded from
// the points farthest from their assigned centers.
inline KmeansResult kmeans(const DataMatrix& data, int k, Rng& rng, int max_iters = 300, double tol = 1e-10) {
    const int n = data.rows, d = data.cols;
    if (k <= 0 || n < k) throw std::invalid_argument("kmeans: need at least k points");
    KmeansResult res;
    res.centers = DataMatrix(k, d);
    auto seeds = kmeanspp_seed_indices(data, k, rng);
    for (int c = 0; c < k; ++c)
        for (int j = 0; j < d; ++j) res.centers.at(c, j) = data.at(seeds[c], j);

    res.assignment.assign(n, -1);
    std::vector<double> best_d2(n, 0.0);
    double prev_sse = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        double sse = 0.0;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bd = detail::sq_dist(data.row(i), res.centers.row(0), d);
            for (int c = 1; c < k; ++c) {
                double dc = detail::sq_dist(data.row(i), res.centers.row(c), d);
                if (dc < bd) {
                    bd = dc;
                    best = c;
                }
            }
            if (res.assignment[i] != best) {
                res.assignment[i] = best;
                changed = true;
            }
            best_d2[i] = bd;
            sse += bd;
        }
        res.sse = sse;
        res.sse_history.push_back(sse);
        res.iterations = iter + 1;
        if (!changed || std::abs(prev_sse - sse) <= tol * (1.0 + sse)) break;
        prev_sse = sse;

        DataMatrix sums(k, d);
        std::vector<int> counts(k, 0);
        for (int i = 0; i < n; ++i) {
            int c = res.assignment[i];
            ++counts[c];
            const double* x = data.row(i);
            double* s = sums.row(c);
            for (int j = 0; j < d; ++j) s[j] += x[j];
        }
        std::vector<char> taken(n, 0);
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                for (int j = 0; j < d; ++j) res.centers.at(c, j) = sums.at(c, j) / counts[c];
            } else {
                // farthest unused point becomes the new center
                int far = -1;
                double fd = -1.0;
                for (int i = 0; i < n; ++i) {
                    if (!taken[i] && best_d2[i] > fd) {
                        fd = best_d2[i];
                        far = i;
                    }
                }
                if (far >= 0) {
                    taken[far] = 1;
                    for (int j = 0; j < d; ++j) res.centers.at(c, j) = data.at(far, j);
                }
            }
        }
    }
    return res;
}

}  // namespace ids
