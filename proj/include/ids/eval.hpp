#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ids {

struct ScoredTaxi {
    std::string taxi_id;
    double score = 0.0;
    std::optional<int> label;
};

// ROC-AUC via the rank statistic: the probability that a random positive
// outscores a random negative, ties counting one half. Needs both classes.
inline double roc_auc(const std::vector<ScoredTaxi>& scored) {
    std::vector<std::pair<double, int>> rows;
    for (const auto& s : scored)
        if (s.label.has_value()) rows.emplace_back(s.score, *s.label);
    long n_pos = 0, n_neg = 0;
    for (const auto& [sc, l] : rows) (l == 1 ? n_pos : n_neg) += 1;
    if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("roc_auc: needs both classes");
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    // midranks over score ties
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < rows.size()) {
        std::size_t j = i;
        while (j < rows.size() && rows[j].first == rows[i].first) ++j;
        double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));  // 1-based
        for (std::size_t t = i; t < j; ++t)
            if (rows[t].second == 1) rank_sum_pos += midrank;
        i = j;
    }
    return (rank_sum_pos - 0.5 * n_pos * (n_pos + 1)) / (static_cast<double>(n_pos) * n_neg);
}

// Step-interpolated AP over the score-descending ranking; score ties are
// broken by taxi_id so the value is deterministic. Needs >= 1 positive.
inline double average_precision(const std::vector<ScoredTaxi>& scored) {
    std::vector<const ScoredTaxi*> rows;
    long n_pos = 0;
    for (const auto& s : scored)
        if (s.label.has_value()) {
            rows.push_back(&s);
            n_pos += *s.label == 1;
        }
    if (n_pos == 0) throw std::invalid_argument("average_precision: needs at least one positive");
    std::sort(rows.begin(), rows.end(), [](const ScoredTaxi* a, const ScoredTaxi* b) {
        if (a->score != b->score) return a->score > b->score;
        return a->taxi_id < b->taxi_id;
    });
    double ap = 0.0;
    long tp = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (*rows[r]->label == 1) {
            ++tp;
            ap += static_cast<double>(tp) / static_cast<double>(r + 1);
        }
    }
    return ap / n_pos;
}

// Descending by score, ties by taxi_id; stable and deterministic.
inline std::vector<ScoredTaxi> rank_suspects(std::vector<ScoredTaxi> scored) {
    std::sort(scored.begin(), scored.end(), [](const ScoredTaxi& a, const ScoredTaxi& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.taxi_id < b.taxi_id;
    });
    return scored;
}

}  // namespace ids
