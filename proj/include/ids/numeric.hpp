#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ids {

// Dense row-major matrix of doubles. Small helper, not a linear algebra type.
struct DataMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    DataMatrix() = default;
    DataMatrix(int r, int c, double fill = 0.0) : rows(r), cols(c), values(static_cast<std::size_t>(r) * c, fill) {}

    double* row(int i) { return values.data() + static_cast<std::size_t>(i) * cols; }
    const double* row(int i) const { return values.data() + static_cast<std::size_t>(i) * cols; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * cols + j]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * cols + j]; }
};

// Kahan compensated accumulator; keeps sums stable under permutation of inputs.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

inline double l2_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double log_sum_exp(const std::vector<double>& logs) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : logs) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : logs) s += std::exp(x - m);
    return m + std::log(s);
}

// Lower median: element at index (n-1)/2 of the sorted sequence.
template <typename T>
T lower_median(std::vector<T> v) {
    if (v.empty()) throw std::invalid_argument("lower_median: empty");
    std::size_t k = (v.size() - 1) / 2;
    std::nth_element(v.begin(), v.begin() + k, v.end());
    return v[k];
}

}  // namespace ids
