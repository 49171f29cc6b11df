#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ids/gmm_fv.hpp"
#include "ids/rng.hpp"
#include "oracles.hpp"

using namespace ids;

namespace {

GmmModel random_model(int k, int d, Rng& rng) {
    GmmModel m;
    m.k = k;
    m.d = d;
    m.means = DataMatrix(k, d);
    m.vars = DataMatrix(k, d);
    std::vector<double> raw(k);
    double sum = 0.0;
    for (int c = 0; c < k; ++c) {
        raw[c] = 0.2 + rng.uniform();
        sum += raw[c];
        for (int j = 0; j < d; ++j) {
            m.means.at(c, j) = rng.uniform(-2.0, 2.0);
            double sigma = rng.uniform(0.6, 1.6);
            m.vars.at(c, j) = sigma * sigma;
        }
    }
    m.weights.resize(k);
    m.alphas.resize(k);
    for (int c = 0; c < k; ++c) {
        m.weights[c] = raw[c] / sum;
        m.alphas[c] = std::log(m.weights[c]);
    }
    m.stats.mean.assign(d, 0.0);
    m.stats.stddev.assign(d, 1.0);
    return m;
}

struct RawParams {
    std::vector<double> weights;
    std::vector<std::vector<double>> means;
    std::vector<std::vector<double>> sigmas;
};

RawParams raw_params(const GmmModel& m) {
    RawParams p;
    p.weights = m.weights;
    p.means.resize(m.k);
    p.sigmas.resize(m.k);
    for (int c = 0; c < m.k; ++c) {
        p.means[c].assign(m.means.row(c), m.means.row(c) + m.d);
        p.sigmas[c].resize(m.d);
        for (int j = 0; j < m.d; ++j) p.sigmas[c][j] = std::sqrt(m.vars.at(c, j));
    }
    return p;
}

DataMatrix random_bucket(const GmmModel& m, int t, Rng& rng) {
    DataMatrix b(t, m.d);
    for (int i = 0; i < t; ++i) {
        int c = static_cast<int>(rng.bounded(m.k));
        for (int j = 0; j < m.d; ++j)
            b.at(i, j) = m.means.at(c, j) + rng.normal(0.0, std::sqrt(m.vars.at(c, j)));
    }
    return b;
}

}  // namespace

TEST_CASE("fit_gmm recovers two tight clusters") {
    Rng rng(100);
    DataMatrix data(400, 4);
    for (int i = 0; i < data.rows; ++i) {
        double center = i < 200 ? -3.0 : 3.0;
        for (int j = 0; j < 4; ++j) data.at(i, j) = center + rng.normal(0.0, 0.3);
    }
    GmmFitInfo info;
    GmmModel m = fit_gmm(data, 2, 42, {}, &info);
    // each true center recovered by one component
    auto near = [&](double target) {
        for (int c = 0; c < 2; ++c) {
            bool ok = true;
            for (int j = 0; j < 4; ++j)
                if (std::abs(m.means.at(c, j) - target) > 0.5) ok = false;
            if (ok) return true;
        }
        return false;
    };
    CHECK(near(-3.0));
    CHECK(near(3.0));
    CHECK(m.weights[0] == Catch::Approx(0.5).margin(0.05));
    CHECK(m.weights[1] == Catch::Approx(0.5).margin(0.05));
    double wsum = m.weights[0] + m.weights[1];
    CHECK(std::abs(wsum - 1.0) < 1e-12);
}

TEST_CASE("fit_gmm K=1 equals the closed form") {
    Rng rng(101);
    DataMatrix data(300, 4);
    for (int i = 0; i < data.rows; ++i)
        for (int j = 0; j < 4; ++j) data.at(i, j) = rng.normal(j, 1.0 + j);
    GmmModel m = fit_gmm(data, 1, 7, {});
    for (int j = 0; j < 4; ++j) {
        KahanSum mean, var;
        for (int i = 0; i < data.rows; ++i) mean.add(data.at(i, j));
        double mu = mean.sum / data.rows;
        for (int i = 0; i < data.rows; ++i) var.add((data.at(i, j) - mu) * (data.at(i, j) - mu));
        CHECK(m.means.at(0, j) == Catch::Approx(mu).margin(1e-9));
        CHECK(m.vars.at(0, j) == Catch::Approx(var.sum / data.rows).epsilon(1e-9));
    }
    CHECK(m.weights[0] == 1.0);
}

TEST_CASE("EM log-likelihood is monotone non-decreasing") {
    Rng rng(102);
    DataMatrix data(600, 4);
    for (int i = 0; i < data.rows; ++i)
        for (int j = 0; j < 4; ++j) data.at(i, j) = rng.normal(static_cast<double>(i % 5), 0.7);
    GmmFitOptions opts;
    opts.max_iters = 50;
    opts.tol = 0.0;  // run all iterations
    GmmFitInfo info;
    fit_gmm(data, 4, 9, opts, &info);
    REQUIRE(info.ll_history.size() >= 2);
    for (std::size_t i = 1; i < info.ll_history.size(); ++i)
        CHECK(info.ll_history[i] >= info.ll_history[i - 1] - 1e-9);
    CHECK(info.reseeds == 0);
}

TEST_CASE("fit_gmm refuses undersized data") {
    DataMatrix data(19, 4);
    CHECK_THROWS_AS(fit_gmm(data, 2, 1, {}), std::invalid_argument);
}

TEST_CASE("responsibilities") {
    Rng rng(103);
    SECTION("K=1 is certain") {
        GmmModel m = random_model(1, 4, rng);
        double x[4] = {0, 0, 0, 0};
        auto g = responsibilities(m, x);
        REQUIRE(g.size() == 1);
        CHECK(g[0] == 1.0);
    }
    SECTION("point at a far-separated mean") {
        GmmModel m = random_model(2, 4, rng);
        for (int j = 0; j < 4; ++j) {
            m.means.at(0, j) = -30.0;
            m.means.at(1, j) = 30.0;
            m.vars.at(0, j) = m.vars.at(1, j) = 1.0;
        }
        m.weights = {0.5, 0.5};
        auto g = responsibilities(m, m.means.row(0));
        CHECK(g[0] > 0.99);
        CHECK(g[0] + g[1] == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("symmetric point splits evenly") {
        GmmModel m = random_model(2, 4, rng);
        for (int j = 0; j < 4; ++j) {
            m.means.at(0, j) = -1.0;
            m.means.at(1, j) = 1.0;
            m.vars.at(0, j) = m.vars.at(1, j) = 1.0;
        }
        m.weights = {0.5, 0.5};
        double x[4] = {0, 0, 0, 0};
        auto g = responsibilities(m, x);
        CHECK(g[0] == Catch::Approx(0.5).margin(1e-12));
        CHECK(g[1] == Catch::Approx(0.5).margin(1e-12));
    }
}

TEST_CASE("FV of a point at the single component mean") {
    Rng rng(104);
    GmmModel m = random_model(1, 4, rng);
    DataMatrix bucket(1, 4);
    for (int j = 0; j < 4; ++j) bucket.at(0, j) = m.means.at(0, j);
    auto raw = fv_gradient_sums(m, bucket);
    for (int j = 0; j < 4; ++j) {
        CHECK(raw[j] == 0.0);  // mu gradient vanishes at the mean
        CHECK(raw[4 + j] == Catch::Approx(-1.0 / std::sqrt(m.vars.at(0, j))));
    }
}

TEST_CASE("FV gradients match central finite differences") {
    Rng rng(105);
    const double h = 1e-5;
    for (int trial = 0; trial < 25; ++trial) {
        int k = 1 + static_cast<int>(rng.bounded(8));
        GmmModel m = random_model(k, 4, rng);
        DataMatrix bucket = random_bucket(m, 1 + static_cast<int>(rng.bounded(6)), rng);
        auto grad = fv_gradient_sums(m, bucket);
        RawParams base = raw_params(m);
        std::vector<std::vector<double>> bpts(bucket.rows);
        for (int i = 0; i < bucket.rows; ++i) bpts[i].assign(bucket.row(i), bucket.row(i) + 4);
        for (int c = 0; c < k; ++c) {
            for (int j = 0; j < 4; ++j) {
                RawParams up = base, dn = base;
                up.means[c][j] += h;
                dn.means[c][j] -= h;
                double fd_mu = (oracles::gmm_bucket_log_likelihood(up.weights, up.means, up.sigmas, bpts) -
                                oracles::gmm_bucket_log_likelihood(dn.weights, dn.means, dn.sigmas, bpts)) /
                               (2 * h);
                CHECK(oracles::rel_err(grad[c * 4 + j], fd_mu) <= 1e-5);
                up = base;
                dn = base;
                up.sigmas[c][j] += h;
                dn.sigmas[c][j] -= h;
                double fd_sigma = (oracles::gmm_bucket_log_likelihood(up.weights, up.means, up.sigmas, bpts) -
                                   oracles::gmm_bucket_log_likelihood(dn.weights, dn.means, dn.sigmas, bpts)) /
                                  (2 * h);
                CHECK(oracles::rel_err(grad[k * 4 + c * 4 + j], fd_sigma) <= 1e-5);
            }
        }
    }
}

TEST_CASE("fisher_vector output shape, norm, and missing marker") {
    Rng rng(106);
    GmmModel m = random_model(8, 4, rng);
    DataMatrix bucket = random_bucket(m, 5, rng);
    auto fv = fisher_vector(m, bucket);
    REQUIRE(fv.has_value());
    CHECK(fv->values.size() == 2u * 4u * 8u);  // 64
    CHECK(fv->bucket_size == 5);
    CHECK(l2_norm(fv->values) == Catch::Approx(1.0).margin(1e-9));
    CHECK(!fisher_vector(m, DataMatrix(0, 4)).has_value());
}

TEST_CASE("FV is permutation invariant with compensated summation") {
    Rng rng(107);
    GmmModel m = random_model(6, 4, rng);
    DataMatrix bucket = random_bucket(m, 40, rng);
    auto a = fv_gradient_sums(m, bucket);
    // reverse the bucket
    DataMatrix rev(bucket.rows, 4);
    for (int i = 0; i < bucket.rows; ++i)
        for (int j = 0; j < 4; ++j) rev.at(i, j) = bucket.at(bucket.rows - 1 - i, j);
    auto b = fv_gradient_sums(m, rev);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
}

TEST_CASE("model file round-trips bit-exactly") {
    Rng rng(108);
    GmmModel m = random_model(5, 4, rng);
    const std::string p1 = "gmm_rt1.txt", p2 = "gmm_rt2.txt";
    m.save(p1);
    GmmModel loaded = GmmModel::load(p1);
    loaded.save(p2);
    std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
    CHECK(!s1.empty());
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}

TEST_CASE("loader rejects a mismatched version line") {
    const std::string path = "gmm_badver.txt";
    {
        std::ofstream f(path);
        f << "ids_gmm_model v9\nK 1\n";
    }
    CHECK_THROWS_AS(GmmModel::load(path), ArtifactVersionError);
    std::filesystem::remove(path);
}
