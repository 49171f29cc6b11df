#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "ids/config.hpp"
#include "ids/pipeline.hpp"

using namespace ids;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

// Overrides for a fast end-to-end run.
std::vector<std::string> tiny_fleet_overrides() {
    return {"seed=9",          "synth.n_taxis=24",  "synth.n_days=36", "synth.ids_fraction=0.25",
            "msp.range_days=0", "gmm.k=4",          "lda.words=16",    "lda.topics=6",
            "lda.alpha=0.5",    "lda.fit_iters=80", "lda.infer_iters=30", "mcmil.rounds=12"};
}

int run_cli(const std::string& args) {
    const char* cli = std::getenv("IDS_CLI");
    REQUIRE(cli != nullptr);
    std::string cmd = std::string(cli) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("config: unknown keys and out-of-range values are rejected with the offending key") {
    CHECK_THROWS_AS(PipelineConfig::load("", {"no.such.key=1"}), ConfigError);
    try {
        PipelineConfig::load("", {"gmm.k=0"});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key == "gmm.k");
    }
    CHECK_THROWS_AS(PipelineConfig::load("", {"synth.ids_fraction=1.5"}), ConfigError);
    CHECK_THROWS_AS(PipelineConfig::load("", {"msp.scales=3,5"}), ConfigError);  // 16 % 3 != 0
    CHECK_THROWS_AS(PipelineConfig::load("", {"train.model=forest"}), ConfigError);
    CHECK_THROWS_AS(PipelineConfig::load("", {"mcmil.weight_mode=other"}), ConfigError);
}

TEST_CASE("config file parsing with comments and overrides") {
    auto dir = fs::temp_directory_path() / "ids_cli_cfg";
    fs::create_directories(dir);
    std::string path = (dir / "cfg.txt").string();
    {
        std::ofstream f(path);
        f << "# comment line\n";
        f << "gmm.k = 6   # trailing comment\n";
        f << "\n";
        f << "lda.topics=12\n";
    }
    PipelineConfig cfg = PipelineConfig::load(path, {"lda.topics=9"});
    CHECK(cfg.gmm_k == 6);
    CHECK(cfg.lda_topics == 9);  // override wins
    CHECK(cfg.effective_lda_alpha() == Catch::Approx(50.0 / 9));
    PipelineConfig other = PipelineConfig::load(path);
    CHECK(other.hash() != cfg.hash());
    fs::remove_all(dir);
}

TEST_CASE("pipeline is reproducible and all model variants are scoreable") {
    auto base = fs::temp_directory_path() / "ids_cli_pipe";
    fs::remove_all(base);
    PipelineConfig cfg = PipelineConfig::load("", tiny_fleet_overrides());
    auto r1 = stages::run_pipeline(cfg, (base / "a").string());
    auto r2 = stages::run_pipeline(cfg, (base / "b").string());
    CHECK(r1.auc == r2.auc);
    CHECK(r1.ap == r2.ap);
    for (const char* f : {"model.txt", "metrics.txt", "scores.csv", "gmm_model.txt", "lda_model.txt", "bags.txt"})
        CHECK(slurp((base / "a" / f).string()) == slurp((base / "b" / f).string()));
    CHECK(r1.auc >= 0.9);  // trivially separable tiny fleet

    // alternative trainers on the same artifacts
    auto pa = stages::PipelinePaths::in_dir((base / "a").string());
    for (const std::string name : {"mil", "mil-stl", "mil-pu", "logistic"}) {
        std::string model = (base / "a" / ("model_" + name + ".txt")).string();
        std::string split = (base / "a" / ("split_" + name + ".csv")).string();
        std::string scores = (base / "a" / ("scores_" + name + ".csv")).string();
        stages::run_train(cfg, pa.bags, pa.labels, name, model, split);
        stages::run_score(cfg, pa.bags, model, scores);
        auto loaded = load_scores_csv(scores);
        CHECK(loaded.size() == load_scores_csv(pa.scores).size());
        CHECK(slurp(split) == slurp(pa.split));  // split depends only on labels and seed
    }
    fs::remove_all(base);
}

TEST_CASE("missing artifacts and bad config map to exit codes 2 and 3") {
    auto dir = fs::temp_directory_path() / "ids_cli_codes";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::string out = " -o " + (dir / "out").string();

    CHECK(run_cli("evaluate" + out) == 2);                       // no scores/labels exist
    CHECK(run_cli("fit-gmm" + out) == 2);                        // missing stl.csv
    CHECK(run_cli("synth --set no.such.key=1" + out) == 3);      // unknown key
    CHECK(run_cli("synth --set gmm.k=-2" + out) == 3);           // out of range
    CHECK(run_cli("synth --set synth.n_taxis=5 --set synth.n_days=3 --set synth.ids_fraction=0" + out) == 0);
    fs::remove_all(dir);
}

TEST_CASE("version-tampered artifacts are rejected with exit code 2") {
    auto dir = fs::temp_directory_path() / "ids_cli_ver";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::string out_dir = (dir / "out").string();
    PipelineConfig cfg = PipelineConfig::load(
        "", {"seed=3", "synth.n_taxis=12", "synth.n_days=20", "synth.ids_fraction=0.25", "msp.range_days=0",
             "gmm.k=2", "lda.words=8", "lda.topics=4", "lda.alpha=0.5", "lda.fit_iters=40", "lda.infer_iters=20",
             "mcmil.rounds=4"});
    stages::run_pipeline(cfg, out_dir);
    // corrupt the model version line
    std::string model_path = out_dir + "/model.txt";
    std::string contents = slurp(model_path);
    contents.replace(contents.find("v1"), 2, "v7");
    std::ofstream(model_path, std::ios::binary) << contents;
    CHECK(run_cli("score -o " + out_dir + " --model " + model_path) == 2);
    fs::remove_all(dir);
}

TEST_CASE("evaluate subset filtering uses the split file") {
    auto dir = fs::temp_directory_path() / "ids_cli_eval";
    fs::remove_all(dir);
    PipelineConfig cfg = PipelineConfig::load("", tiny_fleet_overrides());
    std::string out_dir = (dir / "out").string();
    stages::run_pipeline(cfg, out_dir);
    auto p = stages::PipelinePaths::in_dir(out_dir);
    auto all = stages::run_evaluate(cfg, p.scores, p.labels, "", "", (dir / "m_all.txt").string(),
                                    (dir / "r_all.csv").string());
    auto test_only = stages::run_evaluate(cfg, p.scores, p.labels, p.split, "test", (dir / "m_test.txt").string(),
                                          (dir / "r_test.csv").string());
    CHECK(all.n_pos + all.n_neg > test_only.n_pos + test_only.n_neg);
    std::string metrics = slurp((dir / "m_test.txt").string());
    CHECK(metrics.find("auc=") != std::string::npos);
    CHECK(metrics.find("ap=") != std::string::npos);
    CHECK(metrics.find("n_pos=") != std::string::npos);
    fs::remove_all(dir);
}
