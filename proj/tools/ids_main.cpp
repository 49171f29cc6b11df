// ids: detect taxis with illegal driver substitution activity from GPS
// traces and taximeter trip records.

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ids/config.hpp"
#include "ids/errors.hpp"
#include "ids/pipeline.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"Taxi illegal-driver-substitution detection pipeline"};
    app.fallthrough();  // global options may follow the subcommand
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = "out";
    app.add_option("-c,--config", config_path, "Config file (flat key=value lines)");
    app.add_option("--set", overrides, "Override a config key, e.g. --set gmm.k=4")->take_all();
    app.add_option("-o,--out", out_dir, "Output directory for artifacts");

    // Per-subcommand explicit paths; empty means the default name in --out.
    struct PathOpts {
        std::string trace, trips, labels, events, report, stl, shifts, gmm, vocab, lda, fv, theta, bags, features,
            model, split, scores, metrics, ranked, subset;
        std::string model_name;
    } p;

    auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled fleet");
    auto* ingest = app.add_subcommand("ingest", "Expand trips and geo-match PU/DO events to the trace");
    ingest->add_option("--trace", p.trace, "Trace CSV");
    ingest->add_option("--trips", p.trips, "Trip CSV");
    auto* extract = app.add_subcommand("extract-stl", "Detect sleep episodes and classify shifts");
    extract->add_option("--trace", p.trace, "Trace CSV");
    extract->add_option("--events", p.events, "Matched events CSV");
    auto* fitgmm = app.add_subcommand("fit-gmm", "Fit the sleep-behavior Gaussian mixture");
    fitgmm->add_option("--stl", p.stl, "STL CSV");
    auto* fitlda = app.add_subcommand("fit-lda", "Build the pickup vocabulary and fit the topic model");
    fitlda->add_option("--events", p.events, "Matched events CSV");
    fitlda->add_option("--shifts", p.shifts, "Shift classes CSV");
    auto* encode = app.add_subcommand("encode", "Encode daily behaviors (Fisher vectors, topic mixtures)");
    encode->add_option("--stl", p.stl, "STL CSV");
    encode->add_option("--gmm", p.gmm, "GMM model file");
    encode->add_option("--events", p.events, "Matched events CSV");
    encode->add_option("--shifts", p.shifts, "Shift classes CSV");
    encode->add_option("--vocab", p.vocab, "Vocabulary file");
    encode->add_option("--lda", p.lda, "LDA model file");
    auto* features = app.add_subcommand("features", "Self-similarity, multi-scale pooling, bag assembly");
    features->add_option("--fv", p.fv, "Daily Fisher-vector CSV");
    features->add_option("--theta", p.theta, "Daily topic CSV");
    auto* train = app.add_subcommand("train", "Train a classifier on the bags");
    train->add_option("--bags", p.bags, "Bag file");
    train->add_option("--labels", p.labels, "Labels CSV");
    train->add_option("-m,--model", p.model_name, "mcmil | mil | mil-stl | mil-pu | logistic");
    train->add_option("--model-out", p.model, "Model output path");
    train->add_option("--split-out", p.split, "Split output path");
    auto* score = app.add_subcommand("score", "Score bags with a trained model");
    score->add_option("--bags", p.bags, "Bag file");
    score->add_option("--model", p.model, "Model file");
    score->add_option("--scores-out", p.scores, "Scores output path");
    auto* evaluate = app.add_subcommand("evaluate", "Compute AUC/AP and the ranked suspect list");
    evaluate->add_option("--scores", p.scores, "Scores CSV");
    evaluate->add_option("--labels", p.labels, "Labels CSV");
    evaluate->add_option("--split", p.split, "Split CSV (optional)");
    evaluate->add_option("--subset", p.subset, "Subset to evaluate (train|test)");
    auto* pipeline = app.add_subcommand("pipeline", "Run every stage end to end");
    (void)pipeline;

    CLI11_PARSE(app, argc, argv);

    try {
        ids::PipelineConfig cfg = ids::PipelineConfig::load(config_path, overrides);
        fs::create_directories(out_dir);
        ids::stages::PipelinePaths d = ids::stages::PipelinePaths::in_dir(out_dir);
        auto or_default = [](const std::string& given, const std::string& def) { return given.empty() ? def : given; };

        if (synth->parsed()) {
            ids::stages::run_synth(cfg, d.trace, d.trips, d.labels, d.manifest);
        } else if (ingest->parsed()) {
            ids::stages::run_ingest(cfg, or_default(p.trace, d.trace), or_default(p.trips, d.trips), d.events,
                                    d.report, d.manifest);
        } else if (extract->parsed()) {
            ids::stages::run_extract_stl(cfg, or_default(p.trace, d.trace), or_default(p.events, d.events), d.stl,
                                         d.shifts, d.report, d.manifest);
        } else if (fitgmm->parsed()) {
            ids::stages::run_fit_gmm(cfg, or_default(p.stl, d.stl), d.gmm, d.manifest);
        } else if (fitlda->parsed()) {
            ids::stages::run_fit_lda(cfg, or_default(p.events, d.events), or_default(p.shifts, d.shifts), d.vocab,
                                     d.lda, d.manifest);
        } else if (encode->parsed()) {
            ids::stages::run_encode(cfg, or_default(p.stl, d.stl), or_default(p.gmm, d.gmm),
                                    or_default(p.events, d.events), or_default(p.shifts, d.shifts),
                                    or_default(p.vocab, d.vocab), or_default(p.lda, d.lda), d.fv, d.theta, d.manifest);
        } else if (features->parsed()) {
            ids::stages::run_features(cfg, or_default(p.fv, d.fv), or_default(p.theta, d.theta), d.bags, d.features,
                                      d.manifest);
        } else if (train->parsed()) {
            std::string name = p.model_name.empty() ? cfg.train_model : p.model_name;
            ids::stages::run_train(cfg, or_default(p.bags, d.bags), or_default(p.labels, d.labels), name,
                                   or_default(p.model, d.model), or_default(p.split, d.split), d.manifest);
        } else if (score->parsed()) {
            ids::stages::run_score(cfg, or_default(p.bags, d.bags), or_default(p.model, d.model),
                                   or_default(p.scores, d.scores), d.manifest);
        } else if (evaluate->parsed()) {
            auto res = ids::stages::run_evaluate(cfg, or_default(p.scores, d.scores), or_default(p.labels, d.labels),
                                                 p.split, p.subset, or_default(p.metrics, d.metrics),
                                                 or_default(p.ranked, d.ranked), d.manifest);
            std::cout << "auc=" << res.auc << " ap=" << res.ap << " n_pos=" << res.n_pos << " n_neg=" << res.n_neg
                      << "\n";
        } else if (pipeline->parsed()) {
            auto res = ids::stages::run_pipeline(cfg, out_dir);
            std::cout << "auc=" << res.auc << " ap=" << res.ap << " n_pos=" << res.n_pos << " n_neg=" << res.n_neg
                      << "\n";
        }
    } catch (const ids::MissingArtifactError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ids::ArtifactVersionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ids::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
