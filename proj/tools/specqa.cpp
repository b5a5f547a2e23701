// specqa: command-line front end over the spectrumqa C API.

#include <spectrumqa/spectrumqa.h>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kQc = 3 };

struct Failure {
    int code;
    std::string message;
};

int exit_code_for(sqa_status s) {
    switch (s) {
        case SQA_OK: return kOk;
        case SQA_ERR_INVALID_ARGUMENT: return kUsage;
        case SQA_ERR_QC: return kQc;
        default: return kData;
    }
}

void check(sqa_status s) {
    if (s != SQA_OK) throw Failure{exit_code_for(s), sqa_last_error()};
}

struct OwnedString {
    char* p = nullptr;
    ~OwnedString() { sqa_string_free(p); }
    std::string str() const { return p ? std::string(p) : std::string(); }
};

using ConfigPtr = std::unique_ptr<sqa_config, decltype(&sqa_config_destroy)>;
using SamplePtr = std::unique_ptr<sqa_sample, decltype(&sqa_sample_destroy)>;
using ScoreSetPtr = std::unique_ptr<sqa_score_set, decltype(&sqa_score_set_destroy)>;

ConfigPtr make_config() {
    sqa_config* raw = nullptr;
    check(sqa_config_create(&raw));
    return ConfigPtr(raw, sqa_config_destroy);
}

int verbosity() {
    const char* v = std::getenv("SPECQA_VERBOSE");
    return v ? std::atoi(v) : 0;
}

std::string default_out_dir() {
    const char* v = std::getenv("SPECQA_OUT");
    return v && *v ? v : "spectrumqa_out";
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Failure{kUsage, "cannot parse " + what + " '" + s + "'"};
    }
}

const char* kCategoryNames[4] = {"descriptive", "localization", "reasoning", "prescriptive"};

// ---- generate ----------------------------------------------------------

struct GenerateArgs {
    std::string out_dir = default_out_dir();
    std::uint64_t seed = 0;
    int images = 0;
    int qa_per_image = 0;
    std::string scenarios;
    int workers = -1;
    std::string config;
    double absolute_threshold = std::numeric_limits<double>::quiet_NaN();
};

int run_generate(const GenerateArgs& a) {
    auto cfg = make_config();
    if (!a.config.empty()) check(sqa_config_load_file(cfg.get(), a.config.c_str()));
    check(sqa_config_set_seed(cfg.get(), a.seed));
    if (a.images > 0) check(sqa_config_set_images(cfg.get(), a.images));
    if (a.qa_per_image > 0) check(sqa_config_set_qa_per_image(cfg.get(), a.qa_per_image));
    if (!a.scenarios.empty()) check(sqa_config_set_scenario_mix(cfg.get(), a.scenarios.c_str()));
    if (a.workers >= 0) check(sqa_config_set_workers(cfg.get(), a.workers));
    if (!std::isnan(a.absolute_threshold)) check(sqa_config_set_absolute_severity(cfg.get(), a.absolute_threshold));

    if (verbosity() > 0) {
        OwnedString json;
        check(sqa_config_to_json(cfg.get(), &json.p));
        std::cerr << "config:\n" << json.str() << "\n";
    }

    sqa_build_summary summary{};
    const sqa_status st = sqa_generate(cfg.get(), a.out_dir.c_str(), &summary);
    if (st != SQA_OK) {
        std::cerr << "error: " << sqa_last_error() << "\n";
        return exit_code_for(st);
    }
    std::cout << "wrote " << summary.images << " images and " << summary.qa_pairs << " QA pairs to " << a.out_dir
              << "\n";
    std::cout << "splits: train " << summary.split[0] << ", val " << summary.split[1] << ", test "
              << summary.split[2] << "\n";
    std::cout << "categories:";
    for (int i = 0; i < 4; ++i) std::cout << " " << kCategoryNames[i] << " " << summary.tallies[i];
    std::cout << "\n";
    if (summary.substitutions > 0)
        std::cout << "prescriptive draws substituted by descriptive: " << summary.substitutions << "\n";
    std::cout << "QC: " << summary.factual_failures << " factual failures, min unique reasoning answers per window "
              << summary.min_unique_reasoning_window << "\n";
    return kOk;
}

// ---- qa / render -------------------------------------------------------

struct SampleArgs {
    std::string scenario = "A";
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    std::string config;
    int count = 10;
    std::string out;
    bool metadata = false;
};

SamplePtr simulate(const SampleArgs& a) {
    auto cfg = make_config();
    if (!a.config.empty()) check(sqa_config_load_file(cfg.get(), a.config.c_str()));
    sqa_sample* raw = nullptr;
    check(sqa_sample_simulate(cfg.get(), a.scenario.c_str(), a.seed, a.index, &raw));
    return SamplePtr(raw, sqa_sample_destroy);
}

int run_qa(const SampleArgs& a) {
    auto sample = simulate(a);
    OwnedString jsonl;
    check(sqa_sample_qa_jsonl(sample.get(), a.count, &jsonl.p));
    std::cout << jsonl.str();
    return kOk;
}

int run_render(const SampleArgs& a) {
    auto sample = simulate(a);
    check(sqa_sample_write_png(sample.get(), a.out.c_str()));
    sqa_labels labels{};
    check(sqa_sample_labels(sample.get(), &labels));
    static const char* severity[] = {"low", "moderate", "high"};
    static const char* quadrant[] = {"NW", "NE", "SW", "SE"};
    std::cout << "wrote " << a.out << "\n"
              << "severity " << severity[labels.severity] << " (positive fraction " << labels.positive_fraction
              << "), hottest quadrant " << quadrant[labels.hottest_quadrant] << ", hotspots " << labels.hotspot_count
              << "\n";
    if (a.metadata) {
        OwnedString json;
        check(sqa_sample_metadata_json(sample.get(), &json.p));
        std::cout << json.str() << "\n";
    }
    return kOk;
}

// ---- score -------------------------------------------------------------

struct ScoreArgs {
    std::string predictions;
    std::string manifest;
    std::string report;
};

int run_score(const ScoreArgs& a) {
    OwnedString json, table;
    check(sqa_score_file(a.predictions.c_str(), a.manifest.c_str(), &json.p, &table.p));
    const std::string report = a.report.empty() ? a.predictions + ".scores.json" : a.report;
    std::ofstream f(report, std::ios::trunc);
    if (!(f << json.str() << "\n")) throw Failure{kData, "cannot write " + report};
    std::cout << table.str() << "report: " << report << "\n";
    return kOk;
}

// ---- composite ---------------------------------------------------------

struct CompositeArgs {
    std::vector<std::string> models;   // NAME=s1,s2,s3,s4
    std::vector<std::string> reports;  // score report files
    std::string scheme;
    std::string weights;
    bool equal_weights = false;
    std::string first = "CNN";
    std::string second = "VLM";
    std::vector<std::string> routings;  // m1,m2,m3,m4
    bool best = false;
    std::string json_out;
};

int run_composite(const CompositeArgs& a) {
    sqa_score_set* raw = nullptr;
    check(sqa_score_set_create(&raw));
    ScoreSetPtr set(raw, sqa_score_set_destroy);

    for (const auto& spec : a.models) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0) throw Failure{kUsage, "--model expects NAME=s1,s2,s3,s4"};
        const std::string name = spec.substr(0, eq);
        const auto parts = split(spec.substr(eq + 1), ',');
        if (parts.size() != 4) throw Failure{kUsage, "--model " + name + ": need four level scores"};
        double scores[4] = {0, 0, 0, 0};
        int present[4] = {1, 1, 1, 1};
        for (int i = 0; i < 4; ++i) {
            if (parts[i] == "NA" || parts[i] == "-") present[i] = 0;
            else scores[i] = parse_number(parts[i], "score");
        }
        check(sqa_score_set_add(set.get(), name.c_str(), scores, present));
    }
    for (const auto& path : a.reports) check(sqa_score_set_add_report(set.get(), path.c_str()));
    if (a.models.empty() && a.reports.empty()) {
        // Built-in per-level inputs: CNN (0.729, 0.657, 0.552, 0), VLM (0.006, 0.336, 0.467, 0.576).
        const double cnn[4] = {0.729, 0.657, 0.552, 0.0};
        const double vlm[4] = {0.006, 0.336, 0.467, 0.576};
        check(sqa_score_set_add(set.get(), a.first.c_str(), cnn, nullptr));
        check(sqa_score_set_add(set.get(), a.second.c_str(), vlm, nullptr));
        std::cout << "no scores given; using reference per-level inputs for " << a.first << " and " << a.second
                  << "\n";
    }

    sqa_report_options opts{};
    std::string scheme = a.equal_weights ? "equal" : a.scheme;
    std::vector<double> weights;
    if (!a.weights.empty()) {
        for (const auto& w : split(a.weights, ',')) weights.push_back(parse_number(w, "weight"));
        if (weights.size() != 4) throw Failure{kUsage, "--weights needs four values"};
        opts.weights = weights.data();
        if (scheme.empty()) scheme = "custom";
    }
    opts.scheme = scheme.empty() ? nullptr : scheme.c_str();
    opts.first_model = a.first.c_str();
    opts.second_model = a.second.c_str();

    std::vector<std::string> extra_storage;
    for (const auto& r : a.routings) {
        auto parts = split(r, ',');
        if (parts.size() != 4) throw Failure{kUsage, "--routing needs four model ids (L1..L4)"};
        for (auto& p : parts) extra_storage.push_back(p);
    }
    std::vector<const char*> extra;
    for (const auto& s : extra_storage) extra.push_back(s.c_str());
    opts.extra_routing = extra.empty() ? nullptr : extra.data();
    opts.extra_count = a.routings.size();
    opts.include_best = a.best ? 1 : 0;

    OwnedString table, json;
    check(sqa_composite_report(set.get(), &opts, &table.p, &json.p));
    std::cout << table.str();
    if (!a.json_out.empty()) {
        std::ofstream f(a.json_out, std::ios::trunc);
        if (!(f << json.str() << "\n")) throw Failure{kData, "cannot write " + a.json_out};
    }
    return kOk;
}

// ---- synth-predict -----------------------------------------------------

struct SynthArgs {
    std::string manifest;
    std::string level = "L1";
    double error_rate = 0.0;
    double flip_rate = 0.25;
    std::uint64_t seed = 0;
    std::string model_id = "synthetic";
    std::string out;
};

int run_synth(const SynthArgs& a) {
    static const char* names[] = {"L1", "L2", "L3", "L4"};
    int level = -1;
    for (int i = 0; i < 4; ++i) {
        if (a.level == names[i]) level = i;
    }
    if (level < 0) throw Failure{kUsage, "--level must be one of L1, L2, L3, L4"};
    check(sqa_synth_predict(a.manifest.c_str(), static_cast<sqa_level>(level), a.error_rate, a.flip_rate, a.seed,
                            a.model_id.c_str(), a.out.c_str()));
    std::cout << "wrote " << a.out << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectrumqa: interference heatmap benchmark generator and scoring harness"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "simulate samples, render heatmaps, build and verify the QA corpus");
    g->add_option("-o,--out", gen.out_dir, "output directory (default $SPECQA_OUT or ./spectrumqa_out)");
    g->add_option("-s,--seed", gen.seed, "master seed")->required();
    g->add_option("-n,--images", gen.images, "number of images (default 300)");
    g->add_option("--qa-per-image", gen.qa_per_image, "QA pairs per image (default 10)");
    g->add_option("--scenarios", gen.scenarios, "round-robin scenario mix, e.g. A,B,C");
    g->add_option("-j,--workers", gen.workers, "worker threads (0 = all cores)");
    g->add_option("-c,--config", gen.config, "JSON configuration file")->check(CLI::ExistingFile);
    g->add_option("--absolute-threshold", gen.absolute_threshold,
                  "label L1 severity from cells above this level in dBm instead of the quantile mask");

    SampleArgs qa;
    auto* q = app.add_subcommand("qa", "print QA pairs for one simulated sample as JSONL");
    q->add_option("--scenario", qa.scenario, "A, B or C");
    q->add_option("-s,--seed", qa.seed, "master seed")->required();
    q->add_option("-i,--index", qa.index, "sample index");
    q->add_option("-n,--count", qa.count, "number of pairs");
    q->add_option("-c,--config", qa.config, "JSON configuration file")->check(CLI::ExistingFile);

    SampleArgs rend;
    auto* r = app.add_subcommand("render", "render one simulated sample to a 448x448 PNG");
    r->add_option("--scenario", rend.scenario, "A, B or C");
    r->add_option("-s,--seed", rend.seed, "master seed")->required();
    r->add_option("-i,--index", rend.index, "sample index");
    r->add_option("-o,--out", rend.out, "PNG path")->required();
    r->add_option("-c,--config", rend.config, "JSON configuration file")->check(CLI::ExistingFile);
    r->add_flag("--metadata", rend.metadata, "also print the metadata record");

    ScoreArgs sc;
    auto* s = app.add_subcommand("score", "score a JSONL prediction file against a manifest");
    s->add_option("predictions", sc.predictions, "prediction JSONL")->required()->check(CLI::ExistingFile);
    s->add_option("manifest", sc.manifest, "manifest.json")->required()->check(CLI::ExistingFile);
    s->add_option("--report", sc.report, "report path (default <predictions>.scores.json)");

    CompositeArgs comp;
    auto* c = app.add_subcommand("composite", "composite scores for routing configurations");
    c->add_option("--model", comp.models, "NAME=s1,s2,s3,s4 per-level scores (NA for absent); repeatable");
    c->add_option("--report", comp.reports, "score report from 'score'; repeatable")->check(CLI::ExistingFile);
    c->add_option("--scheme", comp.scheme, "default, equal, spatial-heavy or reasoning-heavy");
    c->add_option("--weights", comp.weights, "w1,w2,w3,w4");
    c->add_flag("--equal-weights", comp.equal_weights, "shorthand for --scheme equal");
    c->add_option("--first", comp.first, "model for the supervised levels (default CNN)");
    c->add_option("--second", comp.second, "model for the reasoning level (default VLM)");
    c->add_option("--routing", comp.routings, "extra routing m1,m2,m3,m4 for L1..L4; repeatable");
    c->add_flag("--best", comp.best, "add the best routing found by exhaustive search");
    c->add_option("--json", comp.json_out, "write the report as JSON");

    SynthArgs syn;
    auto* sy = app.add_subcommand("synth-predict", "write noisy gold predictions for harness self-tests");
    sy->add_option("manifest", syn.manifest, "manifest.json")->required()->check(CLI::ExistingFile);
    sy->add_option("-l,--level", syn.level, "L1, L2, L3 or L4");
    sy->add_option("-e,--error-rate", syn.error_rate, "probability a record is corrupted")->check(CLI::Range(0.0, 1.0));
    sy->add_option("--flip-rate", syn.flip_rate, "per-cell flip probability for corrupted L3 masks")
        ->check(CLI::Range(0.0, 1.0));
    sy->add_option("-s,--seed", syn.seed, "seed");
    sy->add_option("--model-id", syn.model_id, "model id written into each record");
    sy->add_option("-o,--out", syn.out, "output JSONL")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*g) return run_generate(gen);
        if (*q) return run_qa(qa);
        if (*r) return run_render(rend);
        if (*s) return run_score(sc);
        if (*c) return run_composite(comp);
        if (*sy) return run_synth(syn);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << "\n";
        return f.code;
    }
    return kUsage;
}
