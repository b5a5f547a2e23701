#include "spectrumqa/spectrumqa.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include <fmt/format.h>

#include "core/composite.hpp"
#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/render.hpp"
#include "core/sample.hpp"
#include "core/scoring.hpp"

struct sqa_config {
    sqa::DatasetConfig config;
};

struct sqa_sample {
    sqa::SampleProducts products;
    sqa::SampleMetadata metadata;
    std::uint64_t master_seed = 0;
};

struct sqa_score_set {
    sqa::ModelScores scores;
};

namespace {

thread_local std::string g_last_error;

sqa_status to_status(sqa::ErrorKind kind) {
    switch (kind) {
        case sqa::ErrorKind::invalid_argument: return SQA_ERR_INVALID_ARGUMENT;
        case sqa::ErrorKind::data_error: return SQA_ERR_DATA;
        case sqa::ErrorKind::qc_failure: return SQA_ERR_QC;
        case sqa::ErrorKind::io_error: return SQA_ERR_IO;
    }
    return SQA_ERR_INTERNAL;
}

template <typename F>
sqa_status guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return SQA_OK;
    } catch (const sqa::Error& e) {
        g_last_error = e.what();
        return to_status(e.kind());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SQA_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return SQA_ERR_INTERNAL;
    }
}

void require(bool ok, const std::string& what) {
    if (!ok) sqa::fail(sqa::ErrorKind::invalid_argument, what);
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

sqa::Level to_level(sqa_level l) {
    require(l >= SQA_L1 && l <= SQA_L4, "level out of range");
    return static_cast<sqa::Level>(l);
}

}  // namespace

extern "C" {

const char* sqa_version(void) { return "1.0.0"; }

const char* sqa_last_error(void) { return g_last_error.c_str(); }

void sqa_string_free(char* s) { std::free(s); }

sqa_status sqa_config_create(sqa_config** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = new sqa_config{};
    });
}

void sqa_config_destroy(sqa_config* cfg) { delete cfg; }

sqa_status sqa_config_load_file(sqa_config* cfg, const char* path) {
    return guarded([&] {
        require(cfg && path, "null argument");
        cfg->config = sqa::load_config_file(path, cfg->config);
    });
}

sqa_status sqa_config_apply_json(sqa_config* cfg, const char* json) {
    return guarded([&] {
        require(cfg && json, "null argument");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json);
        } catch (const nlohmann::json::parse_error& e) {
            sqa::fail(sqa::ErrorKind::data_error, e.what());
        }
        sqa::DatasetConfig next = cfg->config;
        sqa::apply_config_json(j, next);
        cfg->config = std::move(next);
    });
}

sqa_status sqa_config_set_seed(sqa_config* cfg, uint64_t seed) {
    return guarded([&] {
        require(cfg, "null config");
        cfg->config.master_seed = seed;
    });
}

sqa_status sqa_config_set_images(sqa_config* cfg, int images) {
    return guarded([&] {
        require(cfg, "null config");
        require(images >= 1, "images must be >= 1");
        cfg->config.images = images;
    });
}

sqa_status sqa_config_set_qa_per_image(sqa_config* cfg, int count) {
    return guarded([&] {
        require(cfg, "null config");
        require(count >= 1, "qa_per_image must be >= 1");
        cfg->config.qa_per_image = count;
    });
}

sqa_status sqa_config_set_workers(sqa_config* cfg, int workers) {
    return guarded([&] {
        require(cfg, "null config");
        require(workers >= 0, "workers must be >= 0");
        cfg->config.workers = workers;
    });
}

sqa_status sqa_config_set_scenario_mix(sqa_config* cfg, const char* mix) {
    return guarded([&] {
        require(cfg && mix, "null argument");
        std::vector<sqa::ScenarioId> ids;
        std::string_view rest(mix);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            auto token = rest.substr(0, comma);
            while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
            while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
            auto id = sqa::parse_scenario(token);
            if (!id) sqa::fail(sqa::ErrorKind::invalid_argument, "unknown scenario '" + std::string(token) + "'");
            ids.push_back(*id);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        require(!ids.empty(), "scenario mix is empty");
        cfg->config.scenario_mix = std::move(ids);
    });
}

sqa_status sqa_config_set_absolute_severity(sqa_config* cfg, double threshold_dbm) {
    return guarded([&] {
        require(cfg, "null config");
        if (std::isnan(threshold_dbm)) {
            cfg->config.sim.labels.severity_mode = sqa::SeverityMode::quantile;
        } else {
            require(std::isfinite(threshold_dbm), "threshold must be finite");
            cfg->config.sim.labels.severity_mode = sqa::SeverityMode::absolute;
            cfg->config.sim.labels.absolute_threshold_dbm = threshold_dbm;
        }
    });
}

sqa_status sqa_config_to_json(const sqa_config* cfg, char** out_json) {
    return guarded([&] {
        require(cfg && out_json, "null argument");
        *out_json = dup_string(sqa::config_to_json(cfg->config).dump(2));
    });
}

sqa_status sqa_sample_simulate(const sqa_config* cfg, const char* scenario, uint64_t master_seed,
                               uint64_t sample_index, sqa_sample** out) {
    return guarded([&] {
        require(scenario && out, "null argument");
        const sqa::DatasetConfig defaults;
        const sqa::DatasetConfig& c = cfg ? cfg->config : defaults;
        const auto id = sqa::parse_scenario(scenario);
        if (!id) sqa::fail(sqa::ErrorKind::invalid_argument, "unknown scenario '" + std::string(scenario) + "'");
        auto sample = std::make_unique<sqa_sample>();
        sample->products = sqa::simulate_sample(c.scenarios.at(*id), master_seed, sample_index, c.sim);
        sample->metadata = sqa::extract_metadata(sqa::sample_id_for(sample_index), sample->products);
        sample->master_seed = master_seed;
        *out = sample.release();
    });
}

void sqa_sample_destroy(sqa_sample* sample) { delete sample; }

sqa_status sqa_sample_labels(const sqa_sample* sample, sqa_labels* out) {
    return guarded([&] {
        require(sample && out, "null argument");
        const auto& l = sample->products.labels;
        out->positive_fraction = l.positive_fraction;
        out->severity = static_cast<int>(l.severity);
        out->hottest_quadrant = static_cast<int>(l.hottest_quadrant);
        for (int i = 0; i < 4; ++i) out->quadrant_means[i] = l.quadrant_means[static_cast<std::size_t>(i)];
        out->hotspot_count = sample->products.hotspots.size();
    });
}

sqa_status sqa_sample_grid(const sqa_sample* sample, double* out, size_t n) {
    return guarded([&] {
        require(sample && out, "null argument");
        const auto& cells = sample->products.grid.cells;
        require(n >= cells.size(), "output buffer too small");
        std::copy(cells.begin(), cells.end(), out);
    });
}

sqa_status sqa_sample_mask(const sqa_sample* sample, int resolution, uint8_t* out, size_t n) {
    return guarded([&] {
        require(sample && out, "null argument");
        require(resolution == sqa::kGridSide || resolution == sqa::kCoarseSide, "resolution must be 64 or 16");
        const auto& mask = resolution == sqa::kGridSide ? sample->products.labels.mask64 : sample->products.labels.mask16;
        require(n >= mask.cells.size(), "output buffer too small");
        std::copy(mask.cells.begin(), mask.cells.end(), out);
    });
}

sqa_status sqa_sample_write_png(const sqa_sample* sample, const char* path) {
    return guarded([&] {
        require(sample && path, "null argument");
        sqa::write_png(sqa::render_heatmap(sample->products.grid), path);
    });
}

sqa_status sqa_sample_metadata_json(const sqa_sample* sample, char** out_json) {
    return guarded([&] {
        require(sample && out_json, "null argument");
        auto j = sqa::metadata_to_json(sample->metadata);
        j["transmitters"] = sqa::transmitters_to_json(sample->products.transmitters)["transmitters"];
        *out_json = dup_string(j.dump(2));
    });
}

sqa_status sqa_sample_qa_jsonl(const sqa_sample* sample, int count, char** out_jsonl) {
    return guarded([&] {
        require(sample && out_jsonl, "null argument");
        sqa::Rng rng(sample->master_seed, sample->products.transmitters.sample_index, sqa::StreamTag::qa);
        const auto batch = sqa::generate_qa(sample->metadata, sqa::default_templates(), rng, count);
        std::string text;
        for (const auto& p : batch.pairs) text += sqa::pair_to_json(p).dump() + "\n";
        *out_jsonl = dup_string(text);
    });
}

sqa_status sqa_generate(const sqa_config* cfg, const char* out_dir, sqa_build_summary* summary) {
    auto fill = [&](const sqa::BuildResult& r) {
        if (!summary) return;
        *summary = sqa_build_summary{};
        summary->images = r.samples.size();
        summary->qa_pairs = r.pairs.size();
        for (std::size_t i = 0; i < 4; ++i) summary->tallies[i] = r.tallies[i];
        for (const auto& s : r.samples) ++summary->split[static_cast<std::size_t>(s.split)];
        summary->factual_failures = r.qc.factual_failures;
        summary->min_unique_reasoning_window =
            r.qc.min_unique_in_window[static_cast<std::size_t>(sqa::QaCategory::reasoning)];
        summary->substitutions = r.substitutions;
    };
    return guarded([&] {
        require(cfg && out_dir, "null argument");
        require(std::strlen(out_dir) > 0, "output directory is empty");
        fill(sqa::build_dataset(cfg->config, out_dir));
    });
}

sqa_status sqa_score_file(const char* predictions_path, const char* manifest_path, char** out_report_json,
                          char** out_table) {
    return guarded([&] {
        require(predictions_path && manifest_path, "null argument");
        const auto gold = sqa::load_gold(manifest_path);
        const auto records = sqa::read_predictions_file(predictions_path);
        const auto scores = sqa::score_predictions(records, gold);
        std::string json = sqa::scores_to_json(scores).dump(2);
        std::string table = sqa::scores_table(scores);
        if (out_report_json) *out_report_json = dup_string(json);
        if (out_table) *out_table = dup_string(table);
    });
}

sqa_status sqa_synth_predict(const char* manifest_path, sqa_level level, double error_rate, double flip_rate,
                             uint64_t seed, const char* model_id, const char* out_path) {
    return guarded([&] {
        require(manifest_path && out_path, "null argument");
        sqa::SynthOptions opts;
        opts.error_rate = error_rate;
        opts.flip_rate = flip_rate;
        opts.seed = seed;
        if (model_id) opts.model_id = model_id;
        const auto gold = sqa::load_gold(manifest_path);
        sqa::write_predictions_file(out_path, sqa::synth_predict(gold, to_level(level), opts));
    });
}

sqa_status sqa_score_set_create(sqa_score_set** out) {
    return guarded([&] {
        require(out, "out is null");
        *out = new sqa_score_set{};
    });
}

void sqa_score_set_destroy(sqa_score_set* set) { delete set; }

sqa_status sqa_score_set_add(sqa_score_set* set, const char* model_id, const double scores[4], const int present[4]) {
    return guarded([&] {
        require(set && model_id && scores, "null argument");
        require(std::strlen(model_id) > 0, "model id is empty");
        std::array<std::optional<double>, 4> s;
        for (std::size_t i = 0; i < 4; ++i) {
            if (present && !present[i]) continue;
            require(scores[i] >= 0.0 && scores[i] <= 1.0, "scores must lie in [0, 1]");
            s[i] = scores[i];
        }
        require(set->scores.emplace(model_id, s).second, "model " + std::string(model_id) + " added twice");
    });
}

sqa_status sqa_score_set_add_report(sqa_score_set* set, const char* report_path) {
    return guarded([&] {
        require(set && report_path, "null argument");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(sqa::read_text(report_path));
        } catch (const nlohmann::json::parse_error& e) {
            sqa::fail(sqa::ErrorKind::data_error, std::string(report_path) + ": " + e.what());
        }
        const auto s = sqa::scores_from_json(j);
        require(!s.model_id.empty(), "score report has no model id");
        require(set->scores.emplace(s.model_id, s.score).second, "model " + s.model_id + " added twice");
    });
}

sqa_status sqa_composite(const sqa_score_set* set, const double weights[4], const char* const routing[4],
                         double* out_score) {
    return guarded([&] {
        require(set && weights && routing && out_score, "null argument");
        sqa::WeightScheme w{"custom", {weights[0], weights[1], weights[2], weights[3]}};
        sqa::RoutingRule rule;
        for (std::size_t i = 0; i < 4; ++i) {
            require(routing[i] != nullptr, "routing entry is null");
            rule[i] = routing[i];
        }
        *out_score = sqa::composite(set->scores, w, rule).score;
    });
}

sqa_status sqa_composite_report(const sqa_score_set* set, const sqa_report_options* options, char** out_table,
                                char** out_json) {
    return guarded([&] {
        require(set && options, "null argument");
        sqa::WeightScheme weights;
        if (options->weights) {
            weights.name = options->scheme ? options->scheme : "custom";
            for (std::size_t i = 0; i < 4; ++i) weights.w[i] = options->weights[i];
        } else {
            const char* name = options->scheme ? options->scheme : "default";
            auto found = sqa::find_weight_scheme(name);
            if (!found) sqa::fail(sqa::ErrorKind::invalid_argument, std::string("unknown weight scheme '") + name + "'");
            weights = *found;
        }
        const std::string first = options->first_model ? options->first_model : "CNN";
        const std::string second = options->second_model ? options->second_model : "VLM";
        auto configs = sqa::standard_configurations(first, second);
        for (std::size_t e = 0; e < options->extra_count; ++e) {
            require(options->extra_routing != nullptr, "extra routing is null");
            sqa::RoutingRule rule;
            for (std::size_t i = 0; i < 4; ++i) {
                const char* m = options->extra_routing[e * 4 + i];
                require(m != nullptr, "extra routing entry is null");
                rule[i] = m;
            }
            configs.push_back({"Custom (" + sqa::routing_to_string(rule) + ")", rule});
        }
        if (options->include_best) configs.push_back(sqa::best_routing(set->scores, weights));
        auto report = sqa::composite_report(set->scores, weights, configs);
        report.notes = sqa::reference_discrepancies(report, set->scores, first, second);
        const std::string table = sqa::format_report_table(report);
        const std::string json = sqa::report_to_json(report).dump(2);
        if (out_table) *out_table = dup_string(table);
        if (out_json) *out_json = dup_string(json);
    });
}

}  // extern "C"
