#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/qa.hpp"
#include "core/sample.hpp"

namespace sqa {

enum class Split { train, val, test };
std::string_view split_name(Split s);

struct DatasetConfig {
    std::uint64_t master_seed = 0;
    int images = 300;
    int qa_per_image = 10;
    std::vector<ScenarioId> scenario_mix{ScenarioId::A, ScenarioId::B, ScenarioId::C};
    std::array<int, 3> split_ratio{10000, 500, 500};
    std::map<ScenarioId, Scenario> scenarios{
        {ScenarioId::A, builtin_scenario(ScenarioId::A)},
        {ScenarioId::B, builtin_scenario(ScenarioId::B)},
        {ScenarioId::C, builtin_scenario(ScenarioId::C)},
    };
    SimulationParams sim;
    int workers = 0;  // 0: hardware concurrency
    bool write_images = true;
};

void validate_config(const DatasetConfig& config);

// Applies the keys present in `j` on top of `config`. Unknown keys are an
// error so typos do not pass silently.
void apply_config_json(const nlohmann::json& j, DatasetConfig& config);
DatasetConfig load_config_file(const std::filesystem::path& path, DatasetConfig base = {});

std::string sample_id_for(std::uint64_t index);

// Per-split counts for n images: val and test are round(n * r_val / sum),
// train takes the rest.
std::array<int, 3> split_counts(int images, const std::array<int, 3>& ratio);

struct SampleRecord {
    std::string id;
    std::uint64_t index = 0;
    ScenarioId scenario = ScenarioId::A;
    Split split = Split::train;
    SampleMetadata metadata;
    GroundTruthLabels labels;
    QAPair l4;
    QaBatch qa;
};

// Everything about one sample except the pixels.
SampleRecord make_sample_record(const DatasetConfig& config, const SampleProducts& products, std::uint64_t index,
                                Split split);

struct BuildResult {
    nlohmann::ordered_json manifest;
    std::vector<SampleRecord> samples;  // index order
    std::vector<QAPair> pairs;          // index order, then draw order
    QCReport qc;
    std::array<std::size_t, 4> tallies{};
    int substitutions = 0;
};

// Generates the corpus. When out_dir is non-empty writes
//   <out>/samples/<id>/{heatmap.png,labels.json,metadata.json}
//   <out>/qa.jsonl
//   <out>/manifest.json   (last, via rename)
// Throws Error(qc_failure) before writing the manifest if QC fails.
BuildResult build_dataset(const DatasetConfig& config, const std::filesystem::path& out_dir = {});

nlohmann::ordered_json config_to_json(const DatasetConfig& config);
nlohmann::ordered_json sample_labels_json(const SampleRecord& rec);

// Writes text to path atomically (temp file + rename).
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace sqa
