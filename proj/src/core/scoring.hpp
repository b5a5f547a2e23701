#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "core/radiomap.hpp"

namespace sqa {

enum class Level { L1, L2, L3, L4 };
inline constexpr std::array<Level, 4> kAllLevels{Level::L1, Level::L2, Level::L3, Level::L4};

std::string_view level_name(Level l);
std::optional<Level> parse_level(std::string_view name);
inline constexpr std::size_t level_index(Level l) { return static_cast<std::size_t>(l); }

struct PredictionRecord {
    std::string sample_id;
    Level level = Level::L1;
    std::string model_id;
    std::string payload;  // severity | quadrant code | 256-char 0/1 mask | answer text
};

// Validates the payload shape for its level.
PredictionRecord parse_prediction(const nlohmann::json& j);
nlohmann::ordered_json prediction_to_json(const PredictionRecord& r);

// One JSON object per line; blank lines skipped. Errors name the line number.
std::vector<PredictionRecord> read_predictions(std::istream& in);
std::vector<PredictionRecord> read_predictions_file(const std::filesystem::path& path);
void write_predictions_file(const std::filesystem::path& path, const std::vector<PredictionRecord>& records);

struct GoldLabels {
    std::string sample_id;
    Severity severity = Severity::low;
    Quadrant quadrant = Quadrant::NW;
    Mask mask16;
    std::string l4_answer;
};

// Gold labels in manifest sample order.
struct GoldSet {
    std::vector<GoldLabels> samples;
    std::map<std::string, std::size_t> index;

    void add(GoldLabels g);
    const GoldLabels* find(const std::string& id) const;
};

GoldSet load_gold(const std::filesystem::path& manifest_path);

struct LevelScores {
    std::string model_id;
    std::array<std::optional<double>, 4> score{};  // empty: no records at that level
    std::array<std::size_t, 4> count{};
    std::optional<double> l4_rouge_l;

    bool present(Level l) const { return score[level_index(l)].has_value(); }
};

// Mean metric per level: accuracy (L1, L2), IoU (L3), keyword F1 (L4).
// Throws on duplicate (sample, level), unknown sample id, or more than one
// model id in the batch.
LevelScores score_predictions(const std::vector<PredictionRecord>& records, const GoldSet& gold);

nlohmann::ordered_json scores_to_json(const LevelScores& s);
LevelScores scores_from_json(const nlohmann::json& j);
std::string scores_table(const LevelScores& s);

struct SynthOptions {
    double error_rate = 0.0;
    double flip_rate = 0.25;  // per-cell flip probability of a corrupted L3 mask
    std::uint64_t seed = 0;
    std::string model_id = "synthetic";
};

// Gold copied through a noisy channel: each record is corrupted with
// probability error_rate. L1/L2 take a uniformly chosen wrong label, L3 gets
// cell flips, L4 gets another sample's answer with its tokens shuffled.
std::vector<PredictionRecord> synth_predict(const GoldSet& gold, Level level, const SynthOptions& options);

}  // namespace sqa
