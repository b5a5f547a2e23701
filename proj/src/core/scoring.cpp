#include "core/scoring.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/metrics.hpp"
#include "core/rng.hpp"

namespace fs = std::filesystem;

namespace sqa {

std::string_view level_name(Level l) {
    constexpr std::array<std::string_view, 4> names{"L1", "L2", "L3", "L4"};
    return names[level_index(l)];
}

std::optional<Level> parse_level(std::string_view name) {
    for (Level l : kAllLevels) {
        if (level_name(l) == name) return l;
    }
    return std::nullopt;
}

PredictionRecord parse_prediction(const nlohmann::json& j) {
    if (!j.is_object()) fail(ErrorKind::data_error, "record is not a JSON object");
    for (const char* key : {"sample_id", "level", "model_id", "payload"}) {
        if (!j.contains(key) || !j[key].is_string())
            fail(ErrorKind::data_error, std::string("missing or non-string field '") + key + "'");
    }
    PredictionRecord r;
    r.sample_id = j["sample_id"].get<std::string>();
    r.model_id = j["model_id"].get<std::string>();
    r.payload = j["payload"].get<std::string>();
    const auto level_tag = j["level"].get<std::string>();
    const auto level = parse_level(level_tag);
    if (!level) fail(ErrorKind::data_error, "unknown level tag '" + level_tag + "'");
    r.level = *level;
    switch (r.level) {
        case Level::L1:
            if (!parse_severity(r.payload)) fail(ErrorKind::data_error, "L1 payload must be low, moderate or high");
            break;
        case Level::L2:
            if (!parse_quadrant(r.payload)) fail(ErrorKind::data_error, "L2 payload must be NW, NE, SW or SE");
            break;
        case Level::L3:
            mask_from_bits(r.payload, kCoarseSide);
            break;
        case Level::L4:
            break;
    }
    return r;
}

nlohmann::ordered_json prediction_to_json(const PredictionRecord& r) {
    return {{"sample_id", r.sample_id},
            {"level", std::string(level_name(r.level))},
            {"model_id", r.model_id},
            {"payload", r.payload}};
}

std::vector<PredictionRecord> read_predictions(std::istream& in) {
    std::vector<PredictionRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(parse_prediction(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::data_error, fmt::format("line {}: {}", lineno, e.what()));
        } catch (const Error& e) {
            fail(ErrorKind::data_error, fmt::format("line {}: {}", lineno, e.what()));
        }
    }
    return out;
}

std::vector<PredictionRecord> read_predictions_file(const fs::path& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorKind::io_error, "cannot open " + path.string());
    try {
        return read_predictions(f);
    } catch (const Error& e) {
        fail(e.kind(), path.string() + ": " + e.what());
    }
}

void write_predictions_file(const fs::path& path, const std::vector<PredictionRecord>& records) {
    std::string text;
    for (const auto& r : records) text += prediction_to_json(r).dump() + "\n";
    write_text(path, text);
}

void GoldSet::add(GoldLabels g) {
    if (index.contains(g.sample_id)) fail(ErrorKind::data_error, "duplicate gold sample " + g.sample_id);
    index[g.sample_id] = samples.size();
    samples.push_back(std::move(g));
}

const GoldLabels* GoldSet::find(const std::string& id) const {
    auto it = index.find(id);
    return it == index.end() ? nullptr : &samples[it->second];
}

GoldSet load_gold(const fs::path& manifest_path) {
    const fs::path root = manifest_path.parent_path();
    GoldSet gold;
    try {
        const auto manifest = nlohmann::json::parse(read_text(manifest_path));
        for (const auto& entry : manifest.at("samples")) {
            const auto labels = nlohmann::json::parse(read_text(root / entry.at("labels").get<std::string>()));
            GoldLabels g;
            g.sample_id = entry.at("id").get<std::string>();
            const auto sev = parse_severity(labels.at("severity").get<std::string>());
            const auto quad = parse_quadrant(labels.at("hottest_quadrant").get<std::string>());
            if (!sev || !quad) fail(ErrorKind::data_error, g.sample_id + ": malformed labels");
            g.severity = *sev;
            g.quadrant = *quad;
            g.mask16 = mask_from_bits(labels.at("mask16").get<std::string>(), kCoarseSide);
            g.l4_answer = labels.at("l4").at("answer").get<std::string>();
            gold.add(std::move(g));
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::data_error, manifest_path.string() + ": " + e.what());
    }
    return gold;
}

LevelScores score_predictions(const std::vector<PredictionRecord>& records, const GoldSet& gold) {
    LevelScores out;
    std::array<double, 4> sums{};
    double rouge_sum = 0.0;
    std::set<std::pair<std::string, Level>> seen;
    for (const auto& r : records) {
        if (out.model_id.empty()) out.model_id = r.model_id;
        else if (r.model_id != out.model_id)
            fail(ErrorKind::data_error, "mixed model ids '" + out.model_id + "' and '" + r.model_id + "'");
        if (!seen.emplace(r.sample_id, r.level).second)
            fail(ErrorKind::data_error,
                 "duplicate record for " + r.sample_id + " " + std::string(level_name(r.level)));
        const GoldLabels* g = gold.find(r.sample_id);
        if (!g) fail(ErrorKind::data_error, "unknown sample id " + r.sample_id);

        const auto li = level_index(r.level);
        ++out.count[li];
        switch (r.level) {
            case Level::L1: sums[li] += (*parse_severity(r.payload) == g->severity) ? 1.0 : 0.0; break;
            case Level::L2: sums[li] += (*parse_quadrant(r.payload) == g->quadrant) ? 1.0 : 0.0; break;
            case Level::L3: sums[li] += iou(mask_from_bits(r.payload, kCoarseSide), g->mask16); break;
            case Level::L4:
                sums[li] += keyword_f1(r.payload, g->l4_answer);
                rouge_sum += rouge_l(r.payload, g->l4_answer);
                break;
        }
    }
    for (std::size_t i = 0; i < 4; ++i) {
        if (out.count[i] > 0) out.score[i] = sums[i] / static_cast<double>(out.count[i]);
    }
    if (out.count[3] > 0) out.l4_rouge_l = rouge_sum / static_cast<double>(out.count[3]);
    return out;
}

nlohmann::ordered_json scores_to_json(const LevelScores& s) {
    nlohmann::ordered_json j;
    j["model_id"] = s.model_id;
    auto& levels = j["levels"];
    constexpr std::array<std::string_view, 4> metric{"accuracy", "accuracy", "mean_iou", "mean_keyword_f1"};
    for (Level l : kAllLevels) {
        const auto i = level_index(l);
        nlohmann::ordered_json entry;
        entry["metric"] = std::string(metric[i]);
        entry["present"] = s.score[i].has_value();
        entry["score"] = s.score[i] ? nlohmann::ordered_json(*s.score[i]) : nlohmann::ordered_json();
        entry["count"] = s.count[i];
        if (l == Level::L4 && s.l4_rouge_l) entry["mean_rouge_l"] = *s.l4_rouge_l;
        levels[std::string(level_name(l))] = entry;
    }
    return j;
}

LevelScores scores_from_json(const nlohmann::json& j) {
    LevelScores s;
    try {
        s.model_id = j.at("model_id").get<std::string>();
        for (Level l : kAllLevels) {
            const auto& entry = j.at("levels").at(std::string(level_name(l)));
            const auto i = level_index(l);
            if (entry.value("present", false) && entry.at("score").is_number())
                s.score[i] = entry["score"].get<double>();
            s.count[i] = entry.value("count", std::size_t{0});
            if (l == Level::L4 && entry.contains("mean_rouge_l")) s.l4_rouge_l = entry["mean_rouge_l"].get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::data_error, std::string("malformed score report: ") + e.what());
    }
    return s;
}

std::string scores_table(const LevelScores& s) {
    constexpr std::array<std::string_view, 4> metric{"accuracy", "accuracy", "mean IoU", "keyword F1"};
    std::string out = fmt::format("model: {}\n{:<6}{:<14}{:>10}{:>8}\n", s.model_id, "level", "metric", "score", "n");
    for (Level l : kAllLevels) {
        const auto i = level_index(l);
        const std::string value = s.score[i] ? fmt::format("{:.4f}", *s.score[i]) : "absent";
        out += fmt::format("{:<6}{:<14}{:>10}{:>8}\n", level_name(l), metric[i], value, s.count[i]);
    }
    if (s.l4_rouge_l) out += fmt::format("{:<6}{:<14}{:>10.4f}{:>8}\n", "L4", "ROUGE-L", *s.l4_rouge_l, s.count[3]);
    return out;
}

namespace {

std::string shuffled_tokens(std::string_view text, Rng& rng) {
    auto tokens = tokenize(text);
    rng.shuffle(std::span<std::string>(tokens));
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

}  // namespace

std::vector<PredictionRecord> synth_predict(const GoldSet& gold, Level level, const SynthOptions& options) {
    if (!(options.error_rate >= 0.0 && options.error_rate <= 1.0))
        fail(ErrorKind::invalid_argument, "error_rate must lie in [0, 1]");
    if (!(options.flip_rate >= 0.0 && options.flip_rate <= 1.0))
        fail(ErrorKind::invalid_argument, "flip_rate must lie in [0, 1]");

    std::vector<PredictionRecord> out;
    out.reserve(gold.samples.size());
    const std::size_t n = gold.samples.size();
    for (std::size_t i = 0; i < n; ++i) {
        const GoldLabels& g = gold.samples[i];
        Rng rng(options.seed, i * 4 + level_index(level), StreamTag::synth);
        // Draw the corruption decision first and unconditionally so that the
        // stream layout does not depend on the level.
        const bool corrupt = rng.bernoulli(options.error_rate);
        PredictionRecord r{g.sample_id, level, options.model_id, {}};
        switch (level) {
            case Level::L1: {
                Severity s = g.severity;
                if (corrupt) {
                    const auto shift = 1 + rng.below(2);
                    s = static_cast<Severity>((static_cast<std::size_t>(s) + shift) % 3);
                }
                r.payload = std::string(severity_name(s));
                break;
            }
            case Level::L2: {
                Quadrant q = g.quadrant;
                if (corrupt) {
                    const auto shift = 1 + rng.below(3);
                    q = static_cast<Quadrant>((static_cast<std::size_t>(q) + shift) % 4);
                }
                r.payload = std::string(quadrant_code(q));
                break;
            }
            case Level::L3: {
                Mask m = g.mask16;
                if (corrupt) {
                    for (auto& cell : m.cells) {
                        if (rng.bernoulli(options.flip_rate)) cell ^= 1;
                    }
                }
                r.payload = mask_to_bits(m);
                break;
            }
            case Level::L4: {
                if (corrupt) {
                    std::size_t other = i;
                    if (n > 1) other = (i + 1 + rng.below(n - 1)) % n;
                    r.payload = shuffled_tokens(gold.samples[other].l4_answer, rng);
                } else {
                    r.payload = g.l4_answer;
                }
                break;
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace sqa
