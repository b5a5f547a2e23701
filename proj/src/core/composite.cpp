#include "core/composite.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "core/error.hpp"

namespace sqa {

void validate_weights(const WeightScheme& weights) {
    double sum = 0.0;
    for (double w : weights.w) {
        if (!(w >= 0.0 && w <= 1.0)) fail(ErrorKind::invalid_argument, "weights must lie in [0, 1]");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightSumTolerance)
        fail(ErrorKind::invalid_argument, fmt::format("weights sum to {:.12g}, expected 1", sum));
}

const std::vector<WeightScheme>& named_weight_schemes() {
    static const std::vector<WeightScheme> schemes{
        {"default", {0.2, 0.2, 0.3, 0.3}},
        {"equal", {0.25, 0.25, 0.25, 0.25}},
        {"spatial-heavy", {0.1, 0.1, 0.5, 0.3}},
        {"reasoning-heavy", {0.1, 0.1, 0.2, 0.6}},
    };
    return schemes;
}

std::optional<WeightScheme> find_weight_scheme(std::string_view name) {
    for (const auto& s : named_weight_schemes()) {
        if (s.name == name) return s;
    }
    return std::nullopt;
}

WeightScheme scale_weight(const WeightScheme& weights, Level level, double factor) {
    if (!(factor >= 0.0)) fail(ErrorKind::invalid_argument, "scale factor must be >= 0");
    WeightScheme out = weights;
    out.name = weights.name + "-scaled";
    out.w[level_index(level)] *= factor;
    double sum = 0.0;
    for (double w : out.w) sum += w;
    if (!(sum > 0.0)) fail(ErrorKind::invalid_argument, "scaled weights sum to zero");
    for (double& w : out.w) w /= sum;
    return out;
}

CompositeResult composite(const ModelScores& scores, const WeightScheme& weights, const RoutingRule& routing) {
    validate_weights(weights);
    CompositeResult out;
    for (Level l : kAllLevels) {
        const auto i = level_index(l);
        auto it = scores.find(routing[i]);
        if (it == scores.end())
            fail(ErrorKind::invalid_argument, "routing names unknown model '" + routing[i] + "'");
        if (const auto& s = it->second[i]) {
            out.score += weights.w[i] * *s;
        } else {
            out.warnings.push_back(fmt::format("{} has no {} score; counted as 0", routing[i], level_name(l)));
        }
    }
    return out;
}

std::vector<RoutingConfig> standard_configurations(const std::string& first, const std::string& second) {
    return {
        {first + "-only", {first, first, first, first}},
        {second + "-only", {second, second, second, second}},
        {"Naive router (L3->" + first + ", else->" + second + ")", {second, second, first, second}},
        {"Optimal router (L1-3->" + first + ", L4->" + second + ")", {first, first, first, second}},
    };
}

CompositeReport composite_report(const ModelScores& scores, const WeightScheme& weights,
                                 const std::vector<RoutingConfig>& configs, std::size_t baseline_row) {
    if (configs.empty()) fail(ErrorKind::invalid_argument, "no routing configurations");
    if (baseline_row >= configs.size()) fail(ErrorKind::invalid_argument, "baseline row out of range");
    validate_weights(weights);
    CompositeReport report;
    report.weights = weights;
    report.baseline = configs[baseline_row].name;
    for (const auto& cfg : configs) {
        const auto res = composite(scores, weights, cfg.routing);
        report.rows.push_back({cfg.name, cfg.routing, res.score, 0.0});
        for (const auto& w : res.warnings) {
            if (std::find(report.warnings.begin(), report.warnings.end(), w) == report.warnings.end())
                report.warnings.push_back(w);
        }
    }
    const double base = report.rows[baseline_row].score;
    for (auto& row : report.rows) {
        row.delta_pct = base != 0.0 ? 100.0 * (row.score - base) / base : 0.0;
    }
    return report;
}

RoutingConfig best_routing(const ModelScores& scores, const WeightScheme& weights) {
    if (scores.empty()) fail(ErrorKind::invalid_argument, "no model scores");
    std::vector<std::string> models;
    for (const auto& [id, s] : scores) models.push_back(id);
    const std::size_t m = models.size();
    std::size_t total = 1;
    for (int i = 0; i < 4; ++i) total *= m;

    RoutingConfig best;
    double best_score = -1.0;
    for (std::size_t code = 0; code < total; ++code) {
        RoutingRule rule;
        std::size_t c = code;
        for (int i = 3; i >= 0; --i) {
            rule[static_cast<std::size_t>(i)] = models[c % m];
            c /= m;
        }
        const double s = composite(scores, weights, rule).score;
        if (s > best_score) {
            best_score = s;
            best.routing = rule;
        }
    }
    best.name = "Best routing (" + routing_to_string(best.routing) + ")";
    return best;
}

std::optional<ReferenceComposites> reference_composites(std::string_view scheme) {
    if (scheme == "default") return ReferenceComposites{0.443, 0.381, 0.616};
    if (scheme == "equal") return ReferenceComposites{0.474, 0.373, 0.618};
    if (scheme == "spatial-heavy") return ReferenceComposites{0.454, 0.367, 0.449};
    if (scheme == "reasoning-heavy") return ReferenceComposites{0.388, 0.456, 0.534};
    return std::nullopt;
}

ModelScores reference_inputs(const std::string& first, const std::string& second) {
    return {
        {first, {0.729, 0.657, 0.552, 0.0}},
        {second, {0.006, 0.336, 0.467, 0.576}},
    };
}

std::vector<std::string> reference_discrepancies(const CompositeReport& report, const ModelScores& scores,
                                                 const std::string& first, const std::string& second) {
    std::vector<std::string> notes;
    const auto ref = reference_composites(report.weights.name);
    if (!ref || report.rows.size() < 4) return notes;
    const auto expected_inputs = reference_inputs(first, second);
    for (const auto& [model, levels] : expected_inputs) {
        auto it = scores.find(model);
        if (it == scores.end()) return notes;
        for (std::size_t i = 0; i < 4; ++i) {
            const double got = it->second[i].value_or(0.0);
            if (std::abs(got - *levels[i]) > 1e-12) return notes;
        }
    }
    const std::array<std::pair<std::size_t, double>, 3> checks{
        std::pair{std::size_t{0}, ref->first_only}, std::pair{std::size_t{1}, ref->second_only},
        std::pair{std::size_t{3}, ref->router}};
    for (const auto& [row, expected] : checks) {
        const double got = report.rows[row].score;
        if (std::abs(got - expected) > 0.0005) {
            notes.push_back(fmt::format("{}: recomputed {:.4f} differs from reference {:.3f} by {:+.4f}",
                                        report.rows[row].name, got, expected, got - expected));
        }
    }
    return notes;
}

std::string routing_to_string(const RoutingRule& r) {
    return fmt::format("L1->{}, L2->{}, L3->{}, L4->{}", r[0], r[1], r[2], r[3]);
}

std::string format_report_table(const CompositeReport& report) {
    std::size_t width = 13;
    for (const auto& row : report.rows) width = std::max(width, row.name.size());
    std::string out = fmt::format("Weights ({}): w1={:g} w2={:g} w3={:g} w4={:g}\n", report.weights.name,
                                  report.weights.w[0], report.weights.w[1], report.weights.w[2], report.weights.w[3]);
    out += fmt::format("{:<{}}  {:>9}  {:>12}\n", "Configuration", width, "Composite", "vs. baseline");
    out += std::string(width + 25, '-') + "\n";
    for (const auto& row : report.rows) {
        const std::string delta =
            row.name == report.baseline ? std::string("---") : fmt::format("{:+.1f}%", row.delta_pct);
        out += fmt::format("{:<{}}  {:>9.3f}  {:>12}\n", row.name, width, row.score, delta);
    }
    for (const auto& w : report.warnings) out += "warning: " + w + "\n";
    for (const auto& n : report.notes) out += "note: " + n + "\n";
    return out;
}

nlohmann::ordered_json report_to_json(const CompositeReport& report) {
    nlohmann::ordered_json j;
    j["weights"] = {{"name", report.weights.name}, {"w", report.weights.w}};
    j["baseline"] = report.baseline;
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        nlohmann::ordered_json routing;
        for (Level l : kAllLevels) routing[std::string(level_name(l))] = row.routing[level_index(l)];
        rows.push_back({{"name", row.name}, {"routing", routing}, {"composite", row.score}, {"delta_pct", row.delta_pct}});
    }
    j["warnings"] = report.warnings;
    j["notes"] = report.notes;
    return j;
}

}  // namespace sqa
