#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "core/scoring.hpp"

namespace sqa {

struct WeightScheme {
    std::string name = "default";
    std::array<double, 4> w{0.2, 0.2, 0.3, 0.3};
};

inline constexpr double kWeightSumTolerance = 1e-9;

// Throws unless every weight is in [0, 1] and they sum to 1.
void validate_weights(const WeightScheme& weights);

// default, equal, spatial-heavy, reasoning-heavy.
const std::vector<WeightScheme>& named_weight_schemes();
std::optional<WeightScheme> find_weight_scheme(std::string_view name);

// Multiplies weight `level` by factor and renormalises the rest.
WeightScheme scale_weight(const WeightScheme& weights, Level level, double factor);

using RoutingRule = std::array<std::string, 4>;  // level -> model id
using ModelScores = std::map<std::string, std::array<std::optional<double>, 4>>;

struct CompositeResult {
    double score = 0.0;
    std::vector<std::string> warnings;  // levels whose routed model had no score
};

// S = sum_i w_i * s_{R(L_i)}(L_i). A routed model without a score at a level
// contributes 0 and a warning; an unknown model id is an error.
CompositeResult composite(const ModelScores& scores, const WeightScheme& weights, const RoutingRule& routing);

struct RoutingConfig {
    std::string name;
    RoutingRule routing;
};

// CNN-only, VLM-only, naive (L3 -> first, rest -> second), optimal (L1-L3 ->
// first, L4 -> second), plus any extras.
std::vector<RoutingConfig> standard_configurations(const std::string& first, const std::string& second);

struct CompositeRow {
    std::string name;
    RoutingRule routing;
    double score = 0.0;
    double delta_pct = 0.0;  // vs baseline, in percent
};

struct CompositeReport {
    WeightScheme weights;
    std::string baseline;
    std::vector<CompositeRow> rows;
    std::vector<std::string> warnings;
    std::vector<std::string> notes;
};

CompositeReport composite_report(const ModelScores& scores, const WeightScheme& weights,
                                 const std::vector<RoutingConfig>& configs, std::size_t baseline_row = 0);

// Exhaustive search over |models|^4 deterministic routings; ties keep the
// first in enumeration order (model ids sorted, L1 varies slowest).
RoutingConfig best_routing(const ModelScores& scores, const WeightScheme& weights);

// Previously reported composites for the named schemes under the reference
// inputs, used only to flag disagreement with recomputed values.
struct ReferenceComposites {
    double first_only;
    double second_only;
    double router;
};
std::optional<ReferenceComposites> reference_composites(std::string_view scheme);

// Per-level inputs the reference composites were computed from:
// first model (0.729, 0.657, 0.552, 0), second (0.006, 0.336, 0.467, 0.576).
ModelScores reference_inputs(const std::string& first = "CNN", const std::string& second = "VLM");

// Discrepancy lines comparing recomputed single-model and optimal-router
// composites against the reference values for the scheme. Empty unless the
// scores are the reference inputs and the scheme is a named one.
std::vector<std::string> reference_discrepancies(const CompositeReport& report, const ModelScores& scores,
                                                 const std::string& first, const std::string& second);

std::string format_report_table(const CompositeReport& report);
nlohmann::ordered_json report_to_json(const CompositeReport& report);

std::string routing_to_string(const RoutingRule& r);

}  // namespace sqa
