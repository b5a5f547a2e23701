#include "core/sample.hpp"

#include <string>

namespace sqa {

SampleProducts simulate_sample(const Scenario& scenario, std::uint64_t master_seed, std::uint64_t sample_index,
                               const SimulationParams& params) {
    SampleProducts out;
    out.transmitters = sample_transmitters(scenario, master_seed, sample_index, params.powers);
    out.grid = total_interference_grid(out.transmitters, params.bands);
    out.normalized = normalize(out.grid);
    out.labels = derive_labels(out.grid, out.normalized, params.labels);
    out.hotspots = connected_hotspots(out.labels.mask64);
    return out;
}

nlohmann::ordered_json transmitters_to_json(const TransmitterSet& set) {
    nlohmann::ordered_json j;
    j["scenario"] = std::string(scenario_name(set.scenario));
    j["area_km"] = set.area_km;
    j["master_seed"] = set.master_seed;
    j["sample_index"] = set.sample_index;
    auto& list = j["transmitters"] = nlohmann::ordered_json::array();
    for (const auto& t : set.transmitters) {
        list.push_back({
            {"id", t.id},
            {"kind", std::string(tx_kind_name(t.kind))},
            {"x_km", t.x_km},
            {"y_km", t.y_km},
            {"altitude_km", t.altitude_km},
            {"band", std::string(band_name(t.band))},
            {"tx_power_dbm", t.tx_power_dbm},
        });
    }
    return j;
}

nlohmann::ordered_json labels_to_json(const GroundTruthLabels& labels) {
    nlohmann::ordered_json j;
    j["positive_fraction"] = labels.positive_fraction;
    j["severity"] = std::string(severity_name(labels.severity));
    j["hottest_quadrant"] = std::string(quadrant_code(labels.hottest_quadrant));
    auto& means = j["quadrant_means"];
    for (Quadrant q : kAllQuadrants) means[std::string(quadrant_code(q))] = labels.quadrant_means[static_cast<std::size_t>(q)];
    j["mask64"] = mask_to_bits(labels.mask64);
    j["mask16"] = mask_to_bits(labels.mask16);
    return j;
}

}  // namespace sqa
