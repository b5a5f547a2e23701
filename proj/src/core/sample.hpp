#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "core/bands.hpp"
#include "core/radiomap.hpp"
#include "core/scenario.hpp"

namespace sqa {

struct SimulationParams {
    BandTable bands = default_band_table();
    TxPowers powers;
    LabelOptions labels;
};

// Physics products and labels of one sample. Rendering reads from grid but
// never feeds back into labels.
struct SampleProducts {
    TransmitterSet transmitters;
    InterferenceGrid grid;
    NormalizedGrid normalized;
    GroundTruthLabels labels;
    std::vector<Hotspot> hotspots;
};

SampleProducts simulate_sample(const Scenario& scenario, std::uint64_t master_seed, std::uint64_t sample_index,
                               const SimulationParams& params = {});

nlohmann::ordered_json transmitters_to_json(const TransmitterSet& set);
nlohmann::ordered_json labels_to_json(const GroundTruthLabels& labels);

}  // namespace sqa
