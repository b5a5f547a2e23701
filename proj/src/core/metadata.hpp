#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/bands.hpp"
#include "core/radiomap.hpp"
#include "core/sample.hpp"
#include "core/scenario.hpp"

namespace sqa {

struct BandCount {
    int satellites = 0;
    int base_stations = 0;
    int total() const { return satellites + base_stations; }
    bool operator==(const BandCount&) const = default;
};

struct Mitigation {
    Band source = Band::L;
    Band target = Band::L;
    int moved = 0;
    int before = 0;
    int after = 0;
};

struct SampleMetadata {
    std::string sample_id;
    ScenarioId scenario = ScenarioId::A;
    std::array<BandCount, kBandCount> per_band{};
    std::vector<Band> shared_bands;  // ascending band order
    std::array<double, 4> quadrant_means{};
    // Linear-power means per quadrant and the strongest cell, both in dBm (floored).
    std::array<double, 4> quadrant_power_dbm{};
    double peak_dbm = 0.0;
    std::vector<Hotspot> hotspots;
    double positive_fraction = 0.0;
    Severity severity = Severity::low;
    Quadrant hottest_quadrant = Quadrant::NW;
    std::optional<Mitigation> mitigation;

    const BandCount& count(Band b) const { return per_band[band_index(b)]; }
    bool is_shared(Band b) const { return count(b).total() >= 2; }

    // Most transmitters; ties go to the lower band.
    Band most_congested_band() const;
    // Fewest transmitters, excluding `except`; ties go to the lower band.
    Band least_congested_band(std::optional<Band> except = std::nullopt) const;
    Quadrant coolest_quadrant() const;
    // Largest hotspot; ties go to the first discovered.
    const Hotspot* largest_hotspot() const;
};

SampleMetadata extract_metadata(std::string sample_id, const SampleProducts& products);

// Move up to two satellites from the most to the least congested band.
// Empty when there is no shared band or the source band holds no satellite.
std::optional<Mitigation> mitigation_recommendation(const SampleMetadata& metadata);

// Quadrant of a 64x64 cell coordinate, row 0 north.
Quadrant quadrant_of(double row, double col, int side = kGridSide);

nlohmann::ordered_json metadata_to_json(const SampleMetadata& m);

}  // namespace sqa
