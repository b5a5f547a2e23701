#include "core/metadata.hpp"

#include <algorithm>
#include <cmath>

#include "core/render.hpp"

namespace sqa {

Band SampleMetadata::most_congested_band() const {
    Band best = Band::L;
    for (Band b : kAllBands) {
        if (count(b).total() > count(best).total()) best = b;
    }
    return best;
}

Band SampleMetadata::least_congested_band(std::optional<Band> except) const {
    std::optional<Band> best;
    for (Band b : kAllBands) {
        if (except && b == *except) continue;
        if (!best || count(b).total() < count(*best).total()) best = b;
    }
    return *best;
}

Quadrant SampleMetadata::coolest_quadrant() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < 4; ++i) {
        if (quadrant_means[i] < quadrant_means[best]) best = i;
    }
    return kAllQuadrants[best];
}

const Hotspot* SampleMetadata::largest_hotspot() const {
    const Hotspot* best = nullptr;
    for (const auto& h : hotspots) {
        if (!best || h.cells > best->cells) best = &h;
    }
    return best;
}

Quadrant quadrant_of(double row, double col, int side) {
    const double half = (side - 1) / 2.0;
    const bool north = row <= half;
    const bool west = col <= half;
    if (north) return west ? Quadrant::NW : Quadrant::NE;
    return west ? Quadrant::SW : Quadrant::SE;
}

SampleMetadata extract_metadata(std::string sample_id, const SampleProducts& products) {
    const TransmitterSet& set = products.transmitters;
    const GroundTruthLabels& labels = products.labels;
    SampleMetadata m;
    m.sample_id = std::move(sample_id);
    m.scenario = set.scenario;
    for (const auto& t : set.transmitters) {
        auto& c = m.per_band[band_index(t.band)];
        if (t.kind == TxKind::satellite) ++c.satellites;
        else ++c.base_stations;
    }
    for (Band b : kAllBands) {
        if (m.is_shared(b)) m.shared_bands.push_back(b);
    }
    m.quadrant_means = labels.quadrant_means;
    m.hotspots = products.hotspots;
    const auto to_dbm = [](double mw) { return mw > 0.0 ? std::max(kDbmFloor, 10.0 * std::log10(mw)) : kDbmFloor; };
    const auto& grid = products.grid;
    const int half = grid.side / 2;
    std::array<double, 4> sums{};
    double peak = 0.0;
    for (int r = 0; r < grid.side; ++r) {
        for (int c = 0; c < grid.side; ++c) {
            const double v = grid.at(r, c);
            peak = std::max(peak, v);
            sums[static_cast<std::size_t>(r < half ? (c < half ? 0 : 1) : (c < half ? 2 : 3))] += v;
        }
    }
    for (std::size_t q = 0; q < 4; ++q) m.quadrant_power_dbm[q] = to_dbm(sums[q] / (half * half));
    m.peak_dbm = to_dbm(peak);
    m.positive_fraction = labels.positive_fraction;
    m.severity = labels.severity;
    m.hottest_quadrant = labels.hottest_quadrant;
    m.mitigation = mitigation_recommendation(m);
    return m;
}

std::optional<Mitigation> mitigation_recommendation(const SampleMetadata& metadata) {
    if (metadata.shared_bands.empty()) return std::nullopt;
    const Band source = metadata.most_congested_band();
    const BandCount& src = metadata.count(source);
    if (src.satellites == 0) return std::nullopt;
    Mitigation mit;
    mit.source = source;
    mit.target = metadata.least_congested_band(source);
    mit.moved = std::min(2, src.satellites);
    mit.before = src.total();
    mit.after = mit.before - mit.moved;
    return mit;
}

nlohmann::ordered_json metadata_to_json(const SampleMetadata& m) {
    nlohmann::ordered_json j;
    j["sample_id"] = m.sample_id;
    j["scenario"] = std::string(scenario_name(m.scenario));
    auto& counts = j["per_band_counts"];
    for (Band b : kAllBands) {
        counts[std::string(band_name(b))] = {{"satellites", m.count(b).satellites},
                                             {"base_stations", m.count(b).base_stations}};
    }
    auto& shared = j["shared_bands"] = nlohmann::ordered_json::array();
    for (Band b : m.shared_bands) shared.push_back(std::string(band_name(b)));
    auto& means = j["quadrant_means"];
    for (Quadrant q : kAllQuadrants) means[std::string(quadrant_code(q))] = m.quadrant_means[static_cast<std::size_t>(q)];
    auto& spots = j["hotspots"] = nlohmann::ordered_json::array();
    for (const auto& h : m.hotspots) {
        spots.push_back({{"cells", h.cells}, {"centroid_row", h.centroid_row}, {"centroid_col", h.centroid_col}});
    }
    auto& power = j["quadrant_power_dbm"];
    for (Quadrant q : kAllQuadrants) power[std::string(quadrant_code(q))] = m.quadrant_power_dbm[static_cast<std::size_t>(q)];
    j["peak_dbm"] = m.peak_dbm;
    j["positive_fraction"] = m.positive_fraction;
    j["severity"] = std::string(severity_name(m.severity));
    j["hottest_quadrant"] = std::string(quadrant_code(m.hottest_quadrant));
    if (m.mitigation) {
        const auto& mit = *m.mitigation;
        j["mitigation"] = {{"source", std::string(band_name(mit.source))},
                           {"target", std::string(band_name(mit.target))},
                           {"moved", mit.moved},
                           {"before", mit.before},
                           {"after", mit.after}};
    } else {
        j["mitigation"] = nullptr;
    }
    return j;
}

}  // namespace sqa
