#include "core/scenario.hpp"

#include <cmath>
#include <string>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace sqa {

std::string_view scenario_name(ScenarioId id) {
    switch (id) {
        case ScenarioId::A: return "A";
        case ScenarioId::B: return "B";
        case ScenarioId::C: return "C";
    }
    return "?";
}

std::optional<ScenarioId> parse_scenario(std::string_view name) {
    if (name == "A") return ScenarioId::A;
    if (name == "B") return ScenarioId::B;
    if (name == "C") return ScenarioId::C;
    return std::nullopt;
}

std::string_view satellite_class_name(SatelliteClass c) {
    switch (c) {
        case SatelliteClass::LEO: return "LEO";
        case SatelliteClass::GEO: return "GEO";
        case SatelliteClass::mixed: return "mixed";
    }
    return "?";
}

std::optional<SatelliteClass> parse_satellite_class(std::string_view name) {
    if (name == "LEO") return SatelliteClass::LEO;
    if (name == "GEO") return SatelliteClass::GEO;
    if (name == "mixed") return SatelliteClass::mixed;
    return std::nullopt;
}

std::string_view tx_kind_name(TxKind k) {
    return k == TxKind::satellite ? "satellite" : "base_station";
}

Scenario builtin_scenario(ScenarioId id) {
    switch (id) {
        case ScenarioId::A: return {ScenarioId::A, 10, 20, 500, 50.0, 550.0, SatelliteClass::LEO};
        case ScenarioId::B: return {ScenarioId::B, 3, 5, 100, 200.0, kGeoAltitudeKm, SatelliteClass::GEO};
        case ScenarioId::C: return {ScenarioId::C, 5, 10, 200, 100.0, 550.0, SatelliteClass::LEO};
    }
    fail(ErrorKind::invalid_argument, "unknown scenario");
}

Scenario builtin_scenario(std::string_view id) {
    auto parsed = parse_scenario(id);
    if (!parsed) fail(ErrorKind::invalid_argument, "unknown scenario '" + std::string(id) + "'");
    return builtin_scenario(*parsed);
}

void validate_scenario(const Scenario& s) {
    const std::string name(scenario_name(s.id));
    if (s.n_satellites < 1 || s.n_base_stations < 1 || s.n_users < 1)
        fail(ErrorKind::invalid_argument, "scenario " + name + ": all counts must be >= 1");
    if (!(s.area_km > 0.0) || !std::isfinite(s.area_km))
        fail(ErrorKind::invalid_argument, "scenario " + name + ": area_km must be > 0");
    if (!(s.satellite_altitude_km > 0.0) || !std::isfinite(s.satellite_altitude_km))
        fail(ErrorKind::invalid_argument, "scenario " + name + ": satellite_altitude_km must be > 0");
}

TransmitterSet sample_transmitters(const Scenario& scenario, std::uint64_t master_seed,
                                   std::uint64_t sample_index, const TxPowers& powers) {
    validate_scenario(scenario);
    Rng rng(master_seed, sample_index, StreamTag::placement);

    TransmitterSet set;
    set.scenario = scenario.id;
    set.area_km = scenario.area_km;
    set.sample_index = sample_index;
    set.master_seed = master_seed;
    set.transmitters.reserve(static_cast<std::size_t>(scenario.transmitter_count()));

    auto place = [&](Transmitter& t) {
        t.x_km = scenario.area_km * rng.uniform_open();
        t.y_km = scenario.area_km * rng.uniform_open();
        t.band = kAllBands[rng.below(kBandCount)];
    };

    for (int i = 0; i < scenario.n_satellites; ++i) {
        Transmitter t;
        t.id = i;
        t.kind = TxKind::satellite;
        // Mixed constellations alternate LEO (scenario altitude) and GEO.
        bool geo = scenario.satellite_class == SatelliteClass::GEO ||
                   (scenario.satellite_class == SatelliteClass::mixed && i % 2 == 1);
        t.altitude_km = (scenario.satellite_class == SatelliteClass::mixed && geo)
                            ? kGeoAltitudeKm
                            : scenario.satellite_altitude_km;
        t.tx_power_dbm = geo ? powers.geo_dbm : powers.leo_dbm;
        place(t);
        set.transmitters.push_back(t);
    }
    for (int i = 0; i < scenario.n_base_stations; ++i) {
        Transmitter t;
        t.id = scenario.n_satellites + i;
        t.kind = TxKind::base_station;
        t.altitude_km = 0.0;
        t.tx_power_dbm = powers.base_station_dbm;
        place(t);
        set.transmitters.push_back(t);
    }
    return set;
}

}  // namespace sqa
