#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "core/bands.hpp"

namespace sqa {

enum class ScenarioId { A, B, C };
enum class SatelliteClass { LEO, GEO, mixed };
enum class TxKind { satellite, base_station };

inline constexpr double kGeoAltitudeKm = 35786.0;

std::string_view scenario_name(ScenarioId id);
std::optional<ScenarioId> parse_scenario(std::string_view name);
std::string_view satellite_class_name(SatelliteClass c);
std::optional<SatelliteClass> parse_satellite_class(std::string_view name);
std::string_view tx_kind_name(TxKind k);

struct Scenario {
    ScenarioId id = ScenarioId::A;
    int n_satellites = 1;
    int n_base_stations = 1;
    int n_users = 1;  // carried for reporting; nothing downstream consumes it
    double area_km = 1.0;
    double satellite_altitude_km = 550.0;
    SatelliteClass satellite_class = SatelliteClass::LEO;

    int transmitter_count() const { return n_satellites + n_base_stations; }
};

// A: dense urban, B: rural GEO, C: mixed.
Scenario builtin_scenario(ScenarioId id);
Scenario builtin_scenario(std::string_view id);

void validate_scenario(const Scenario& s);

struct TxPowers {
    double base_station_dbm = 46.0;
    double leo_dbm = 60.0;
    double geo_dbm = 75.0;
};

struct Transmitter {
    int id = 0;
    TxKind kind = TxKind::base_station;
    double x_km = 0.0;  // east
    double y_km = 0.0;  // north
    double altitude_km = 0.0;
    Band band = Band::L;
    double tx_power_dbm = 0.0;
};

struct TransmitterSet {
    ScenarioId scenario = ScenarioId::A;
    double area_km = 1.0;
    std::uint64_t sample_index = 0;
    std::uint64_t master_seed = 0;
    std::vector<Transmitter> transmitters;
};

// Satellites first (nadir points), then base stations. Positions are uniform
// over the open square (0, D)^2, bands uniform over the five bands.
TransmitterSet sample_transmitters(const Scenario& scenario, std::uint64_t master_seed,
                                   std::uint64_t sample_index, const TxPowers& powers = {});

}  // namespace sqa
