#include "core/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.hpp"

namespace sqa {

double slant_range(double ground_distance_km, double altitude_km) {
    if (!(ground_distance_km >= 0.0) || !(altitude_km >= 0.0))
        fail(ErrorKind::invalid_argument, "slant_range: distances must be >= 0");
    if (ground_distance_km == 0.0 && altitude_km == 0.0)
        fail(ErrorKind::invalid_argument, "slant_range: degenerate zero-length link");
    return std::hypot(ground_distance_km, altitude_km);
}

double free_space_path_loss(double distance_km, double frequency_mhz) {
    if (!(distance_km > 0.0) || !(frequency_mhz > 0.0))
        fail(ErrorKind::invalid_argument, "free_space_path_loss: distance and frequency must be > 0");
    return 20.0 * std::log10(distance_km) + 20.0 * std::log10(frequency_mhz) + 32.45;
}

double elevation_angle(double ground_distance_km, double altitude_km) {
    if (!(altitude_km >= 0.0)) fail(ErrorKind::invalid_argument, "elevation_angle: altitude must be >= 0");
    if (altitude_km == 0.0) return 0.0;
    return std::atan2(altitude_km, ground_distance_km) * 180.0 / std::numbers::pi;
}

double atmospheric_attenuation(const BandSpec& band, double elevation_deg, bool terrestrial) {
    if (terrestrial) return 0.0;
    if (!(elevation_deg > 0.0) || elevation_deg > 90.0)
        fail(ErrorKind::invalid_argument, "atmospheric_attenuation: elevation must be in (0, 90] degrees");
    const double zenith = band.zenith_attenuation_db;
    // sin(90 deg) in floating point is exactly 1, so nadir returns the table value.
    const double scaled = zenith / std::sin(elevation_deg * std::numbers::pi / 180.0);
    return std::min(scaled, kAtmosphericClampFactor * zenith);
}

LinkGeometry link_geometry(const Transmitter& tx, GroundPoint point) {
    LinkGeometry g;
    g.ground_distance_km = std::hypot(point.x_km - tx.x_km, point.y_km - tx.y_km);
    g.altitude_km = tx.altitude_km;
    if (tx.kind == TxKind::base_station) {
        g.altitude_km = 0.0;
        g.slant_range_km = std::max(g.ground_distance_km, kMinLinkDistanceKm);
        g.elevation_deg = 0.0;
    } else {
        g.slant_range_km = std::max(slant_range(g.ground_distance_km, g.altitude_km), kMinLinkDistanceKm);
        g.elevation_deg = elevation_angle(g.ground_distance_km, g.altitude_km);
    }
    return g;
}

double received_power(const Transmitter& tx, GroundPoint point, const BandTable& bands) {
    const BandSpec& band = bands[band_index(tx.band)];
    const LinkGeometry g = link_geometry(tx, point);
    const bool terrestrial = tx.kind == TxKind::base_station;
    return tx.tx_power_dbm - free_space_path_loss(g.slant_range_km, band.frequency_mhz) -
           atmospheric_attenuation(band, g.elevation_deg, terrestrial);
}

}  // namespace sqa
