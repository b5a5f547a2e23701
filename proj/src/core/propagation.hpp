#pragma once

#include "core/bands.hpp"
#include "core/scenario.hpp"

namespace sqa {

// Links shorter than 1 m are evaluated at 1 m.
inline constexpr double kMinLinkDistanceKm = 1e-3;

// Atmospheric loss never exceeds this multiple of the zenith value.
inline constexpr double kAtmosphericClampFactor = 10.0;

struct LinkGeometry {
    double ground_distance_km = 0.0;
    double altitude_km = 0.0;
    double slant_range_km = 0.0;
    double elevation_deg = 0.0;
};

struct GroundPoint {
    double x_km = 0.0;
    double y_km = 0.0;
};

double slant_range(double ground_distance_km, double altitude_km);

// 20 log10(d_km) + 20 log10(f_MHz) + 32.45
double free_space_path_loss(double distance_km, double frequency_mhz);

// atan2(h, d_g) in degrees; 0 for ground links.
double elevation_angle(double ground_distance_km, double altitude_km);

// Cosecant-scaled zenith loss for a slant path; 0 when terrestrial is set.
double atmospheric_attenuation(const BandSpec& band, double elevation_deg, bool terrestrial = false);

LinkGeometry link_geometry(const Transmitter& tx, GroundPoint point);

// P_t - L_FS - L_atm in dBm.
double received_power(const Transmitter& tx, GroundPoint point,
                      const BandTable& bands = default_band_table());

}  // namespace sqa
