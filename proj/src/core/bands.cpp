#include "core/bands.hpp"

#include <cmath>
#include <string>

#include "core/error.hpp"

namespace sqa {

namespace {
constexpr std::array<std::string_view, kBandCount> kNames{"L", "S", "C", "Ku", "Ka"};
}

std::string_view band_name(Band b) { return kNames[band_index(b)]; }

std::optional<Band> parse_band(std::string_view name) {
    for (std::size_t i = 0; i < kBandCount; ++i) {
        if (kNames[i] == name) return kAllBands[i];
    }
    return std::nullopt;
}

const BandTable& default_band_table() {
    static const BandTable table{{
        {Band::L, 1500.0, 0.03},
        {Band::S, 2500.0, 0.05},
        {Band::C, 5000.0, 0.1},
        {Band::Ku, 14000.0, 0.3},
        {Band::Ka, 28000.0, 1.0},
    }};
    return table;
}

void validate_band_table(const BandTable& table) {
    for (std::size_t i = 0; i < kBandCount; ++i) {
        const auto& spec = table[i];
        if (spec.id != kAllBands[i]) fail(ErrorKind::invalid_argument, "band table out of order");
        if (!(spec.frequency_mhz > 0.0) || !std::isfinite(spec.frequency_mhz))
            fail(ErrorKind::invalid_argument,
                 "band " + std::string(band_name(spec.id)) + ": frequency must be positive");
        if (!(spec.zenith_attenuation_db >= 0.0) || !std::isfinite(spec.zenith_attenuation_db))
            fail(ErrorKind::invalid_argument,
                 "band " + std::string(band_name(spec.id)) + ": zenith attenuation must be >= 0");
    }
}

}  // namespace sqa
