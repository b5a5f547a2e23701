#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace sqa {

enum class Band : std::size_t { L = 0, S, C, Ku, Ka };

inline constexpr std::size_t kBandCount = 5;
inline constexpr std::array<Band, kBandCount> kAllBands{Band::L, Band::S, Band::C, Band::Ku, Band::Ka};

std::string_view band_name(Band b);
std::optional<Band> parse_band(std::string_view name);

inline constexpr std::size_t band_index(Band b) { return static_cast<std::size_t>(b); }

struct BandSpec {
    Band id;
    double frequency_mhz;
    double zenith_attenuation_db;
};

using BandTable = std::array<BandSpec, kBandCount>;

// L 1.5 GHz, S 2.5 GHz, C 5 GHz, Ku 14 GHz, Ka 28 GHz; zenith losses
// {0.03, 0.05, 0.1, 0.3, 1.0} dB.
const BandTable& default_band_table();

// Throws on a table that is out of order, has non-positive frequency or
// negative zenith loss.
void validate_band_table(const BandTable& table);

}  // namespace sqa
