#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "core/bands.hpp"
#include "core/scenario.hpp"

namespace sqa {

inline constexpr int kGridSide = 64;
inline constexpr int kCoarseSide = 16;

// Square row-major raster. Row 0 is north, column 0 is west.
template <typename T>
struct Grid {
    int side = 0;
    std::vector<T> cells;

    Grid() = default;
    explicit Grid(int n, T fill = T{}) : side(n), cells(static_cast<std::size_t>(n) * n, fill) {}

    T& at(int row, int col) { return cells[static_cast<std::size_t>(row) * side + col]; }
    const T& at(int row, int col) const { return cells[static_cast<std::size_t>(row) * side + col]; }
    std::size_t size() const { return cells.size(); }

    bool operator==(const Grid&) const = default;
};

using InterferenceGrid = Grid<double>;  // mW per cell
using NormalizedGrid = Grid<double>;    // [0, 1]
using Mask = Grid<std::uint8_t>;        // 0 / 1

enum class Severity { low, moderate, high };
enum class Quadrant { NW, NE, SW, SE };

inline constexpr std::array<Quadrant, 4> kAllQuadrants{Quadrant::NW, Quadrant::NE, Quadrant::SW, Quadrant::SE};

std::string_view severity_name(Severity s);
std::optional<Severity> parse_severity(std::string_view name);
std::string_view quadrant_code(Quadrant q);        // "NW"
std::string_view quadrant_long_name(Quadrant q);   // "northwest"
std::optional<Quadrant> parse_quadrant(std::string_view code);

// Per-cell co-channel interference. Only bands carrying two or more
// transmitters contribute; sums run in the linear (mW) domain.
InterferenceGrid total_interference_grid(const TransmitterSet& set,
                                         const BandTable& bands = default_band_table(),
                                         int side = kGridSide);

// Min-max normalisation; a constant grid maps to all zeros.
NormalizedGrid normalize(const Grid<double>& grid);

// Quantile with linear interpolation between order statistics (position
// q * (n - 1) in the sorted sample).
double quantile_linear(std::span<const double> values, double q);

// Cells strictly above the 75th percentile of the normalised grid.
Mask interference_mask(const NormalizedGrid& normalized);

// Cells whose absolute level exceeds threshold_dbm. Alternate L1 mode only.
Mask absolute_threshold_mask(const InterferenceGrid& grid, double threshold_dbm);

double positive_fraction(const Mask& mask);

Severity severity_from_fraction(double rho);
Severity severity_label(const Mask& mask);

std::array<double, 4> quadrant_means(const Grid<double>& grid);

// argmax of quadrant means; ties resolve NW > NE > SW > SE.
Quadrant hottest_quadrant(const Grid<double>& normalized);
Quadrant argmax_quadrant(const std::array<double, 4>& means);

// Each factor x factor block is positive iff at least half its cells are.
Mask downsample_mask(const Mask& mask, int factor = kGridSide / kCoarseSide);

struct Hotspot {
    int cells = 0;
    double centroid_row = 0.0;
    double centroid_col = 0.0;
};

// 4-connected components in row-major discovery order.
std::vector<Hotspot> connected_hotspots(const Mask& mask);

enum class SeverityMode { quantile, absolute };

struct LabelOptions {
    SeverityMode severity_mode = SeverityMode::quantile;
    double absolute_threshold_dbm = -90.0;
};

struct GroundTruthLabels {
    double positive_fraction = 0.0;
    Severity severity = Severity::low;
    Quadrant hottest_quadrant = Quadrant::NW;
    std::array<double, 4> quadrant_means{};
    Mask mask64;
    Mask mask16;
};

GroundTruthLabels derive_labels(const InterferenceGrid& grid, const NormalizedGrid& normalized,
                                const LabelOptions& options = {});

std::string mask_to_bits(const Mask& mask);
Mask mask_from_bits(std::string_view bits, int side);

}  // namespace sqa
