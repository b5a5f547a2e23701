#include "core/radiomap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"
#include "core/propagation.hpp"

namespace sqa {

std::string_view severity_name(Severity s) {
    switch (s) {
        case Severity::low: return "low";
        case Severity::moderate: return "moderate";
        case Severity::high: return "high";
    }
    return "?";
}

std::optional<Severity> parse_severity(std::string_view name) {
    if (name == "low") return Severity::low;
    if (name == "moderate") return Severity::moderate;
    if (name == "high") return Severity::high;
    return std::nullopt;
}

std::string_view quadrant_code(Quadrant q) {
    constexpr std::array<std::string_view, 4> codes{"NW", "NE", "SW", "SE"};
    return codes[static_cast<std::size_t>(q)];
}

std::string_view quadrant_long_name(Quadrant q) {
    constexpr std::array<std::string_view, 4> names{"northwest", "northeast", "southwest", "southeast"};
    return names[static_cast<std::size_t>(q)];
}

std::optional<Quadrant> parse_quadrant(std::string_view code) {
    for (Quadrant q : kAllQuadrants) {
        if (quadrant_code(q) == code) return q;
    }
    return std::nullopt;
}

InterferenceGrid total_interference_grid(const TransmitterSet& set, const BandTable& bands, int side) {
    if (set.transmitters.empty()) fail(ErrorKind::invalid_argument, "transmitter set is empty");
    if (side < 1) fail(ErrorKind::invalid_argument, "grid side must be >= 1");

    std::array<int, kBandCount> per_band{};
    for (const auto& t : set.transmitters) ++per_band[band_index(t.band)];

    std::vector<const Transmitter*> contributing;
    for (const auto& t : set.transmitters) {
        if (per_band[band_index(t.band)] > 1) contributing.push_back(&t);
    }

    InterferenceGrid grid(side, 0.0);
    if (contributing.empty()) return grid;

    const double cell = set.area_km / side;
    for (int r = 0; r < side; ++r) {
        const double y = set.area_km - (r + 0.5) * cell;
        for (int c = 0; c < side; ++c) {
            const GroundPoint p{(c + 0.5) * cell, y};
            double total = 0.0;
            for (const Transmitter* t : contributing) {
                total += std::pow(10.0, received_power(*t, p, bands) / 10.0);
            }
            grid.at(r, c) = total;
        }
    }
    return grid;
}

NormalizedGrid normalize(const Grid<double>& grid) {
    NormalizedGrid out(grid.side, 0.0);
    if (grid.cells.empty()) return out;
    auto [lo_it, hi_it] = std::minmax_element(grid.cells.begin(), grid.cells.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (!(hi > lo)) return out;
    const double range = hi - lo;
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        out.cells[i] = (grid.cells[i] - lo) / range;
    }
    return out;
}

double quantile_linear(std::span<const double> values, double q) {
    if (values.empty()) fail(ErrorKind::invalid_argument, "quantile of empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

Mask interference_mask(const NormalizedGrid& normalized) {
    Mask mask(normalized.side, 0);
    if (normalized.cells.empty()) return mask;
    const double q75 = quantile_linear(normalized.cells, 0.75);
    for (std::size_t i = 0; i < normalized.cells.size(); ++i) {
        mask.cells[i] = normalized.cells[i] > q75 ? 1 : 0;
    }
    return mask;
}

Mask absolute_threshold_mask(const InterferenceGrid& grid, double threshold_dbm) {
    Mask mask(grid.side, 0);
    const double threshold_mw = std::pow(10.0, threshold_dbm / 10.0);
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        mask.cells[i] = grid.cells[i] > threshold_mw ? 1 : 0;
    }
    return mask;
}

double positive_fraction(const Mask& mask) {
    if (mask.cells.empty()) return 0.0;
    std::size_t n = 0;
    for (auto v : mask.cells) n += v;
    return static_cast<double>(n) / static_cast<double>(mask.cells.size());
}

Severity severity_from_fraction(double rho) {
    if (rho < 0.15) return Severity::low;
    if (rho < 0.35) return Severity::moderate;
    return Severity::high;
}

Severity severity_label(const Mask& mask) { return severity_from_fraction(positive_fraction(mask)); }

std::array<double, 4> quadrant_means(const Grid<double>& grid) {
    if (grid.side < 2 || grid.side % 2 != 0)
        fail(ErrorKind::invalid_argument, "quadrant statistics need an even grid side");
    const int half = grid.side / 2;
    std::array<double, 4> sums{};
    for (int r = 0; r < grid.side; ++r) {
        for (int c = 0; c < grid.side; ++c) {
            const int q = (r < half ? 0 : 2) + (c < half ? 0 : 1);
            sums[static_cast<std::size_t>(q)] += grid.at(r, c);
        }
    }
    const double n = static_cast<double>(half) * half;
    for (auto& s : sums) s /= n;
    return sums;
}

Quadrant argmax_quadrant(const std::array<double, 4>& means) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < 4; ++i) {
        if (means[i] > means[best]) best = i;
    }
    return kAllQuadrants[best];
}

Quadrant hottest_quadrant(const Grid<double>& normalized) { return argmax_quadrant(quadrant_means(normalized)); }

Mask downsample_mask(const Mask& mask, int factor) {
    if (factor < 1 || mask.side % factor != 0)
        fail(ErrorKind::invalid_argument, "mask side must be a multiple of the downsample factor");
    const int out_side = mask.side / factor;
    const int block = factor * factor;
    Mask out(out_side, 0);
    for (int br = 0; br < out_side; ++br) {
        for (int bc = 0; bc < out_side; ++bc) {
            int count = 0;
            for (int r = 0; r < factor; ++r)
                for (int c = 0; c < factor; ++c) count += mask.at(br * factor + r, bc * factor + c);
            out.at(br, bc) = 2 * count >= block ? 1 : 0;
        }
    }
    return out;
}

std::vector<Hotspot> connected_hotspots(const Mask& mask) {
    std::vector<Hotspot> spots;
    const int n = mask.side;
    std::vector<std::uint8_t> seen(mask.cells.size(), 0);
    std::vector<std::pair<int, int>> stack;
    for (int r0 = 0; r0 < n; ++r0) {
        for (int c0 = 0; c0 < n; ++c0) {
            const auto idx0 = static_cast<std::size_t>(r0) * n + c0;
            if (!mask.cells[idx0] || seen[idx0]) continue;
            Hotspot h;
            double sum_r = 0.0, sum_c = 0.0;
            seen[idx0] = 1;
            stack.assign(1, {r0, c0});
            while (!stack.empty()) {
                auto [r, c] = stack.back();
                stack.pop_back();
                ++h.cells;
                sum_r += r;
                sum_c += c;
                constexpr int dr[4] = {-1, 1, 0, 0};
                constexpr int dc[4] = {0, 0, -1, 1};
                for (int k = 0; k < 4; ++k) {
                    const int rr = r + dr[k], cc = c + dc[k];
                    if (rr < 0 || rr >= n || cc < 0 || cc >= n) continue;
                    const auto idx = static_cast<std::size_t>(rr) * n + cc;
                    if (mask.cells[idx] && !seen[idx]) {
                        seen[idx] = 1;
                        stack.emplace_back(rr, cc);
                    }
                }
            }
            h.centroid_row = sum_r / h.cells;
            h.centroid_col = sum_c / h.cells;
            spots.push_back(h);
        }
    }
    return spots;
}

GroundTruthLabels derive_labels(const InterferenceGrid& grid, const NormalizedGrid& normalized,
                                const LabelOptions& options) {
    GroundTruthLabels labels;
    labels.mask64 = interference_mask(normalized);
    labels.mask16 = downsample_mask(labels.mask64);
    labels.quadrant_means = quadrant_means(normalized);
    labels.hottest_quadrant = argmax_quadrant(labels.quadrant_means);
    if (options.severity_mode == SeverityMode::absolute) {
        labels.positive_fraction = positive_fraction(absolute_threshold_mask(grid, options.absolute_threshold_dbm));
    } else {
        labels.positive_fraction = positive_fraction(labels.mask64);
    }
    labels.severity = severity_from_fraction(labels.positive_fraction);
    return labels;
}

std::string mask_to_bits(const Mask& mask) {
    std::string bits;
    bits.reserve(mask.cells.size());
    for (auto v : mask.cells) bits.push_back(v ? '1' : '0');
    return bits;
}

Mask mask_from_bits(std::string_view bits, int side) {
    if (side < 1 || bits.size() != static_cast<std::size_t>(side) * side)
        fail(ErrorKind::data_error, "mask must have " + std::to_string(side * side) + " characters, got " +
                                        std::to_string(bits.size()));
    Mask mask(side, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') mask.cells[i] = 1;
        else if (bits[i] != '0') fail(ErrorKind::data_error, "mask characters must be '0' or '1'");
    }
    return mask;
}

}  // namespace sqa
