#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "core/radiomap.hpp"

namespace sqa {

inline constexpr int kImageSide = 448;
inline constexpr double kDbmFloor = -200.0;

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

struct ColormapAnchor {
    double position;
    Rgb color;
};

// Blue -> cyan -> green -> yellow -> red at 0, .25, .5, .75, 1.
const std::vector<ColormapAnchor>& default_colormap();

// Piecewise-linear lookup; channels round half away from zero. t is clamped
// to [0, 1].
Rgb colormap(double t, const std::vector<ColormapAnchor>& anchors = default_colormap());

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

    Rgb pixel(int x, int y) const {
        const auto i = (static_cast<std::size_t>(y) * width + x) * 3;
        return {rgb[i], rgb[i + 1], rgb[i + 2]};
    }
};

// mW -> dBm with zero cells clamped to the floor, then min-max in dBm.
Grid<double> dbm_normalized(const InterferenceGrid& grid);

// Half-pixel-centred bilinear resampling with edge clamping.
std::vector<double> bilinear_upsample(const Grid<double>& grid, int out_side);

Image render_heatmap(const InterferenceGrid& grid, int out_side = kImageSide,
                     const std::vector<ColormapAnchor>& anchors = default_colormap());

std::vector<std::uint8_t> encode_png(const Image& image);
void write_png(const Image& image, const std::filesystem::path& path);

}  // namespace sqa
