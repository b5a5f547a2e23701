#include "core/render.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "core/error.hpp"

namespace sqa {

const std::vector<ColormapAnchor>& default_colormap() {
    static const std::vector<ColormapAnchor> anchors{
        {0.0, {0, 0, 255}},
        {0.25, {0, 255, 255}},
        {0.5, {0, 255, 0}},
        {0.75, {255, 255, 0}},
        {1.0, {255, 0, 0}},
    };
    return anchors;
}

namespace {

std::uint8_t lerp_channel(std::uint8_t a, std::uint8_t b, double t) {
    const double v = static_cast<double>(a) + (static_cast<double>(b) - static_cast<double>(a)) * t;
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

Rgb colormap(double t, const std::vector<ColormapAnchor>& anchors) {
    if (anchors.empty()) fail(ErrorKind::invalid_argument, "colormap needs at least one anchor");
    if (!(t > anchors.front().position)) return anchors.front().color;
    if (!(t < anchors.back().position)) return anchors.back().color;
    for (std::size_t i = 1; i < anchors.size(); ++i) {
        const auto& hi = anchors[i];
        if (t <= hi.position) {
            const auto& lo = anchors[i - 1];
            const double u = (t - lo.position) / (hi.position - lo.position);
            return {lerp_channel(lo.color.r, hi.color.r, u), lerp_channel(lo.color.g, hi.color.g, u),
                    lerp_channel(lo.color.b, hi.color.b, u)};
        }
    }
    return anchors.back().color;
}

Grid<double> dbm_normalized(const InterferenceGrid& grid) {
    Grid<double> dbm(grid.side, kDbmFloor);
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        const double v = grid.cells[i];
        dbm.cells[i] = v > 0.0 ? std::max(10.0 * std::log10(v), kDbmFloor) : kDbmFloor;
    }
    return normalize(dbm);
}

std::vector<double> bilinear_upsample(const Grid<double>& grid, int out_side) {
    const int n = grid.side;
    std::vector<double> out(static_cast<std::size_t>(out_side) * out_side, 0.0);
    if (n == 0) return out;
    const double scale = static_cast<double>(n) / out_side;

    // Separable weights, identical for rows and columns.
    std::vector<int> i0(out_side), i1(out_side);
    std::vector<double> w(out_side);
    for (int k = 0; k < out_side; ++k) {
        double src = (k + 0.5) * scale - 0.5;
        src = std::clamp(src, 0.0, static_cast<double>(n - 1));
        const int lo = static_cast<int>(std::floor(src));
        i0[k] = lo;
        i1[k] = std::min(lo + 1, n - 1);
        w[k] = src - lo;
    }
    for (int y = 0; y < out_side; ++y) {
        for (int x = 0; x < out_side; ++x) {
            const double top = grid.at(i0[y], i0[x]) * (1.0 - w[x]) + grid.at(i0[y], i1[x]) * w[x];
            const double bottom = grid.at(i1[y], i0[x]) * (1.0 - w[x]) + grid.at(i1[y], i1[x]) * w[x];
            out[static_cast<std::size_t>(y) * out_side + x] = top * (1.0 - w[y]) + bottom * w[y];
        }
    }
    return out;
}

Image render_heatmap(const InterferenceGrid& grid, int out_side, const std::vector<ColormapAnchor>& anchors) {
    const auto values = bilinear_upsample(dbm_normalized(grid), out_side);
    Image img{out_side, out_side, std::vector<std::uint8_t>(values.size() * 3)};
    for (std::size_t i = 0; i < values.size(); ++i) {
        const Rgb c = colormap(values[i], anchors);
        img.rgb[3 * i] = c.r;
        img.rgb[3 * i + 1] = c.g;
        img.rgb[3 * i + 2] = c.b;
    }
    return img;
}

namespace {

void append_bytes(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + length);
}

void flush_noop(png_structp) {}

thread_local std::string g_png_error;

void png_error_handler(png_structp png, png_const_charp msg) {
    g_png_error = msg ? msg : "unknown error";
    png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

// All locals with destructors live in the caller so longjmp skips nothing.
bool encode_rows(const Image& image, std::vector<std::uint8_t>& out) {
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler, png_warning_handler);
    if (!png) return false;
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    png_set_write_fn(png, &out, append_bytes, flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 3);
    png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_SUB);
    png_write_info(png, info);
    for (int y = 0; y < image.height; ++y) {
        auto* row = const_cast<png_bytep>(image.rgb.data() + static_cast<std::size_t>(y) * image.width * 3);
        png_write_row(png, row);
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& image) {
    if (image.width <= 0 || image.height <= 0 ||
        image.rgb.size() != static_cast<std::size_t>(image.width) * image.height * 3)
        fail(ErrorKind::invalid_argument, "image buffer does not match its dimensions");
    std::vector<std::uint8_t> out;
    g_png_error.clear();
    if (!encode_rows(image, out)) fail(ErrorKind::io_error, "png encoding failed: " + g_png_error);
    return out;
}

void write_png(const Image& image, const std::filesystem::path& path) {
    const auto bytes = encode_png(image);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorKind::io_error, "cannot open " + path.string() + " for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) fail(ErrorKind::io_error, "failed writing " + path.string());
}

}  // namespace sqa
