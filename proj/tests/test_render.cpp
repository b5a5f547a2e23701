#include <doctest.h>

#include <png.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "core/error.hpp"
#include "core/render.hpp"
#include "core/rng.hpp"
#include "core/sample.hpp"

using namespace sqa;

namespace {

// Continuous channel values of the blue-cyan-green-yellow-red ramp.
std::array<long double, 3> ramp(long double t) {
    t = std::clamp(t, 0.0L, 1.0L);
    const long double s = t * 4.0L;
    if (s <= 1) return {0, 255 * s, 255};
    if (s <= 2) return {0, 255, 255 * (2 - s)};
    if (s <= 3) return {255 * (s - 2), 255, 0};
    return {255, 255 * (4 - s), 0};
}

long double sample_bilinear(const Grid<double>& g, int x, int y, int out) {
    const long double scale = static_cast<long double>(g.side) / out;
    auto coord = [&](int k) {
        long double s = (k + 0.5L) * scale - 0.5L;
        return std::clamp(s, 0.0L, static_cast<long double>(g.side - 1));
    };
    const long double sx = coord(x), sy = coord(y);
    const int x0 = static_cast<int>(sx), y0 = static_cast<int>(sy);
    const int x1 = std::min(x0 + 1, g.side - 1), y1 = std::min(y0 + 1, g.side - 1);
    const long double fx = sx - x0, fy = sy - y0;
    return (g.at(y0, x0) * (1 - fx) + g.at(y0, x1) * fx) * (1 - fy) + (g.at(y1, x0) * (1 - fx) + g.at(y1, x1) * fx) * fy;
}

bool channel_matches(std::uint8_t got, long double want) {
    if (got == static_cast<std::uint8_t>(std::lround(static_cast<double>(want)))) return true;
    // Accept either neighbour only when the exact value sits on a rounding edge.
    return std::fabs(std::fabs(want - std::floor(want)) - 0.5L) < 1e-6L && std::fabs(got - want) <= 0.5L + 1e-6L;
}

std::vector<std::uint8_t> decode_png(const std::vector<std::uint8_t>& bytes, int& w, int& h) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    REQUIRE(png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()));
    image.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> out(PNG_IMAGE_SIZE(image));
    REQUIRE(png_image_finish_read(&image, nullptr, out.data(), 0, nullptr));
    w = static_cast<int>(image.width);
    h = static_cast<int>(image.height);
    return out;
}

}  // namespace

TEST_CASE("colormap anchors") {
    CHECK(colormap(0.0) == Rgb{0, 0, 255});
    CHECK(colormap(0.25) == Rgb{0, 255, 255});
    CHECK(colormap(0.5) == Rgb{0, 255, 0});
    CHECK(colormap(0.75) == Rgb{255, 255, 0});
    CHECK(colormap(1.0) == Rgb{255, 0, 0});
    CHECK(colormap(-3.0) == Rgb{0, 0, 255});
    CHECK(colormap(7.0) == Rgb{255, 0, 0});
    CHECK(colormap(0.125) == Rgb{0, 128, 255});
    for (int i = 0; i <= 1000; ++i) {
        const long double t = i / 1000.0L;
        const auto want = ramp(t);
        const Rgb got = colormap(static_cast<double>(t));
        REQUIRE(channel_matches(got.r, want[0]));
        REQUIRE(channel_matches(got.g, want[1]));
        REQUIRE(channel_matches(got.b, want[2]));
    }
}

TEST_CASE("constant grid renders a uniform image at the bottom colour") {
    const Image img = render_heatmap(InterferenceGrid(kGridSide, 0.0));
    CHECK(img.width == kImageSide);
    CHECK(img.height == kImageSide);
    for (int y = 0; y < img.height; y += 7)
        for (int x = 0; x < img.width; x += 7) REQUIRE(img.pixel(x, y) == colormap(0.0));
}

TEST_CASE("every pixel is the colormap of the upsampled dBm-normalised grid") {
    const auto p = simulate_sample(builtin_scenario(ScenarioId::C), 5, 1);
    const Image img = render_heatmap(p.grid);

    Grid<double> dbm(kGridSide);
    for (std::size_t i = 0; i < dbm.cells.size(); ++i) {
        const double v = p.grid.cells[i];
        dbm.cells[i] = v > 0 ? std::max(10.0 * std::log10(v), -200.0) : -200.0;
    }
    const auto [lo, hi] = std::minmax_element(dbm.cells.begin(), dbm.cells.end());
    Grid<double> norm(kGridSide);
    for (std::size_t i = 0; i < dbm.cells.size(); ++i) norm.cells[i] = (dbm.cells[i] - *lo) / (*hi - *lo);

    int mismatches = 0;
    for (int y = 0; y < kImageSide; ++y) {
        for (int x = 0; x < kImageSide; ++x) {
            const auto want = ramp(sample_bilinear(norm, x, y, kImageSide));
            const Rgb got = img.pixel(x, y);
            if (!channel_matches(got.r, want[0]) || !channel_matches(got.g, want[1]) ||
                !channel_matches(got.b, want[2]))
                ++mismatches;
        }
    }
    CHECK(mismatches == 0);
}

TEST_CASE("PNG round trip") {
    const auto p = simulate_sample(builtin_scenario(ScenarioId::A), 2, 0);
    const Image img = render_heatmap(p.grid);
    const auto bytes = encode_png(img);
    REQUIRE(bytes.size() > 8);
    CHECK(bytes[1] == 'P');
    int w = 0, h = 0;
    const auto pixels = decode_png(bytes, w, h);
    CHECK(w == kImageSide);
    CHECK(h == kImageSide);
    CHECK(pixels == img.rgb);
    CHECK(encode_png(img) == bytes);

    const auto dir = std::filesystem::temp_directory_path() / "sqa_render_test";
    std::filesystem::create_directories(dir);
    write_png(img, dir / "x.png");
    CHECK(std::filesystem::file_size(dir / "x.png") == bytes.size());
    CHECK_THROWS_AS(write_png(img, dir / "missing" / "deeper" / "x.png"), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("rendering never feeds back into labels") {
    const auto p = simulate_sample(builtin_scenario(ScenarioId::B), 6, 4);
    const auto before = p.labels;
    (void)render_heatmap(p.grid);
    const auto again = derive_labels(p.grid, p.normalized);
    CHECK(again.mask64 == before.mask64);
    CHECK(again.severity == before.severity);
    CHECK(again.hottest_quadrant == before.hottest_quadrant);
}
