#include <doctest.h>

#include <array>
#include <set>

#include "core/bands.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/sample.hpp"
#include "core/scenario.hpp"

using namespace sqa;

TEST_CASE("band table") {
    const auto& t = default_band_table();
    const std::array<double, 5> freq{1500, 2500, 5000, 14000, 28000};
    const std::array<double, 5> zen{0.03, 0.05, 0.1, 0.3, 1.0};
    for (std::size_t i = 0; i < kBandCount; ++i) {
        CHECK(t[i].id == kAllBands[i]);
        CHECK(t[i].frequency_mhz == freq[i]);
        CHECK(t[i].zenith_attenuation_db == zen[i]);
    }
    CHECK(parse_band("Ku") == Band::Ku);
    CHECK_FALSE(parse_band("X").has_value());

    BandTable bad = t;
    bad[2].zenith_attenuation_db = -0.1;
    CHECK_THROWS_AS(validate_band_table(bad), Error);
}

TEST_CASE("built-in scenarios") {
    struct Row {
        ScenarioId id;
        int sats, bs, users;
        double area, alt;
    };
    const Row rows[] = {{ScenarioId::A, 10, 20, 500, 50, 550},
                        {ScenarioId::B, 3, 5, 100, 200, 35786},
                        {ScenarioId::C, 5, 10, 200, 100, 550}};
    for (const auto& r : rows) {
        const Scenario s = builtin_scenario(r.id);
        CHECK(s.n_satellites == r.sats);
        CHECK(s.n_base_stations == r.bs);
        CHECK(s.n_users == r.users);
        CHECK(s.area_km == r.area);
        CHECK(s.satellite_altitude_km == r.alt);
    }
    CHECK(builtin_scenario("B").satellite_class == SatelliteClass::GEO);
    CHECK_THROWS_AS(builtin_scenario("Z"), Error);
}

TEST_CASE("scenario validation") {
    Scenario s = builtin_scenario(ScenarioId::A);
    s.n_base_stations = 0;
    CHECK_THROWS_AS(validate_scenario(s), Error);
    s = builtin_scenario(ScenarioId::A);
    s.area_km = 0.0;
    CHECK_THROWS_AS(validate_scenario(s), Error);
    s = builtin_scenario(ScenarioId::A);
    s.satellite_altitude_km = -1.0;
    CHECK_THROWS_AS(validate_scenario(s), Error);
}

TEST_CASE("substreams are pure and separated by tag") {
    CHECK(substream_seed(1, 2, StreamTag::placement) == substream_seed(1, 2, StreamTag::placement));
    CHECK(substream_seed(1, 2, StreamTag::placement) != substream_seed(1, 2, StreamTag::qa));
    CHECK(substream_seed(1, 2, StreamTag::placement) != substream_seed(1, 3, StreamTag::placement));
    CHECK(substream_seed(1, 2, StreamTag::placement) != substream_seed(2, 2, StreamTag::placement));

    Rng rng(99);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform_open();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        REQUIRE(rng.below(7) < 7);
    }
    std::array<int, 20> items{};
    for (int i = 0; i < 20; ++i) items[i] = i;
    rng.shuffle(std::span<int>(items));
    std::set<int> seen(items.begin(), items.end());
    CHECK(seen.size() == 20);
}

TEST_CASE("sampling is deterministic per (scenario, seed, index)") {
    const Scenario a = builtin_scenario(ScenarioId::A);
    const auto s1 = transmitters_to_json(sample_transmitters(a, 1234, 0)).dump();
    const auto s2 = transmitters_to_json(sample_transmitters(a, 1234, 0)).dump();
    const auto s3 = transmitters_to_json(sample_transmitters(a, 1234, 1)).dump();
    CHECK(s1 == s2);
    CHECK(s1 != s3);
}

TEST_CASE("scenario B draws eight transmitters, three geostationary") {
    const Scenario b = builtin_scenario(ScenarioId::B);
    for (std::uint64_t k = 0; k < 50; ++k) {
        const auto set = sample_transmitters(b, 5, k);
        REQUIRE(set.transmitters.size() == 8);
        int geo = 0;
        for (const auto& t : set.transmitters) {
            if (t.altitude_km == 35786.0) ++geo;
        }
        CHECK(geo == 3);
    }
}

TEST_CASE("transmitter invariants") {
    const TxPowers powers;
    for (ScenarioId id : {ScenarioId::A, ScenarioId::B, ScenarioId::C}) {
        const Scenario s = builtin_scenario(id);
        for (std::uint64_t k = 0; k < 200; ++k) {
            const auto set = sample_transmitters(s, 77, k);
            REQUIRE(set.transmitters.size() == static_cast<std::size_t>(s.transmitter_count()));
            for (const auto& t : set.transmitters) {
                REQUIRE(t.x_km > 0.0);
                REQUIRE(t.x_km < s.area_km);
                REQUIRE(t.y_km > 0.0);
                REQUIRE(t.y_km < s.area_km);
                if (t.kind == TxKind::base_station) {
                    REQUIRE(t.altitude_km == 0.0);
                    REQUIRE(t.tx_power_dbm == powers.base_station_dbm);
                } else {
                    REQUIRE(t.altitude_km == s.satellite_altitude_km);
                    REQUIRE(t.tx_power_dbm == (s.satellite_class == SatelliteClass::GEO ? powers.geo_dbm
                                                                                        : powers.leo_dbm));
                }
            }
        }
    }
}

TEST_CASE("mixed satellite class alternates LEO and GEO") {
    Scenario s = builtin_scenario(ScenarioId::C);
    s.satellite_class = SatelliteClass::mixed;
    const auto set = sample_transmitters(s, 3, 0);
    int sat = 0;
    for (const auto& t : set.transmitters) {
        if (t.kind != TxKind::satellite) continue;
        CHECK(t.altitude_km == (sat % 2 == 0 ? s.satellite_altitude_km : kGeoAltitudeKm));
        ++sat;
    }
    CHECK(sat == s.n_satellites);
}

TEST_CASE("band assignment marginal is uniform") {
    const Scenario b = builtin_scenario(ScenarioId::B);
    std::array<long, kBandCount> counts{};
    long total = 0;
    for (std::uint64_t k = 0; k < 10000; ++k) {
        for (const auto& t : sample_transmitters(b, 2024, k).transmitters) {
            ++counts[band_index(t.band)];
            ++total;
        }
    }
    for (long c : counts) {
        const double f = static_cast<double>(c) / static_cast<double>(total);
        CHECK(f >= 0.18);
        CHECK(f <= 0.22);
    }
}
