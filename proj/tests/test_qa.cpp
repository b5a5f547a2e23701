#include <doctest.h>

#include <map>
#include <regex>
#include <set>

#include "core/error.hpp"
#include "core/metadata.hpp"
#include "core/qa.hpp"
#include "core/rng.hpp"
#include "core/sample.hpp"
#include "core/templates.hpp"

using namespace sqa;

namespace {

SampleProducts products_for(TransmitterSet set) {
    SampleProducts p;
    p.transmitters = std::move(set);
    p.grid = total_interference_grid(p.transmitters);
    p.normalized = normalize(p.grid);
    p.labels = derive_labels(p.grid, p.normalized);
    p.hotspots = connected_hotspots(p.labels.mask64);
    return p;
}

TransmitterSet band_set(const std::vector<std::pair<Band, TxKind>>& spec) {
    TransmitterSet s;
    s.area_km = 50;
    Rng rng(1);
    int id = 0;
    for (const auto& [band, kind] : spec) {
        Transmitter t;
        t.id = id++;
        t.kind = kind;
        t.band = band;
        t.x_km = rng.uniform_open() * 50;
        t.y_km = rng.uniform_open() * 50;
        t.altitude_km = kind == TxKind::satellite ? 550 : 0;
        t.tx_power_dbm = kind == TxKind::satellite ? 60 : 46;
        s.transmitters.push_back(t);
    }
    return s;
}

std::vector<std::pair<Band, TxKind>> repeat(Band b, TxKind k, int n) {
    return std::vector<std::pair<Band, TxKind>>(static_cast<std::size_t>(n), {b, k});
}

std::vector<std::pair<Band, TxKind>> concat(std::initializer_list<std::vector<std::pair<Band, TxKind>>> parts) {
    std::vector<std::pair<Band, TxKind>> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

SampleMetadata simulated_metadata(ScenarioId id, std::uint64_t seed, std::uint64_t index) {
    const auto p = simulate_sample(builtin_scenario(id), seed, index);
    return extract_metadata("s" + std::to_string(index), p);
}

}  // namespace

TEST_CASE("per-band counts and shared bands") {
    const auto set = band_set(concat({repeat(Band::Ka, TxKind::satellite, 3), repeat(Band::Ka, TxKind::base_station, 4),
                                      repeat(Band::L, TxKind::base_station, 1)}));
    const auto m = extract_metadata("x", products_for(set));
    CHECK(m.count(Band::Ka).satellites == 3);
    CHECK(m.count(Band::Ka).base_stations == 4);
    CHECK(m.shared_bands == std::vector<Band>{Band::Ka});

    const auto single = band_set({{Band::L, TxKind::satellite},
                                  {Band::S, TxKind::base_station},
                                  {Band::C, TxKind::base_station},
                                  {Band::Ku, TxKind::satellite},
                                  {Band::Ka, TxKind::base_station}});
    const auto ms = extract_metadata("y", products_for(single));
    CHECK(ms.shared_bands.empty());
    CHECK_FALSE(ms.mitigation.has_value());
}

TEST_CASE("per-band counts match an independent tally") {
    for (std::uint64_t k = 0; k < 100; ++k) {
        const ScenarioId id = static_cast<ScenarioId>(k % 3);
        const auto p = simulate_sample(builtin_scenario(id), 40, k);
        const auto m = extract_metadata("t", p);
        std::map<std::string, std::pair<int, int>> tally;
        for (const auto& t : p.transmitters.transmitters) {
            auto& e = tally[std::string(band_name(t.band))];
            (t.altitude_km > 0 ? e.first : e.second) += 1;
        }
        for (Band b : kAllBands) {
            const auto e = tally[std::string(band_name(b))];
            REQUIRE(m.count(b).satellites == e.first);
            REQUIRE(m.count(b).base_stations == e.second);
            REQUIRE(m.is_shared(b) == (e.first + e.second >= 2));
        }
    }
}

TEST_CASE("mitigation rule") {
    // C carries 7 (5 satellites), L the fewest.
    const auto seven = band_set(concat({repeat(Band::C, TxKind::satellite, 5), repeat(Band::C, TxKind::base_station, 2),
                                        repeat(Band::S, TxKind::base_station, 3), repeat(Band::Ku, TxKind::base_station, 2),
                                        repeat(Band::Ka, TxKind::satellite, 2), repeat(Band::L, TxKind::base_station, 1)}));
    auto m = extract_metadata("a", products_for(seven));
    REQUIRE(m.mitigation.has_value());
    CHECK(m.mitigation->source == Band::C);
    CHECK(m.mitigation->target == Band::L);
    CHECK(m.mitigation->moved == 2);
    CHECK(m.mitigation->before == 7);
    CHECK(m.mitigation->after == 5);

    const auto eight = band_set(concat({repeat(Band::C, TxKind::satellite, 3), repeat(Band::C, TxKind::base_station, 5),
                                        repeat(Band::S, TxKind::base_station, 2)}));
    m = extract_metadata("b", products_for(eight));
    REQUIRE(m.mitigation.has_value());
    CHECK(m.mitigation->before == 8);
    CHECK(m.mitigation->after == 6);
    CHECK(m.mitigation->target == Band::L);

    const auto one_sat = band_set(concat({repeat(Band::Ku, TxKind::satellite, 1), repeat(Band::Ku, TxKind::base_station, 4)}));
    m = extract_metadata("c", products_for(one_sat));
    REQUIRE(m.mitigation.has_value());
    CHECK(m.mitigation->moved == 1);
    CHECK(m.mitigation->after == m.mitigation->before - 1);

    const auto no_sat = band_set(repeat(Band::S, TxKind::base_station, 4));
    CHECK_FALSE(extract_metadata("d", products_for(no_sat)).mitigation.has_value());
}

TEST_CASE("templates") {
    const auto& t = default_templates();
    CHECK_NOTHROW(validate_templates(t));
    for (const auto& tmpl : t) {
        CHECK(tmpl.variants.size() >= 4);
        CHECK(tmpl.variants.size() <= 8);
    }
    auto broken = t;
    broken[0].variants.resize(3);
    CHECK_THROWS_AS(validate_templates(broken), Error);
    broken = t;
    broken[0].variants[0].answer = "Nothing useful.";
    CHECK_THROWS_AS(validate_templates(broken), Error);
    broken = t;
    broken[0].variants[0].answer += " {no_such_key}";
    CHECK_THROWS_AS(validate_templates(broken), Error);
    CHECK_THROWS_AS(expand("{band", FactTable{}), Error);
}

TEST_CASE("answer builders are total over simulated metadata") {
    for (std::uint64_t k = 0; k < 60; ++k) {
        const auto m = simulated_metadata(static_cast<ScenarioId>(k % 3), 90, k);
        for (const auto& tmpl : default_templates()) {
            if (!is_applicable(tmpl.applicability, m)) continue;
            for (int v = 0; v < static_cast<int>(tmpl.variants.size()); ++v) {
                const QAPair p = build_pair(m, tmpl, v);
                REQUIRE(p.answer.find('{') == std::string::npos);
                for (const auto& [key, value] : p.grounded) REQUIRE(contains_field(p.answer, value));
            }
        }
    }
}

TEST_CASE("descriptive and localization answers") {
    const auto set = band_set(concat({repeat(Band::Ka, TxKind::satellite, 3), repeat(Band::Ka, TxKind::base_station, 4),
                                      repeat(Band::S, TxKind::base_station, 2)}));
    const auto m = extract_metadata("x", products_for(set));
    const QAPair d = build_pair(m, *find_template(default_templates(), "desc.congested_band"), 0);
    CHECK(d.question == "Which frequency band is most congested?");
    CHECK(d.answer ==
          "The Ka band is most congested with 3 satellite beams and 4 terrestrial stations sharing the same frequency.");

    const QAPair l = build_pair(m, *find_template(default_templates(), "loc.hottest_region"), 0);
    CHECK(contains_field(l.answer, quadrant_long_name(m.hottest_quadrant)));
}

TEST_CASE("descriptive counts agree with a re-tally of the transmitter set") {
    const std::regex counts(R"(The (\w+) band is most congested with (\d+) satellite beams? and (\d+) terrestrial stations?)");
    for (std::uint64_t k = 0; k < 100; ++k) {
        const auto p = simulate_sample(builtin_scenario(static_cast<ScenarioId>(k % 3)), 41, k);
        const auto m = extract_metadata("t", p);
        if (m.shared_bands.empty()) continue;
        const QAPair q = build_pair(m, *find_template(default_templates(), "desc.congested_band"), 0);
        std::smatch match;
        REQUIRE(std::regex_search(q.answer, match, counts));
        const Band b = *parse_band(match[1].str());
        int sats = 0, bs = 0, best = 0;
        std::array<int, kBandCount> totals{};
        for (const auto& t : p.transmitters.transmitters) {
            ++totals[band_index(t.band)];
            if (t.band == b) (t.kind == TxKind::satellite ? sats : bs) += 1;
        }
        for (int v : totals) best = std::max(best, v);
        CHECK(totals[band_index(b)] == best);
        CHECK(std::stoi(match[2].str()) == sats);
        CHECK(std::stoi(match[3].str()) == bs);
    }
}

TEST_CASE("generation is deterministic and avoids repeats") {
    const auto m = simulated_metadata(ScenarioId::A, 3, 0);
    Rng r1(substream_seed(3, 0, StreamTag::qa)), r2(substream_seed(3, 0, StreamTag::qa));
    const auto a = generate_qa(m, default_templates(), r1, 10);
    const auto b = generate_qa(m, default_templates(), r2, 10);
    CHECK(a.pairs == b.pairs);
    CHECK(a.pairs.size() == 10);
    std::set<std::pair<std::string, int>> used;
    for (const auto& p : a.pairs) CHECK(used.insert({p.template_id, p.variant}).second);
    CHECK_THROWS_AS(generate_qa(m, default_templates(), r1, 0), Error);
}

TEST_CASE("category proportions over a large draw") {
    std::array<double, 4> drawn{};
    double total = 0;
    for (std::uint64_t k = 0; k < 300; ++k) {
        const auto m = simulated_metadata(static_cast<ScenarioId>(k % 3), 12, k);
        for (std::uint64_t rep = 0; rep < 4; ++rep) {
            Rng rng(12, k * 4 + rep, StreamTag::qa);
            const auto batch = generate_qa(m, default_templates(), rng, 10);
            for (const auto& p : batch.pairs) drawn[static_cast<std::size_t>(p.category)] += 1;
            // Substituted draws were prescriptive before the fallback.
            drawn[0] -= batch.substitutions;
            drawn[3] += batch.substitutions;
            total += static_cast<double>(batch.pairs.size());
        }
    }
    REQUIRE(total >= 10000);
    for (std::size_t c = 0; c < 4; ++c) CHECK(std::fabs(drawn[c] / total - kCategoryProbabilities[c]) <= 0.02);
}

TEST_CASE("verification catches ungrounded answers") {
    const auto m = simulated_metadata(ScenarioId::B, 77, 5);
    std::map<std::string, SampleMetadata> lookup{{m.sample_id, m}};
    Rng rng(77, 5, StreamTag::qa);
    auto batch = generate_qa(m, default_templates(), rng, 10);
    CHECK(verify_qa(batch.pairs, lookup).factual_failures == 0);

    auto broken = batch.pairs;
    QAPair p = build_pair(m, *find_template(default_templates(), "desc.congested_band"), 0);
    const std::string band = p.grounded.front().second;
    p.answer = "The most congested band has many transmitters.";
    broken.push_back(p);
    const auto report = verify_qa(broken, lookup);
    CHECK(report.factual_failures == 1);
    CHECK_FALSE(report.passed());

    QAPair wrong = build_pair(m, *find_template(default_templates(), "loc.hottest_region"), 0);
    wrong.grounded.front().second = "nowhere";
    CHECK(verify_qa(std::vector<QAPair>{wrong}, lookup).factual_failures == 1);
    CHECK(verify_qa(batch.pairs, std::map<std::string, SampleMetadata>{}).factual_failures == batch.pairs.size());
}

TEST_CASE("whole-word containment and window uniqueness") {
    CHECK(contains_field("The C band is busy", "C"));
    CHECK_FALSE(contains_field("Cyan band", "C"));
    CHECK(contains_field("C-band", "C"));
    CHECK(contains_field("peak -33.39 dBm", "-33.39"));
    CHECK_FALSE(contains_field("0.251", "0.25"));

    std::vector<std::string> t;
    for (int i = 0; i < 150; ++i) t.push_back(std::to_string(i));
    CHECK(min_unique_in_windows(t, 100) == 100);
    t[120] = t[60];
    CHECK(min_unique_in_windows(t, 100) == 99);
    CHECK(min_unique_in_windows(std::vector<std::string>{"a", "a", "b"}, 100) == 2);
}

TEST_CASE("L4 reference answer") {
    const auto m = simulated_metadata(ScenarioId::C, 9, 9);
    const QAPair r = l4_reference(m);
    CHECK(r.category == QaCategory::reasoning);
    CHECK(r.variant == 0);
    CHECK_FALSE(r.answer.empty());
}

TEST_CASE("pair JSON round trip") {
    const auto m = simulated_metadata(ScenarioId::A, 1, 1);
    Rng rng(1, 1, StreamTag::qa);
    for (const auto& p : generate_qa(m, default_templates(), rng, 10).pairs) {
        CHECK(pair_from_json(nlohmann::ordered_json::parse(pair_to_json(p).dump())) == p);
    }
}
