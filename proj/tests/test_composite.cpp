#include <doctest.h>

#include <cmath>

#include "core/composite.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"

using namespace sqa;

namespace {

ModelScores reference() {
    ModelScores s;
    s["CNN"] = {0.729, 0.657, 0.552, 0.0};
    s["VLM"] = {0.006, 0.336, 0.467, 0.576};
    return s;
}

double composite_of(const ModelScores& s, const WeightScheme& w, const RoutingRule& r) {
    return composite(s, w, r).score;
}

}  // namespace

TEST_CASE("routing table reproduces the four reference composites") {
    const auto s = reference();
    const WeightScheme w;
    CHECK(std::fabs(composite_of(s, w, {"CNN", "CNN", "CNN", "CNN"}) - 0.443) <= 0.001);
    const auto report = composite_report(s, w, standard_configurations("CNN", "VLM"));
    REQUIRE(report.rows.size() == 4);
    const double want[] = {0.443, 0.381, 0.407, 0.616};
    for (int i = 0; i < 4; ++i) CHECK(std::fabs(report.rows[i].score - want[i]) <= 0.001);
    CHECK(std::fabs(report.rows[3].delta_pct - 39.1) <= 0.2);
    CHECK(report.rows[0].delta_pct == 0.0);
    CHECK(report.rows[2].routing == RoutingRule{"VLM", "VLM", "CNN", "VLM"});
    CHECK(report.rows[3].routing == RoutingRule{"CNN", "CNN", "CNN", "VLM"});

    // L1 moved to the second model, everything else as in the optimal router.
    CHECK(composite_of(s, w, {"VLM", "CNN", "CNN", "VLM"}) ==
          doctest::Approx(0.2 * 0.006 + 0.2 * 0.657 + 0.3 * 0.552 + 0.3 * 0.576).epsilon(1e-15));
    CHECK(std::fabs(composite_of(s, w, {"VLM", "CNN", "CNN", "VLM"}) - 0.471) <= 0.0005);
}

TEST_CASE("composite is the weighted sum of routed scores") {
    Rng rng(6);
    for (int t = 0; t < 200; ++t) {
        ModelScores s;
        for (const char* m : {"a", "b", "c"}) s[m] = {rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
        std::array<double, 4> raw{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
        const double total = raw[0] + raw[1] + raw[2] + raw[3];
        WeightScheme w{"custom", {raw[0] / total, raw[1] / total, raw[2] / total, 0}};
        w.w[3] = 1.0 - w.w[0] - w.w[1] - w.w[2];
        RoutingRule r;
        const char* names[] = {"a", "b", "c"};
        for (auto& m : r) m = names[rng.below(3)];
        double want = 0;
        for (int i = 0; i < 4; ++i) want += w.w[i] * *s[r[i]][i];
        REQUIRE(composite_of(s, w, r) == doctest::Approx(want).epsilon(1e-15));
    }
}

TEST_CASE("weight validation and schemes") {
    CHECK_THROWS_AS(validate_weights({"bad", {0.3, 0.3, 0.3, 0.3}}), Error);
    CHECK_THROWS_AS(validate_weights({"bad", {1.2, -0.2, 0.0, 0.0}}), Error);
    CHECK_NOTHROW(validate_weights({"ok", {0.25, 0.25, 0.25, 0.25}}));
    for (const auto& scheme : named_weight_schemes()) {
        CHECK_NOTHROW(validate_weights(scheme));
    }
    CHECK(find_weight_scheme("equal")->w == std::array<double, 4>{0.25, 0.25, 0.25, 0.25});
    CHECK_FALSE(find_weight_scheme("nope").has_value());
    CHECK_THROWS_AS(composite(reference(), {"bad", {0.5, 0.5, 0.5, 0}}, {"CNN", "CNN", "CNN", "CNN"}), Error);
}

TEST_CASE("scaling one weight follows the closed form") {
    const auto s = reference();
    const WeightScheme w;
    const RoutingRule r{"CNN", "CNN", "CNN", "VLM"};
    const std::array<double, 4> routed{0.729, 0.657, 0.552, 0.576};
    for (Level level : kAllLevels) {
        for (double lambda : {0.0, 0.5, 2.0, 3.7}) {
            const std::size_t i = level_index(level);
            const WeightScheme scaled = scale_weight(w, level, lambda);
            const double denom = 1.0 - w.w[i] + lambda * w.w[i];
            double want = lambda * w.w[i] * routed[i];
            for (std::size_t j = 0; j < 4; ++j)
                if (j != i) want += w.w[j] * routed[j];
            want /= denom;
            CHECK(composite_of(s, scaled, r) == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("missing scores and unknown models") {
    ModelScores s = reference();
    s["CNN"][3].reset();
    const auto r = composite(s, WeightScheme{}, {"CNN", "CNN", "CNN", "CNN"});
    CHECK(r.score == doctest::Approx(0.2 * 0.729 + 0.2 * 0.657 + 0.3 * 0.552));
    CHECK(r.warnings.size() == 1);
    CHECK_THROWS_AS(composite(s, WeightScheme{}, {"CNN", "CNN", "GPT", "CNN"}), Error);
}

TEST_CASE("exhaustive search recovers the per-level argmax") {
    const auto best = best_routing(reference(), WeightScheme{});
    CHECK(best.routing == RoutingRule{"CNN", "CNN", "CNN", "VLM"});

    Rng rng(10);
    for (int t = 0; t < 100; ++t) {
        ModelScores s;
        s["x"] = {rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
        s["y"] = {rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
        RoutingRule want;
        for (int i = 0; i < 4; ++i) want[i] = *s["x"][i] >= *s["y"][i] ? "x" : "y";
        CHECK(best_routing(s, WeightScheme{}).routing == want);
    }
}

TEST_CASE("equal weights recompute with discrepancy notes") {
    const auto s = reference();
    const auto w = *find_weight_scheme("equal");
    const auto report = composite_report(s, w, standard_configurations("CNN", "VLM"));
    CHECK(report.rows[0].score == doctest::Approx(0.4845).epsilon(1e-12));
    const auto notes = reference_discrepancies(report, s, "CNN", "VLM");
    CHECK_FALSE(notes.empty());
    CHECK(notes.front().find("0.474") != std::string::npos);

    ModelScores other = s;
    other["CNN"][0] = 0.5;
    CHECK(reference_discrepancies(composite_report(other, w, standard_configurations("CNN", "VLM")), other, "CNN",
                                  "VLM")
              .empty());
    CHECK(reference_discrepancies(composite_report(s, WeightScheme{}, standard_configurations("CNN", "VLM")), s, "CNN",
                                  "VLM")
              .empty());
}

TEST_CASE("report formatting") {
    const auto report = composite_report(reference(), WeightScheme{}, standard_configurations("CNN", "VLM"));
    const auto table = format_report_table(report);
    CHECK(table.find("CNN-only") != std::string::npos);
    CHECK(table.find("0.616") != std::string::npos);
    CHECK(table.find("+39.0%") != std::string::npos);
    const auto j = report_to_json(report);
    CHECK(j["rows"].size() == 4);
    CHECK(routing_to_string({"VLM", "CNN", "CNN", "VLM"}) == "L1->VLM, L2->CNN, L3->CNN, L4->VLM");
}
