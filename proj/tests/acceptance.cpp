// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "core/composite.hpp"
#include "core/dataset.hpp"
#include "core/metadata.hpp"
#include "core/metrics.hpp"
#include "core/propagation.hpp"
#include "core/qa.hpp"
#include "core/radiomap.hpp"
#include "core/rng.hpp"
#include "core/sample.hpp"
#include "core/scoring.hpp"

using namespace sqa;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned tolerances.
constexpr double kCompositeTol = 0.001;
constexpr double kDeltaTolPoints = 0.2;
constexpr double kFsplTolDb = 1e-9;
constexpr double kFsplMaxSeconds = 1.0;
constexpr double kFractionLo = 0.2495, kFractionHi = 0.2505;
constexpr double kDeskBuildMaxSeconds = 60.0;
constexpr double kSynthTarget = 0.7, kSynthTol = 0.045;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s | %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str());
    std::fflush(stdout);
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Grid<double> random_grid(Rng& rng) {
    Grid<double> g(kGridSide);
    for (auto& v : g.cells) v = rng.uniform();
    return g;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

Outcome table_iv() {
    const auto t0 = Clock::now();
    ModelScores s;
    s["CNN"] = {0.729, 0.657, 0.552, 0.0};
    s["VLM"] = {0.006, 0.336, 0.467, 0.576};
    const auto report = composite_report(s, WeightScheme{}, standard_configurations("CNN", "VLM"));
    const double want[] = {0.443, 0.381, 0.407, 0.616};
    bool ok = report.rows.size() == 4;
    std::string detail;
    for (std::size_t i = 0; ok && i < 4; ++i) {
        ok = ok && std::fabs(report.rows[i].score - want[i]) <= kCompositeTol;
        detail += fmt::format("{}={:.4f} ", report.rows[i].name.substr(0, report.rows[i].name.find(' ')), report.rows[i].score);
    }
    const double delta = report.rows.size() == 4 ? report.rows[3].delta_pct : 0.0;
    ok = ok && std::fabs(delta - 39.1) <= kDeltaTolPoints;
    detail += fmt::format("delta={:+.2f}% (tol {} / {} pts) in {:.3f} ms", delta, kCompositeTol, kDeltaTolPoints,
                          1e3 * seconds_since(t0));
    return {ok, detail};
}

Outcome fspl_oracle() {
    const auto t0 = Clock::now();
    Rng rng(20251015);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double d = std::pow(10.0, -3.0 + 8.0 * rng.uniform());
        const double f = 100.0 + 50000.0 * rng.uniform();
        const long double want = 20.0L * std::log10(static_cast<long double>(d)) +
                                 20.0L * std::log10(static_cast<long double>(f)) + 32.45L;
        worst = std::max(worst, static_cast<double>(std::fabs(free_space_path_loss(d, f) - want)));
    }
    const double unit = free_space_path_loss(1.0, 1.0);
    const double secs = seconds_since(t0);
    const bool ok = worst <= kFsplTolDb && unit == 32.45 && secs < kFsplMaxSeconds;
    return {ok, fmt::format("max |err| = {:.3g} dB over 1000 points (tol {:g}); FSPL(1 km, 1 MHz) = {:.17g}; {:.3f} s",
                            worst, kFsplTolDb, unit, secs)};
}

Outcome quantile_property() {
    Rng rng(3);
    double lo = 1.0, hi = 0.0;
    for (int t = 0; t < 200; ++t) {
        const double rho = positive_fraction(interference_mask(normalize(random_grid(rng))));
        lo = std::min(lo, rho);
        hi = std::max(hi, rho);
    }
    Grid<double> distinct(kGridSide);
    for (std::size_t i = 0; i < distinct.cells.size(); ++i) distinct.cells[i] = static_cast<double>(i);
    std::vector<double> sorted = distinct.cells;
    std::sort(sorted.begin(), sorted.end());
    const double pos = 0.75 * (sorted.size() - 1);
    const auto k = static_cast<std::size_t>(pos);
    const double q = sorted[k] + (sorted[k + 1] - sorted[k]) * (pos - k);
    const long oracle = std::count_if(sorted.begin(), sorted.end(), [&](double v) { return v > q; });
    const auto mask = interference_mask(normalize(distinct));
    const long got = std::count(mask.cells.begin(), mask.cells.end(), 1);
    const bool ok = lo >= kFractionLo && hi <= kFractionHi && got == 1024 && oracle == 1024;
    return {ok, fmt::format("random grids rho in [{:.5f}, {:.5f}] (bound [{}, {}]); distinct grid {} positives, oracle {}",
                            lo, hi, kFractionLo, kFractionHi, got, oracle)};
}

Outcome label_oracles() {
    const std::pair<double, Severity> bounds[] = {
        {0.1499, Severity::low}, {0.15, Severity::moderate}, {0.3499, Severity::moderate}, {0.35, Severity::high}};
    bool sev_ok = true;
    for (const auto& [rho, want] : bounds) sev_ok = sev_ok && severity_from_fraction(rho) == want;

    Rng rng(4);
    int agree = 0;
    for (int t = 0; t < 500; ++t) {
        const auto g = normalize(random_grid(rng));
        std::array<long double, 4> sum{};
        for (int r = 0; r < kGridSide; ++r)
            for (int c = 0; c < kGridSide; ++c) sum[(r >= 32 ? 2 : 0) + (c >= 32 ? 1 : 0)] += g.at(r, c);
        int best = 0;
        for (int q = 1; q < 4; ++q)
            if (sum[q] > sum[best]) best = q;
        agree += hottest_quadrant(g) == static_cast<Quadrant>(best);
    }
    const bool tie_ok = hottest_quadrant(Grid<double>(kGridSide, 0.5)) == Quadrant::NW;
    return {sev_ok && agree == 500 && tie_ok,
            fmt::format("boundary severities {}; quadrant oracle agreement {}/500; uniform grid -> {}",
                        sev_ok ? "correct" : "WRONG", agree, tie_ok ? "NW" : "not NW")};
}

Outcome metric_oracles() {
    Rng rng(5);
    int iou_ok = 0, lcs_ok = 0;
    for (int t = 0; t < 500; ++t) {
        Mask a(kCoarseSide), b(kCoarseSide);
        const double pa = rng.uniform(), pb = rng.uniform();
        for (auto& v : a.cells) v = rng.bernoulli(pa) ? 1 : 0;
        for (auto& v : b.cells) v = rng.bernoulli(pb) ? 1 : 0;
        int inter = 0, uni = 0;
        for (std::size_t i = 0; i < a.cells.size(); ++i) {
            inter += a.cells[i] && b.cells[i];
            uni += a.cells[i] || b.cells[i];
        }
        iou_ok += iou(a, b) == (uni == 0 ? 1.0 : static_cast<double>(inter) / uni);

        std::vector<std::string> x(rng.below(30)), y(rng.below(30));
        for (auto& s : x) s = std::string(1, static_cast<char>('a' + rng.below(6)));
        for (auto& s : y) s = std::string(1, static_cast<char>('a' + rng.below(6)));
        std::vector<std::vector<std::size_t>> dp(x.size() + 1, std::vector<std::size_t>(y.size() + 1, 0));
        for (std::size_t i = 1; i <= x.size(); ++i)
            for (std::size_t j = 1; j <= y.size(); ++j)
                dp[i][j] = x[i - 1] == y[j - 1] ? dp[i - 1][j - 1] + 1 : std::max(dp[i - 1][j], dp[i][j - 1]);
        lcs_ok += lcs_length(x, y) == dp[x.size()][y.size()];
    }
    const double f1 = keyword_f1("ka band congested", "ka band interference high");
    const bool f1_ok = f1 == 4.0 / 7.0;
    return {iou_ok == 500 && lcs_ok == 500 && f1_ok,
            fmt::format("IoU oracle {}/500; LCS oracle {}/500; keyword F1 = {:.17g} (4/7 = {:.17g})", iou_ok, lcs_ok, f1,
                        4.0 / 7.0)};
}

struct DeskRun {
    double seconds = 0;
    BuildResult result;
};

DeskRun desk_build(const fs::path& dir, int workers) {
    DatasetConfig c;
    c.master_seed = 20251015;
    c.images = 300;
    c.qa_per_image = 10;
    c.workers = workers;
    fs::remove_all(dir);
    const auto t0 = Clock::now();
    DeskRun run;
    run.result = build_dataset(c, dir);
    run.seconds = seconds_since(t0);
    return run;
}

Outcome qa_qc(const DeskRun& run) {
    const auto& r = run.result;
    std::vector<std::string> reasoning;
    for (const auto& p : r.pairs)
        if (p.category == QaCategory::reasoning) reasoning.push_back(p.answer);
    const std::size_t min_unique = min_unique_in_windows(reasoning, 100);
    const bool ok = r.samples.size() == 300 && r.pairs.size() == 3000 && r.qc.factual_failures == 0 &&
                    reasoning.size() >= 100 && min_unique == 100 && run.seconds < kDeskBuildMaxSeconds;
    return {ok, fmt::format("{} images, {} pairs, {} factual failures, {} reasoning answers, min unique per 100-window "
                            "{}; build {:.1f} s (limit {:.0f} s)",
                            r.samples.size(), r.pairs.size(), r.qc.factual_failures, reasoning.size(), min_unique,
                            run.seconds, kDeskBuildMaxSeconds)};
}

Outcome determinism(const fs::path& a, const fs::path& b, int workers_a, int workers_b) {
    std::size_t manifests = 0, labels = 0, pngs = 0, other = 0, differ = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        const auto rel = fs::relative(e.path(), a);
        const auto twin = b / rel;
        if (!fs::exists(twin) || slurp(e.path()) != slurp(twin)) ++differ;
        const auto name = rel.filename().string();
        if (name == "manifest.json") ++manifests;
        else if (name == "labels.json") ++labels;
        else if (name == "heatmap.png") ++pngs;
        else ++other;
    }
    std::size_t count_b = 0;
    for (const auto& e : fs::recursive_directory_iterator(b)) count_b += e.is_regular_file();
    const std::size_t count_a = manifests + labels + pngs + other;
    const bool ok = differ == 0 && count_a == count_b && manifests == 1 && labels == 300 && pngs == 300;
    return {ok, fmt::format("workers {} vs {}: {} manifest, {} label records, {} PNGs, {} other files; {} differ",
                            workers_a, workers_b, manifests, labels, pngs, other, differ)};
}

Outcome harness_calibration() {
    GoldSet gold;
    const std::vector<ScenarioId> mix{ScenarioId::A, ScenarioId::B, ScenarioId::C};
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const auto p = simulate_sample(builtin_scenario(mix[i % 3]), 8, i);
        const auto meta = extract_metadata(sample_id_for(i), p);
        gold.add({meta.sample_id, p.labels.severity, p.labels.hottest_quadrant, p.labels.mask16, l4_reference(meta).answer});
    }
    SynthOptions o;
    o.error_rate = 0.3;
    o.seed = 20251015;
    const auto scores = score_predictions(synth_predict(gold, Level::L1, o), gold);
    const double acc = *scores.score[0];
    return {std::fabs(acc - kSynthTarget) <= kSynthTol && scores.count[0] == 1000,
            fmt::format("L1 accuracy {:.4f} over {} samples (target {} +/- {})", acc, scores.count[0], kSynthTarget,
                        kSynthTol)};
}

}  // namespace

int main() {
    const fs::path root = fs::temp_directory_path() / "sqa_acceptance";
    const int many = static_cast<int>(std::max(2u, std::thread::hardware_concurrency()));

    report(1, "routing composites reproduce the reference table", table_iv);
    report(2, "FSPL against extended-precision oracle", fspl_oracle);
    report(3, "Q75 mask quantile property", quantile_property);
    report(4, "L1/L2 label oracles", label_oracles);
    report(5, "IoU, LCS and keyword F1 oracles", metric_oracles);

    DeskRun first, second;
    bool built = true;
    std::string build_error;
    try {
        first = desk_build(root / "run1", 1);
        second = desk_build(root / "run2", many);
    } catch (const std::exception& e) {
        built = false;
        build_error = e.what();
    }
    report(6, "desk-scale QA corpus passes verification", [&]() -> Outcome {
        if (!built) return {false, "build failed: " + build_error};
        return qa_qc(first);
    });
    report(7, "same seed gives byte-identical outputs across worker counts", [&]() -> Outcome {
        if (!built) return {false, "build failed: " + build_error};
        return determinism(root / "run1", root / "run2", 1, many);
    });
    report(8, "synthetic predictions calibrate the scorer", harness_calibration);

    std::printf("INFO criterion 9: model-side numbers (trained CNN/VLM accuracies, IoU, F1, layer curves) are not "
                "reproducible here; they enter only as fixed per-level inputs to criterion 1 and as prediction files\n");
    fs::remove_all(root);
    std::printf("%s: %d failing\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
    return failures == 0 ? 0 : 1;
}
