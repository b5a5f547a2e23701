#include "core/templates.hpp"

#include <fmt/format.h>

#include <set>

#include "core/error.hpp"

namespace sqa {

std::string_view category_name(QaCategory c) {
    switch (c) {
        case QaCategory::descriptive: return "descriptive";
        case QaCategory::localization: return "localization";
        case QaCategory::reasoning: return "reasoning";
        case QaCategory::prescriptive: return "prescriptive";
    }
    return "?";
}

std::optional<QaCategory> parse_category(std::string_view name) {
    for (QaCategory c : kAllCategories) {
        if (category_name(c) == name) return c;
    }
    return std::nullopt;
}

namespace {

std::string plural(int n, std::string_view one, std::string_view many) {
    return fmt::format("{} {}", n, n == 1 ? one : many);
}

std::string band_list(const std::vector<Band>& bands) {
    if (bands.empty()) return "none";
    std::string out;
    for (std::size_t i = 0; i < bands.size(); ++i) {
        if (i > 0) out += (i + 1 == bands.size()) ? " and " : ", ";
        out += band_name(bands[i]);
    }
    return out;
}

std::string three(double v) { return fmt::format("{:.3f}", v); }

}  // namespace

FactTable sample_facts(const SampleMetadata& m) {
    FactTable f;
    f["scenario"] = std::string(scenario_name(m.scenario));

    const Band hot_band = m.most_congested_band();
    const BandCount& hb = m.count(hot_band);
    f["band"] = std::string(band_name(hot_band));
    f["band_sats"] = std::to_string(hb.satellites);
    f["band_bs"] = std::to_string(hb.base_stations);
    f["band_total"] = std::to_string(hb.total());
    f["band_sats_phrase"] = plural(hb.satellites, "satellite beam", "satellite beams");
    f["band_bs_phrase"] = plural(hb.base_stations, "terrestrial station", "terrestrial stations");

    f["severity"] = std::string(severity_name(m.severity));
    f["pct"] = fmt::format("{:.1f}", 100.0 * m.positive_fraction);

    const int spots = static_cast<int>(m.hotspots.size());
    f["hotspot_count"] = std::to_string(spots);
    f["hotspot_noun"] = spots == 1 ? "hotspot" : "hotspots";
    f["hotspot_verb"] = spots == 1 ? "is" : "are";

    const int shared = static_cast<int>(m.shared_bands.size());
    f["shared_count"] = std::to_string(shared);
    f["shared_list"] = band_list(m.shared_bands);
    f["shared_noun"] = shared == 1 ? "band" : "bands";
    f["shared_verb"] = shared == 1 ? "is" : "are";

    const Quadrant hot_q = m.hottest_quadrant;
    const Quadrant cool_q = m.coolest_quadrant();
    const auto mean_of = [&](Quadrant q) { return m.quadrant_means[static_cast<std::size_t>(q)]; };
    f["quadrant"] = std::string(quadrant_long_name(hot_q));
    f["quadrant_code"] = std::string(quadrant_code(hot_q));
    f["quadrant_mean"] = three(mean_of(hot_q));
    f["cool_quadrant"] = std::string(quadrant_long_name(cool_q));
    f["cool_mean"] = three(mean_of(cool_q));
    f["spread"] = three(mean_of(hot_q) - mean_of(cool_q));
    f["peak_dbm"] = fmt::format("{:.2f}", m.peak_dbm);
    f["quadrant_dbm"] = fmt::format("{:.2f}", m.quadrant_power_dbm[static_cast<std::size_t>(hot_q)]);

    const double north = (mean_of(Quadrant::NW) + mean_of(Quadrant::NE)) / 2.0;
    const double south = (mean_of(Quadrant::SW) + mean_of(Quadrant::SE)) / 2.0;
    const bool north_hot = north >= south;
    f["half"] = north_hot ? "northern" : "southern";
    f["half_mean"] = three(north_hot ? north : south);
    f["other_half"] = north_hot ? "southern" : "northern";
    f["other_half_mean"] = three(north_hot ? south : north);

    if (const Hotspot* h = m.largest_hotspot()) {
        f["spot_quadrant"] = std::string(quadrant_long_name(quadrant_of(h->centroid_row, h->centroid_col)));
        f["spot_cells"] = std::to_string(h->cells);
        f["spot_row"] = fmt::format("{:.1f}", h->centroid_row);
        f["spot_col"] = fmt::format("{:.1f}", h->centroid_col);
    } else {
        f["spot_quadrant"] = "none";
        f["spot_cells"] = "0";
        f["spot_row"] = "n/a";
        f["spot_col"] = "n/a";
    }

    const Band quiet = m.least_congested_band();
    const int quiet_total = m.count(quiet).total();
    f["quiet_band"] = std::string(band_name(quiet));
    f["quiet_total"] = std::to_string(quiet_total);
    f["quiet_noun"] = quiet_total == 1 ? "transmitter" : "transmitters";
    f["quiet_verb"] = quiet_total == 1 ? "uses" : "use";

    if (m.mitigation) {
        const Mitigation& mit = *m.mitigation;
        f["mit_moved"] = std::to_string(mit.moved);
        f["mit_source"] = std::string(band_name(mit.source));
        f["mit_target"] = std::string(band_name(mit.target));
        f["mit_before"] = std::to_string(mit.before);
        f["mit_after"] = std::to_string(mit.after);
        f["mit_beams"] = mit.moved == 1 ? "satellite beam" : "satellite beams";
        f["mit_target_total"] = std::to_string(m.count(mit.target).total());
    } else {
        for (const char* k : {"mit_moved", "mit_source", "mit_target", "mit_before", "mit_after", "mit_beams",
                              "mit_target_total"})
            f[k] = "none";
    }
    return f;
}

bool is_applicable(Applicability a, const SampleMetadata& m) {
    switch (a) {
        case Applicability::always: return true;
        case Applicability::shared_band: return !m.shared_bands.empty();
        case Applicability::hotspot: return !m.hotspots.empty();
        case Applicability::quiet_band: return m.count(m.least_congested_band()).total() <= 1;
        case Applicability::mitigation: return m.mitigation.has_value();
    }
    return false;
}

std::string expand(std::string_view pattern, const FactTable& facts) {
    std::string out;
    out.reserve(pattern.size() + 32);
    std::size_t i = 0;
    while (i < pattern.size()) {
        const char ch = pattern[i];
        if (ch != '{') {
            out.push_back(ch);
            ++i;
            continue;
        }
        const auto close = pattern.find('}', i);
        if (close == std::string_view::npos) fail(ErrorKind::invalid_argument, "unterminated placeholder");
        const auto key = pattern.substr(i + 1, close - i - 1);
        const auto it = facts.find(key);
        if (it == facts.end()) fail(ErrorKind::invalid_argument, "unknown placeholder {" + std::string(key) + "}");
        out += it->second;
        i = close + 1;
    }
    return out;
}

const std::vector<QaTemplate>& default_templates() {
    using C = QaCategory;
    using A = Applicability;
    static const std::vector<QaTemplate> templates{
        // ---- descriptive ----
        {"desc.congested_band", C::descriptive, A::shared_band, {"band", "band_sats", "band_bs"},
         {
             {"Which frequency band is most congested?",
              "The {band} band is most congested with {band_sats_phrase} and {band_bs_phrase} sharing the same "
              "frequency."},
             {"Which band carries the most co-channel transmitters?",
              "The {band} band: {band_sats_phrase} and {band_bs_phrase}, {band_total} transmitters in total."},
             {"Identify the most heavily loaded frequency band.",
              "The heaviest load is on the {band} band, shared by {band_sats_phrase} and {band_bs_phrase}."},
             {"On which band is spectrum congestion worst?",
              "Congestion is worst on the {band} band, where {band_sats_phrase} overlap with {band_bs_phrase}."},
             {"Which frequency band shows the heaviest co-channel sharing?",
              "The {band} band, with {band_total} co-channel transmitters: {band_sats_phrase} and "
              "{band_bs_phrase}."},
         }},
        {"desc.severity", C::descriptive, A::always, {"severity", "pct"},
         {
             {"What is the overall interference severity?",
              "Overall interference severity is {severity}: {pct}% of the coverage area is flagged as interfered."},
             {"How severe is the interference in this heatmap?",
              "The interference is {severity}, with {pct}% of grid cells above the interference threshold."},
             {"Classify the interference level of this scene.",
              "This scene is classified as {severity} interference ({pct}% positive cells)."},
             {"Is the interference low, moderate, or high?",
              "It is {severity}; {pct}% of the area exceeds the threshold."},
             {"Rate the severity of co-channel interference shown.",
              "Severity rating: {severity}. Interfered cells cover {pct}% of the map."},
         }},
        {"desc.hotspot_count", C::descriptive, A::always, {"hotspot_count"},
         {
             {"How many interference hotspots are visible?",
              "There {hotspot_verb} {hotspot_count} distinct interference {hotspot_noun} in the map."},
             {"Count the separate high-interference regions.",
              "The map contains {hotspot_count} separate high-interference {hotspot_noun}."},
             {"How many connected hotspots does the heatmap show?",
              "{hotspot_count} connected {hotspot_noun} of above-threshold interference."},
             {"What is the number of interference clusters?",
              "Interference clusters counted: {hotspot_count}."},
         }},
        {"desc.shared_bands", C::descriptive, A::always, {"shared_count", "shared_list"},
         {
             {"How many frequency bands are shared by multiple transmitters?",
              "{shared_count} of the five bands {shared_verb} shared by multiple transmitters: {shared_list}."},
             {"Which bands experience co-channel sharing?",
              "Co-channel sharing occurs on {shared_count} {shared_noun}: {shared_list}."},
             {"List the frequency bands with more than one transmitter.",
              "Bands with more than one transmitter ({shared_count}): {shared_list}."},
             {"How many bands contribute to the interference map?",
              "{shared_count} {shared_noun} contribute, namely {shared_list}; single-transmitter bands add no "
              "interference."},
         }},

        // ---- localization ----
        {"loc.hottest_region", C::localization, A::always, {"quadrant"},
         {
             {"Which region has the highest interference?",
              "The {quadrant} region shows the highest interference concentration."},
             {"Where is interference strongest?",
              "Interference is strongest in the {quadrant} quadrant, with mean normalized level {quadrant_mean}."},
             {"Which quadrant of the coverage area is most interfered?",
              "The {quadrant} quadrant is the most interfered."},
             {"Locate the area with the greatest interference.",
              "The greatest interference lies in the {quadrant} part of the coverage area."},
             {"In which quadrant does interference concentrate?",
              "Interference concentrates in the {quadrant} quadrant (mean {quadrant_mean})."},
         }},
        {"loc.coolest_region", C::localization, A::always, {"cool_quadrant"},
         {
             {"Which region has the lowest interference?",
              "The {cool_quadrant} region has the lowest interference."},
             {"Where is the spectrum cleanest?",
              "The cleanest spectrum is in the {cool_quadrant} quadrant, mean normalized level {cool_mean}."},
             {"Which quadrant is least affected by interference?",
              "The {cool_quadrant} quadrant is least affected."},
             {"Identify the quietest part of the coverage area.",
              "The quietest part is the {cool_quadrant} quadrant (mean {cool_mean})."},
         }},
        {"loc.largest_hotspot", C::localization, A::hotspot, {"spot_quadrant", "spot_cells"},
         {
             {"Where is the largest interference hotspot located?",
              "The largest hotspot covers {spot_cells} cells and is centred in the {spot_quadrant} quadrant."},
             {"In which quadrant is the biggest hotspot?",
              "The biggest hotspot ({spot_cells} cells) sits in the {spot_quadrant} quadrant."},
             {"Locate the most extensive high-interference cluster.",
              "The most extensive cluster spans {spot_cells} cells around row {spot_row}, column {spot_col}, in "
              "the {spot_quadrant} quadrant."},
             {"Where does the dominant hotspot lie?",
              "The dominant hotspot lies in the {spot_quadrant} quadrant and spans {spot_cells} cells."},
         }},
        {"loc.half", C::localization, A::always, {"half"},
         {
             {"Is interference stronger in the northern or southern half?",
              "Interference is stronger in the {half} half."},
             {"Which half of the map, north or south, is more interfered?",
              "The {half} half is more interfered (mean {half_mean} versus {other_half_mean})."},
             {"Compare interference between the northern and southern halves.",
              "The {half} half carries more interference: {half_mean} against {other_half_mean} for the "
              "{other_half} half."},
             {"Does interference lean towards the north or the south?",
              "It leans towards the {half} half of the coverage area."},
         }},

        // ---- reasoning ----
        {"rsn.band_congested", C::reasoning, A::shared_band, {"band", "band_sats", "band_bs", "quadrant", "peak_dbm"},
         {
             {"Why is the {band} band congested?",
              "Because {band_sats_phrase} and {band_bs_phrase} are all allocated to {band} band, creating "
              "co-channel interference. Their combined footprint peaks in the {quadrant} quadrant at mean "
              "{quadrant_mean} against {cool_mean} in the {cool_quadrant} quadrant. The strongest cell receives {peak_dbm} dBm."},
             {"What causes congestion on the {band} band?",
              "{band_sats_phrase} and {band_bs_phrase} transmit on the {band} band at once, so their signals add "
              "up as co-channel interference; the {quadrant} quadrant reaches mean {quadrant_mean} and the "
              "{cool_quadrant} quadrant {cool_mean}. Peak received power is {peak_dbm} dBm."},
             {"Explain the heavy load on the {band} band.",
              "The {band} band hosts {band_sats_phrase} and {band_bs_phrase}. With {band_total} transmitters on "
              "one frequency the interference spreads, peaking in the {quadrant} quadrant (mean {quadrant_mean}, spread {spread}). At its strongest the map reaches {peak_dbm} dBm."},
             {"Why does the {band} band dominate the interference picture?",
              "It is the most shared band: the {band} band carries {band_sats_phrase} plus {band_bs_phrase}. Co-channel power from these "
              "transmitters concentrates in the {quadrant} quadrant, mean level {quadrant_mean}, {spread} above the quietest "
              "quadrant. The brightest cell sits at {peak_dbm} dBm."},
             {"Why would an operator flag the {band} band as congested?",
              "Because {band_total} transmitters, {band_sats_phrase} and {band_bs_phrase}, reuse the {band} band; "
              "the {quadrant} quadrant shows the resulting peak at {quadrant_mean} (spread {spread}). The map tops out at {peak_dbm} dBm."},
         }},
        {"rsn.hot_region", C::reasoning, A::always, {"quadrant", "shared_count", "peak_dbm"},
         {
             {"Why does the {quadrant} region show the highest interference?",
              "The {quadrant} region lies closest to the strongest co-channel transmitters on the {shared_count} "
              "shared {shared_noun}, giving it mean normalized interference {quadrant_mean} against {cool_mean} in "
              "the {cool_quadrant} region. The strongest cell receives {peak_dbm} dBm."},
             {"What explains the interference concentration in the {quadrant} quadrant?",
              "Overlapping coverage from transmitters on {shared_count} shared {shared_noun} ({shared_list}) "
              "raises the {quadrant} quadrant to a mean of {quadrant_mean}, a spread of {spread} over the "
              "quietest quadrant. Peak received power is {peak_dbm} dBm."},
             {"Why is the {quadrant} quadrant hotter than the rest?",
              "Co-channel transmitters on {shared_count} {shared_noun} sit near the {quadrant} quadrant, so their "
              "received power adds up there: mean {quadrant_mean}, {spread} above the {cool_quadrant} quadrant. At its strongest the map reaches {peak_dbm} dBm."},
             {"Account for the spatial pattern of interference.",
              "Interference follows the placement of transmitters on the {shared_count} shared {shared_noun}; "
              "the {quadrant} quadrant peaks at {quadrant_mean} while the {cool_quadrant} quadrant stays at "
              "{cool_mean}. The brightest cell sits at {peak_dbm} dBm."},
         }},
        {"rsn.severity", C::reasoning, A::always, {"severity", "pct", "peak_dbm"},
         {
             {"Why is the interference severity rated {severity}?",
              "Because {pct}% of cells exceed the interference threshold, which falls in the {severity} range; "
              "quadrant means differ by {spread} between the hottest region ({quadrant_mean}) and the quietest. The map tops out at {peak_dbm} dBm."},
             {"What determines the {severity} severity of this scene?",
              "The share of interfered cells, {pct}%, sets the {severity} label; interference is uneven, with a "
              "{spread} gap between the {quadrant} ({quadrant_mean}) and {cool_quadrant} quadrants. The strongest cell receives {peak_dbm} dBm."},
             {"Explain the severity classification.",
              "{pct}% of the map is above threshold, so severity is {severity}. The {quadrant} quadrant peaks "
              "at {quadrant_mean} and the {cool_quadrant} quadrant sits at {cool_mean}. Peak received power is {peak_dbm} dBm."},
             {"Why is this scene considered {severity}?",
              "Interfered cells make up {pct}% of the area, which maps to {severity}; the hottest quadrant mean "
              "is {quadrant_mean} and the coolest is {cool_mean}. At its strongest the map reaches {peak_dbm} dBm."},
         }},
        {"rsn.quiet_band", C::reasoning, A::quiet_band, {"quiet_band", "quiet_total", "peak_dbm"},
         {
             {"Why is the {quiet_band} band free of co-channel interference?",
              "Only {quiet_total} {quiet_noun} {quiet_verb} the {quiet_band} band, so no co-channel partner "
              "exists and it adds nothing to the map; the interference peak of {quadrant_mean} (floor {cool_mean}) "
              "comes from other bands. The brightest cell sits at {peak_dbm} dBm."},
             {"Why does the {quiet_band} band not contribute to the heatmap?",
              "With {quiet_total} {quiet_noun} on the {quiet_band} band there is no sharing, so its power is "
              "excluded; the {quadrant} quadrant mean of {quadrant_mean} and the "
              "{cool_quadrant} mean of {cool_mean} stem from shared bands. The map tops out at {peak_dbm} dBm."},
             {"What makes the {quiet_band} band interference-free?",
              "It carries {quiet_total} {quiet_noun}; co-channel interference needs at least two, so the "
              "{quiet_band} band stays clean while the map ranges from {cool_mean} to {quadrant_mean}. The strongest cell receives {peak_dbm} dBm."},
             {"Why is the {quiet_band} band a good candidate for new traffic?",
              "The {quiet_band} band has {quiet_total} {quiet_noun} and no co-channel sharing, unlike the "
              "{shared_list} {shared_noun} that drive the {quadrant_mean} peak and the {spread} spread. Peak received power is {peak_dbm} dBm."},
         }},

        // ---- prescriptive ----
        {"pre.reallocation", C::prescriptive, A::mitigation,
         {"mit_moved", "mit_source", "mit_target", "mit_before", "mit_after"},
         {
             {"What reallocation would reduce interference?",
              "Migrating {mit_moved} {mit_beams} from {mit_source} to {mit_target} band would reduce co-channel "
              "transmitters from {mit_before} to {mit_after}."},
             {"How should spectrum be reassigned to cut interference?",
              "Reassign {mit_moved} {mit_beams} from the {mit_source} band to the {mit_target} band, lowering "
              "{mit_source}-band co-channel transmitters from {mit_before} to {mit_after}."},
             {"Suggest a band reallocation.",
              "Move {mit_moved} {mit_beams} off {mit_source} onto {mit_target}; {mit_source} drops from "
              "{mit_before} to {mit_after} co-channel transmitters."},
             {"What frequency change would ease congestion?",
              "Shift {mit_moved} {mit_beams} from {mit_source} to {mit_target} band so that {mit_source} carries "
              "{mit_after} instead of {mit_before} co-channel transmitters."},
         }},
        {"pre.target_band", C::prescriptive, A::mitigation, {"mit_target", "mit_source", "mit_target_total"},
         {
             {"Which band should absorb migrated satellite traffic?",
              "The {mit_target} band, which has only {mit_target_total} active transmitters, should absorb traffic "
              "moved from the {mit_source} band."},
             {"Where should congested traffic be moved?",
              "Move it from {mit_source} to {mit_target}, the least used band with {mit_target_total} "
              "transmitters."},
             {"Which band has spare capacity for reallocation?",
              "{mit_target} has spare capacity ({mit_target_total} transmitters) and can take load from "
              "{mit_source}."},
             {"Pick a destination band for offloading the busiest band.",
              "Offload {mit_source} onto {mit_target}, currently used by {mit_target_total} transmitters."},
         }},
        {"pre.hot_region", C::prescriptive, A::mitigation, {"quadrant", "mit_source", "mit_target", "mit_moved"},
         {
             {"How can interference in the {quadrant} region be reduced?",
              "Reduce the {quadrant} hotspot by migrating {mit_moved} {mit_beams} from {mit_source} to "
              "{mit_target} band."},
             {"What action would relieve the {quadrant} quadrant?",
              "Relieve the {quadrant} quadrant by moving {mit_moved} {mit_beams} from the {mit_source} band to "
              "the {mit_target} band."},
             {"Recommend a fix for the interference concentration in the {quadrant}.",
              "Move {mit_moved} {mit_beams} from {mit_source} to {mit_target} to thin out co-channel transmitters "
              "affecting the {quadrant} quadrant."},
             {"What should an operator do about the {quadrant} hotspot?",
              "Reallocate {mit_moved} {mit_beams} from {mit_source} to {mit_target}, cutting the co-channel load "
              "behind the {quadrant} hotspot."},
         }},
        {"pre.severity", C::prescriptive, A::mitigation, {"severity", "mit_source", "mit_after"},
         {
             {"What action would lower the {severity} interference level?",
              "Lower the {severity} level by reducing {mit_source}-band co-channel transmitters to {mit_after} "
              "through migration to {mit_target}."},
             {"How can the {severity} severity be improved?",
              "Migrate {mit_moved} {mit_beams} away from {mit_source} so it keeps {mit_after} transmitters; this "
              "targets the cause of the {severity} rating."},
             {"What is the first mitigation step for this {severity} scene?",
              "First step: cut {mit_source} down to {mit_after} co-channel transmitters by moving {mit_beams} to "
              "{mit_target}; the scene is currently {severity}."},
             {"Recommend a mitigation for the current {severity} interference.",
              "For {severity} interference, move {mit_moved} {mit_beams} off {mit_source}, leaving {mit_after} "
              "co-channel transmitters there."},
         }},
    };
    return templates;
}

void validate_templates(const std::vector<QaTemplate>& templates) {
    const FactTable probe = sample_facts(SampleMetadata{});
    std::set<QaCategory> seen;
    std::set<std::string> ids;
    for (const auto& t : templates) {
        if (!ids.insert(t.id).second) fail(ErrorKind::invalid_argument, "duplicate template id " + t.id);
        seen.insert(t.category);
        if (t.variants.size() < 4 || t.variants.size() > 8)
            fail(ErrorKind::invalid_argument, "template " + t.id + " must have 4 to 8 variants");
        for (const auto& k : t.grounded_keys) {
            if (!probe.contains(k)) fail(ErrorKind::invalid_argument, "template " + t.id + ": unknown key " + k);
        }
        for (const auto& v : t.variants) {
            expand(v.question, probe);
            expand(v.answer, probe);
            for (const auto& k : t.grounded_keys) {
                if (v.answer.find("{" + k + "}") == std::string::npos && v.answer.find("{" + k + "_phrase}") == std::string::npos)
                    fail(ErrorKind::invalid_argument, "template " + t.id + ": an answer never states " + k);
            }
        }
    }
    for (QaCategory c : kAllCategories) {
        if (!seen.contains(c))
            fail(ErrorKind::invalid_argument, "no template for category " + std::string(category_name(c)));
    }
}

const QaTemplate* find_template(const std::vector<QaTemplate>& templates, std::string_view id) {
    for (const auto& t : templates) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

}  // namespace sqa
