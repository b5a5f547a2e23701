#include "core/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "core/error.hpp"
#include "core/render.hpp"

namespace fs = std::filesystem;

namespace sqa {

std::string_view split_name(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "?";
}

void validate_config(const DatasetConfig& config) {
    if (config.images < 1) fail(ErrorKind::invalid_argument, "images must be >= 1");
    if (config.qa_per_image < 1) fail(ErrorKind::invalid_argument, "qa_per_image must be >= 1");
    if (config.scenario_mix.empty()) fail(ErrorKind::invalid_argument, "scenario_mix must not be empty");
    if (config.workers < 0) fail(ErrorKind::invalid_argument, "workers must be >= 0");
    for (int r : config.split_ratio) {
        if (r < 0) fail(ErrorKind::invalid_argument, "split ratios must be >= 0");
    }
    if (config.split_ratio[0] + config.split_ratio[1] + config.split_ratio[2] <= 0)
        fail(ErrorKind::invalid_argument, "split ratios must not all be zero");
    for (ScenarioId id : config.scenario_mix) {
        auto it = config.scenarios.find(id);
        if (it == config.scenarios.end())
            fail(ErrorKind::invalid_argument, "no parameters for scenario " + std::string(scenario_name(id)));
        validate_scenario(it->second);
    }
    validate_band_table(config.sim.bands);
    for (double p : {config.sim.powers.base_station_dbm, config.sim.powers.leo_dbm, config.sim.powers.geo_dbm}) {
        if (!std::isfinite(p)) fail(ErrorKind::invalid_argument, "transmit powers must be finite");
    }
}

namespace {

template <typename T>
T get_as(const nlohmann::json& j, const std::string& key) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception&) {
        fail(ErrorKind::data_error, "config key '" + key + "' has the wrong type");
    }
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<std::string_view> known, const std::string& where) {
    for (const auto& [k, v] : j.items()) {
        if (std::find(known.begin(), known.end(), k) == known.end())
            fail(ErrorKind::data_error, "unknown config key '" + where + k + "'");
    }
}

}  // namespace

void apply_config_json(const nlohmann::json& j, DatasetConfig& c) {
    if (!j.is_object()) fail(ErrorKind::data_error, "config must be a JSON object");
    reject_unknown(j,
                   {"master_seed", "images", "qa_per_image", "scenario_mix", "split_ratio", "workers",
                    "write_images", "severity_mode", "absolute_threshold_dbm", "tx_power_dbm",
                    "zenith_attenuation_db", "scenarios"},
                   "");
    if (j.contains("master_seed")) c.master_seed = get_as<std::uint64_t>(j["master_seed"], "master_seed");
    if (j.contains("images")) c.images = get_as<int>(j["images"], "images");
    if (j.contains("qa_per_image")) c.qa_per_image = get_as<int>(j["qa_per_image"], "qa_per_image");
    if (j.contains("workers")) c.workers = get_as<int>(j["workers"], "workers");
    if (j.contains("write_images")) c.write_images = get_as<bool>(j["write_images"], "write_images");
    if (j.contains("scenario_mix")) {
        c.scenario_mix.clear();
        for (const auto& s : j["scenario_mix"]) {
            auto id = parse_scenario(get_as<std::string>(s, "scenario_mix"));
            if (!id) fail(ErrorKind::data_error, "scenario_mix: unknown scenario " + s.dump());
            c.scenario_mix.push_back(*id);
        }
    }
    if (j.contains("split_ratio")) {
        const auto v = get_as<std::vector<int>>(j["split_ratio"], "split_ratio");
        if (v.size() != 3) fail(ErrorKind::data_error, "split_ratio needs three entries");
        c.split_ratio = {v[0], v[1], v[2]};
    }
    if (j.contains("severity_mode")) {
        const auto mode = get_as<std::string>(j["severity_mode"], "severity_mode");
        if (mode == "quantile") c.sim.labels.severity_mode = SeverityMode::quantile;
        else if (mode == "absolute") c.sim.labels.severity_mode = SeverityMode::absolute;
        else fail(ErrorKind::data_error, "severity_mode must be 'quantile' or 'absolute'");
    }
    if (j.contains("absolute_threshold_dbm"))
        c.sim.labels.absolute_threshold_dbm = get_as<double>(j["absolute_threshold_dbm"], "absolute_threshold_dbm");
    if (j.contains("tx_power_dbm")) {
        const auto& p = j["tx_power_dbm"];
        reject_unknown(p, {"base_station", "leo", "geo"}, "tx_power_dbm.");
        if (p.contains("base_station")) c.sim.powers.base_station_dbm = get_as<double>(p["base_station"], "base_station");
        if (p.contains("leo")) c.sim.powers.leo_dbm = get_as<double>(p["leo"], "leo");
        if (p.contains("geo")) c.sim.powers.geo_dbm = get_as<double>(p["geo"], "geo");
    }
    if (j.contains("zenith_attenuation_db")) {
        for (const auto& [name, v] : j["zenith_attenuation_db"].items()) {
            auto band = parse_band(name);
            if (!band) fail(ErrorKind::data_error, "zenith_attenuation_db: unknown band " + name);
            c.sim.bands[band_index(*band)].zenith_attenuation_db = get_as<double>(v, name);
        }
    }
    if (j.contains("scenarios")) {
        for (const auto& [name, s] : j["scenarios"].items()) {
            auto id = parse_scenario(name);
            if (!id) fail(ErrorKind::data_error, "scenarios: unknown scenario " + name);
            reject_unknown(s,
                           {"n_satellites", "n_base_stations", "n_users", "area_km", "satellite_altitude_km",
                            "satellite_class"},
                           "scenarios." + name + ".");
            Scenario& sc = c.scenarios[*id];
            sc.id = *id;
            if (s.contains("n_satellites")) sc.n_satellites = get_as<int>(s["n_satellites"], "n_satellites");
            if (s.contains("n_base_stations")) sc.n_base_stations = get_as<int>(s["n_base_stations"], "n_base_stations");
            if (s.contains("n_users")) sc.n_users = get_as<int>(s["n_users"], "n_users");
            if (s.contains("area_km")) sc.area_km = get_as<double>(s["area_km"], "area_km");
            if (s.contains("satellite_altitude_km"))
                sc.satellite_altitude_km = get_as<double>(s["satellite_altitude_km"], "satellite_altitude_km");
            if (s.contains("satellite_class")) {
                auto cls = parse_satellite_class(get_as<std::string>(s["satellite_class"], "satellite_class"));
                if (!cls) fail(ErrorKind::data_error, "satellite_class must be LEO, GEO or mixed");
                sc.satellite_class = *cls;
            }
        }
    }
}

DatasetConfig load_config_file(const fs::path& path, DatasetConfig base) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::data_error, path.string() + ": " + e.what());
    }
    apply_config_json(j, base);
    return base;
}

std::string sample_id_for(std::uint64_t index) { return fmt::format("sample_{:06d}", index); }

std::array<int, 3> split_counts(int images, const std::array<int, 3>& ratio) {
    const double sum = static_cast<double>(ratio[0]) + ratio[1] + ratio[2];
    const int val = std::min(images, static_cast<int>(std::floor(images * (ratio[1] / sum) + 0.5)));
    const int test = std::min(images - val, static_cast<int>(std::floor(images * (ratio[2] / sum) + 0.5)));
    return {images - val - test, val, test};
}

SampleRecord make_sample_record(const DatasetConfig& config, const SampleProducts& products, std::uint64_t index,
                                Split split) {
    SampleRecord rec;
    rec.id = sample_id_for(index);
    rec.index = index;
    rec.scenario = products.transmitters.scenario;
    rec.split = split;
    rec.labels = products.labels;
    rec.metadata = extract_metadata(rec.id, products);
    rec.l4 = l4_reference(rec.metadata);
    Rng rng(config.master_seed, index, StreamTag::qa);
    rec.qa = generate_qa(rec.metadata, default_templates(), rng, config.qa_per_image);
    return rec;
}

nlohmann::ordered_json sample_labels_json(const SampleRecord& rec) {
    nlohmann::ordered_json j;
    j["sample_id"] = rec.id;
    j["scenario"] = std::string(scenario_name(rec.scenario));
    j["split"] = std::string(split_name(rec.split));
    const auto labels = labels_to_json(rec.labels);
    for (const auto& [k, v] : labels.items()) j[k] = v;
    j["l4"] = {{"template_id", rec.l4.template_id}, {"question", rec.l4.question}, {"answer", rec.l4.answer}};
    return j;
}

nlohmann::ordered_json config_to_json(const DatasetConfig& c) {
    nlohmann::ordered_json j;
    j["master_seed"] = c.master_seed;
    j["images"] = c.images;
    j["qa_per_image"] = c.qa_per_image;
    auto& mix = j["scenario_mix"] = nlohmann::ordered_json::array();
    for (ScenarioId id : c.scenario_mix) mix.push_back(std::string(scenario_name(id)));
    j["split_ratio"] = c.split_ratio;
    j["severity_mode"] = c.sim.labels.severity_mode == SeverityMode::absolute ? "absolute" : "quantile";
    j["absolute_threshold_dbm"] = c.sim.labels.absolute_threshold_dbm;
    j["tx_power_dbm"] = {{"base_station", c.sim.powers.base_station_dbm},
                         {"leo", c.sim.powers.leo_dbm},
                         {"geo", c.sim.powers.geo_dbm}};
    auto& zen = j["zenith_attenuation_db"];
    for (const auto& b : c.sim.bands) zen[std::string(band_name(b.id))] = b.zenith_attenuation_db;
    auto& scs = j["scenarios"];
    for (const auto& [id, s] : c.scenarios) {
        scs[std::string(scenario_name(id))] = {{"n_satellites", s.n_satellites},
                                               {"n_base_stations", s.n_base_stations},
                                               {"n_users", s.n_users},
                                               {"area_km", s.area_km},
                                               {"satellite_altitude_km", s.satellite_altitude_km},
                                               {"satellite_class", std::string(satellite_class_name(s.satellite_class))}};
    }
    return j;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorKind::io_error, "cannot open " + path.string() + " for writing");
    f << text;
    if (!f) fail(ErrorKind::io_error, "failed writing " + path.string());
}

void write_text_atomic(const fs::path& path, const std::string& text) {
    fs::path tmp = path;
    tmp += ".tmp";
    write_text(tmp, text);
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) fail(ErrorKind::io_error, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_text(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::io_error, "cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

namespace {

void write_sample_files(const fs::path& dir, const SampleRecord& rec, const SampleProducts& products,
                        bool write_images) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorKind::io_error, "cannot create " + dir.string() + ": " + ec.message());
    if (write_images) write_png(render_heatmap(products.grid), dir / "heatmap.png");
    write_text(dir / "labels.json", sample_labels_json(rec).dump(2) + "\n");
    nlohmann::ordered_json meta = metadata_to_json(rec.metadata);
    meta["transmitters"] = transmitters_to_json(products.transmitters)["transmitters"];
    write_text(dir / "metadata.json", meta.dump(2) + "\n");
}

}  // namespace

BuildResult build_dataset(const DatasetConfig& config, const fs::path& out_dir) {
    validate_config(config);
    validate_templates(default_templates());

    const bool to_disk = !out_dir.empty();
    if (to_disk) {
        std::error_code ec;
        fs::create_directories(out_dir / "samples", ec);
        if (ec) fail(ErrorKind::io_error, "cannot create output directory " + out_dir.string() + ": " + ec.message());
        // A stale manifest would make an interrupted run look complete.
        fs::remove(out_dir / "manifest.json", ec);
    }

    const auto counts = split_counts(config.images, config.split_ratio);
    auto split_of = [&](std::uint64_t i) {
        if (i < static_cast<std::uint64_t>(counts[0])) return Split::train;
        if (i < static_cast<std::uint64_t>(counts[0] + counts[1])) return Split::val;
        return Split::test;
    };

    const auto n = static_cast<std::size_t>(config.images);
    BuildResult result;
    result.samples.resize(n);

    int workers = config.workers > 0 ? config.workers : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, std::max(1, config.images));

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                const ScenarioId sid = config.scenario_mix[i % config.scenario_mix.size()];
                const SampleProducts products =
                    simulate_sample(config.scenarios.at(sid), config.master_seed, i, config.sim);
                SampleRecord rec = make_sample_record(config, products, i, split_of(i));
                if (to_disk) write_sample_files(out_dir / "samples" / rec.id, rec, products, config.write_images);
                result.samples[i] = std::move(rec);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (first_error) std::rethrow_exception(first_error);

    std::map<std::string, const SampleMetadata*> by_id;
    for (const auto& rec : result.samples) {
        by_id[rec.id] = &rec.metadata;
        result.substitutions += rec.qa.substitutions;
        for (const auto& p : rec.qa.pairs) {
            result.pairs.push_back(p);
            ++result.tallies[static_cast<std::size_t>(p.category)];
        }
    }
    result.qc = verify_qa(result.pairs, [&](const std::string& id) -> const SampleMetadata* {
        auto it = by_id.find(id);
        return it == by_id.end() ? nullptr : it->second;
    });

    // Manifest.
    nlohmann::ordered_json& m = result.manifest;
    m["format"] = "spectrumqa-manifest/1";
    m["config"] = config_to_json(config);
    m["images"] = config.images;
    m["qa_pairs"] = result.pairs.size();
    std::array<std::vector<std::string>, 3> split_ids;
    for (const auto& rec : result.samples) split_ids[static_cast<std::size_t>(rec.split)].push_back(rec.id);
    auto& splits = m["splits"];
    for (std::size_t s = 0; s < 3; ++s) {
        Rng rng(config.master_seed, s, StreamTag::split_shuffle);
        rng.shuffle(std::span<std::string>(split_ids[s]));
        splits[std::string(split_name(static_cast<Split>(s)))] = split_ids[s];
    }
    auto& samples = m["samples"] = nlohmann::ordered_json::array();
    for (const auto& rec : result.samples) {
        const std::string dir = "samples/" + rec.id + "/";
        nlohmann::ordered_json entry{{"id", rec.id},
                                     {"index", rec.index},
                                     {"scenario", std::string(scenario_name(rec.scenario))},
                                     {"split", std::string(split_name(rec.split))}};
        entry["heatmap"] = config.write_images ? nlohmann::ordered_json(dir + "heatmap.png") : nlohmann::ordered_json();
        entry["labels"] = dir + "labels.json";
        entry["metadata"] = dir + "metadata.json";
        samples.push_back(std::move(entry));
    }
    m["qa_file"] = "qa.jsonl";
    auto& tallies = m["qa_tallies"];
    for (QaCategory c : kAllCategories) tallies[std::string(category_name(c))] = result.tallies[static_cast<std::size_t>(c)];
    m["substitutions"] = result.substitutions;
    m["qc"] = qc_to_json(result.qc);

    if (to_disk) {
        std::string lines;
        for (const auto& p : result.pairs) lines += pair_to_json(p).dump() + "\n";
        write_text(out_dir / "qa.jsonl", lines);
    }
    if (!result.qc.passed()) {
        std::string msg = "QA verification failed with " + std::to_string(result.qc.factual_failures) +
                          " factual failures";
        if (!result.qc.failure_details.empty()) msg += "; first: " + result.qc.failure_details.front();
        fail(ErrorKind::qc_failure, msg);
    }
    if (to_disk) write_text_atomic(out_dir / "manifest.json", m.dump(2) + "\n");
    return result;
}

}  // namespace sqa
