#include "core/qa.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>

#include "core/error.hpp"

namespace sqa {

QAPair build_pair(const SampleMetadata& metadata, const QaTemplate& tmpl, int variant) {
    if (variant < 0 || variant >= static_cast<int>(tmpl.variants.size()))
        fail(ErrorKind::invalid_argument, "template " + tmpl.id + ": variant out of range");
    const FactTable facts = sample_facts(metadata);
    const QaVariant& v = tmpl.variants[static_cast<std::size_t>(variant)];
    QAPair p;
    p.sample_id = metadata.sample_id;
    p.category = tmpl.category;
    p.template_id = tmpl.id;
    p.variant = variant;
    p.question = expand(v.question, facts);
    p.answer = expand(v.answer, facts);
    for (const auto& key : tmpl.grounded_keys) p.grounded.emplace_back(key, facts.find(key)->second);
    return p;
}

namespace {

std::size_t pick_category(Rng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < kCategoryProbabilities.size(); ++i) {
        acc += kCategoryProbabilities[i];
        if (u < acc) return i;
    }
    return kCategoryProbabilities.size() - 1;
}

}  // namespace

QaBatch generate_qa(const SampleMetadata& metadata, const std::vector<QaTemplate>& templates, Rng& rng,
                    int count) {
    if (count < 1) fail(ErrorKind::invalid_argument, "generate_qa: count must be >= 1");

    // Applicable templates per category with their unused variants.
    std::array<std::vector<const QaTemplate*>, 4> by_category;
    for (const auto& t : templates) {
        if (is_applicable(t.applicability, metadata)) by_category[static_cast<std::size_t>(t.category)].push_back(&t);
    }
    if (by_category[0].empty()) fail(ErrorKind::invalid_argument, "generate_qa: no applicable descriptive template");

    std::map<const QaTemplate*, std::vector<int>> unused;
    auto refill = [&](std::size_t cat) {
        for (const QaTemplate* t : by_category[cat]) {
            auto& list = unused[t];
            list.clear();
            for (int v = 0; v < static_cast<int>(t->variants.size()); ++v) list.push_back(v);
        }
    };
    for (std::size_t c = 0; c < 4; ++c) refill(c);

    QaBatch batch;
    batch.pairs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        std::size_t cat = pick_category(rng);
        if (by_category[cat].empty()) {
            ++batch.substitutions;
            cat = static_cast<std::size_t>(QaCategory::descriptive);
        }
        std::vector<const QaTemplate*> open;
        for (const QaTemplate* t : by_category[cat]) {
            if (!unused[t].empty()) open.push_back(t);
        }
        if (open.empty()) {
            refill(cat);
            open = by_category[cat];
        }
        const QaTemplate* t = open[rng.below(open.size())];
        auto& variants = unused[t];
        const auto slot = rng.below(variants.size());
        const int variant = variants[slot];
        variants.erase(variants.begin() + static_cast<std::ptrdiff_t>(slot));
        batch.pairs.push_back(build_pair(metadata, *t, variant));
    }
    return batch;
}

QAPair l4_reference(const SampleMetadata& metadata, const std::vector<QaTemplate>& templates) {
    for (const auto& t : templates) {
        if (t.category == QaCategory::reasoning && is_applicable(t.applicability, metadata))
            return build_pair(metadata, t, 0);
    }
    fail(ErrorKind::invalid_argument, "no applicable reasoning template for " + metadata.sample_id);
}

bool QCReport::reasoning_diverse() const {
    const auto r = static_cast<std::size_t>(QaCategory::reasoning);
    return min_unique_in_window[r] >= std::min(kWindow, category_counts[r]);
}

bool contains_field(std::string_view text, std::string_view value) {
    if (value.empty()) return false;
    const auto is_word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
    std::size_t pos = text.find(value);
    while (pos != std::string_view::npos) {
        const bool left_ok = pos == 0 || !is_word(text[pos - 1]) || !is_word(value.front());
        const std::size_t end = pos + value.size();
        const bool right_ok = end == text.size() || !is_word(text[end]) || !is_word(value.back());
        if (left_ok && right_ok) return true;
        pos = text.find(value, pos + 1);
    }
    return false;
}

std::size_t min_unique_in_windows(std::span<const std::string> texts, std::size_t window) {
    if (texts.empty()) return 0;
    const std::size_t w = std::min(window, texts.size());
    std::unordered_map<std::string_view, std::size_t> counts;
    for (std::size_t i = 0; i < w; ++i) ++counts[texts[i]];
    std::size_t best = counts.size();
    for (std::size_t i = w; i < texts.size(); ++i) {
        ++counts[texts[i]];
        auto it = counts.find(texts[i - w]);
        if (--it->second == 0) counts.erase(it);
        best = std::min(best, counts.size());
    }
    return best;
}

QCReport verify_qa(std::span<const QAPair> pairs, const MetadataLookup& lookup,
                   const std::vector<QaTemplate>& templates) {
    QCReport report;
    std::array<std::vector<std::string>, 4> answers_by_category;
    std::map<std::string, FactTable> fact_cache;

    auto record_failure = [&](const QAPair& p, const std::string& why) {
        ++report.factual_failures;
        if (report.failure_details.size() < 20)
            report.failure_details.push_back(p.sample_id + " " + p.template_id + "#" + std::to_string(p.variant) +
                                             ": " + why);
    };

    for (const QAPair& p : pairs) {
        ++report.total_checked;
        const auto cat = static_cast<std::size_t>(p.category);
        ++report.category_counts[cat];
        answers_by_category[cat].push_back(p.answer);

        const SampleMetadata* meta = lookup(p.sample_id);
        if (!meta) {
            record_failure(p, "unknown sample");
            continue;
        }
        const QaTemplate* tmpl = find_template(templates, p.template_id);
        if (!tmpl) {
            record_failure(p, "unknown template");
            continue;
        }
        auto [it, inserted] = fact_cache.try_emplace(p.sample_id);
        if (inserted) it->second = sample_facts(*meta);
        const FactTable& truth = it->second;

        // Every key the template grounds must be present with the true value
        // and appear verbatim in the answer.
        // A pair counts once however many of its fields are wrong.
        for (const auto& key : tmpl->grounded_keys) {
            const auto& expected = truth.find(key)->second;
            const auto claimed = std::find_if(p.grounded.begin(), p.grounded.end(),
                                              [&](const auto& kv) { return kv.first == key; });
            std::string why;
            if (claimed == p.grounded.end()) why = "missing grounded field " + key;
            else if (claimed->second != expected)
                why = key + " is '" + claimed->second + "', ground truth '" + expected + "'";
            else if (!contains_field(p.answer, expected)) why = "answer lacks " + key + " '" + expected + "'";
            if (!why.empty()) {
                record_failure(p, why);
                break;
            }
        }
    }
    for (std::size_t c = 0; c < 4; ++c) {
        report.min_unique_in_window[c] = min_unique_in_windows(answers_by_category[c], QCReport::kWindow);
    }
    return report;
}

QCReport verify_qa(std::span<const QAPair> pairs, const std::map<std::string, SampleMetadata>& metadata,
                   const std::vector<QaTemplate>& templates) {
    return verify_qa(
        pairs,
        [&](const std::string& id) -> const SampleMetadata* {
            auto it = metadata.find(id);
            return it == metadata.end() ? nullptr : &it->second;
        },
        templates);
}

nlohmann::ordered_json pair_to_json(const QAPair& p) {
    nlohmann::ordered_json j;
    j["sample_id"] = p.sample_id;
    j["category"] = std::string(category_name(p.category));
    j["template_id"] = p.template_id;
    j["variant"] = p.variant;
    j["question"] = p.question;
    j["answer"] = p.answer;
    auto& g = j["grounded"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : p.grounded) g[k] = v;
    return j;
}

QAPair pair_from_json(const nlohmann::ordered_json& j) {
    QAPair p;
    p.sample_id = j.at("sample_id").get<std::string>();
    const auto cat = parse_category(j.at("category").get<std::string>());
    if (!cat) fail(ErrorKind::data_error, "unknown QA category");
    p.category = *cat;
    p.template_id = j.at("template_id").get<std::string>();
    p.variant = j.at("variant").get<int>();
    p.question = j.at("question").get<std::string>();
    p.answer = j.at("answer").get<std::string>();
    for (const auto& [k, v] : j.at("grounded").items()) p.grounded.emplace_back(k, v.get<std::string>());
    return p;
}

nlohmann::ordered_json qc_to_json(const QCReport& r) {
    nlohmann::ordered_json j;
    j["total_checked"] = r.total_checked;
    j["factual_failures"] = r.factual_failures;
    j["failure_details"] = r.failure_details;
    j["window"] = QCReport::kWindow;
    auto& u = j["min_unique_in_window"];
    for (QaCategory c : kAllCategories) u[std::string(category_name(c))] = r.min_unique_in_window[static_cast<std::size_t>(c)];
    j["passed"] = r.passed();
    j["reasoning_diverse"] = r.reasoning_diverse();
    return j;
}

}  // namespace sqa
