#pragma once

#include <array>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core/rng.hpp"
#include "core/templates.hpp"

namespace sqa {

struct QAPair {
    std::string sample_id;
    QaCategory category = QaCategory::descriptive;
    std::string template_id;
    int variant = 0;
    std::string question;
    std::string answer;
    std::vector<std::pair<std::string, std::string>> grounded;  // key, value

    bool operator==(const QAPair&) const = default;
};

struct QaBatch {
    std::vector<QAPair> pairs;
    int substitutions = 0;  // prescriptive draws replaced by descriptive
};

QAPair build_pair(const SampleMetadata& metadata, const QaTemplate& tmpl, int variant);

// Draws `count` pairs: category by kCategoryProbabilities, then an applicable
// template and an unused variant uniformly. No (template, variant) repeats
// within one call until a category is exhausted.
QaBatch generate_qa(const SampleMetadata& metadata, const std::vector<QaTemplate>& templates, Rng& rng,
                    int count);

// Reference answer scored at L4: first applicable reasoning template, variant 0.
QAPair l4_reference(const SampleMetadata& metadata, const std::vector<QaTemplate>& templates = default_templates());

struct QCReport {
    std::size_t total_checked = 0;
    std::size_t factual_failures = 0;
    std::vector<std::string> failure_details;  // first few, for humans
    static constexpr std::size_t kWindow = 100;
    // Minimum distinct answers over every window of kWindow consecutive
    // answers of the category; equals the category size when shorter.
    std::array<std::size_t, 4> min_unique_in_window{};
    std::array<std::size_t, 4> category_counts{};

    bool passed() const { return factual_failures == 0; }
    bool reasoning_diverse() const;
};

using MetadataLookup = std::function<const SampleMetadata*(const std::string&)>;

QCReport verify_qa(std::span<const QAPair> pairs, const MetadataLookup& lookup,
                   const std::vector<QaTemplate>& templates = default_templates());
QCReport verify_qa(std::span<const QAPair> pairs, const std::map<std::string, SampleMetadata>& metadata,
                   const std::vector<QaTemplate>& templates = default_templates());

// Whole-word containment: value occurs with non-alphanumeric neighbours.
bool contains_field(std::string_view text, std::string_view value);

// Distinct-count minimum over sliding windows of `window` strings.
std::size_t min_unique_in_windows(std::span<const std::string> texts, std::size_t window);

nlohmann::ordered_json pair_to_json(const QAPair& p);
QAPair pair_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json qc_to_json(const QCReport& r);

}  // namespace sqa
