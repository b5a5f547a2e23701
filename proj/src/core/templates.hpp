#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/metadata.hpp"

namespace sqa {

enum class QaCategory { descriptive, localization, reasoning, prescriptive };

inline constexpr std::array<QaCategory, 4> kAllCategories{QaCategory::descriptive, QaCategory::localization,
                                                          QaCategory::reasoning, QaCategory::prescriptive};

// Corpus proportions 39K / 30K / 19K / 20K of 108K, rounded to sum to one.
inline constexpr std::array<double, 4> kCategoryProbabilities{0.36, 0.28, 0.175, 0.185};

std::string_view category_name(QaCategory c);
std::optional<QaCategory> parse_category(std::string_view name);

// Every placeholder value a template may reference, keyed by name. Values
// are exactly the strings that must appear in an answer.
using FactTable = std::map<std::string, std::string, std::less<>>;

FactTable sample_facts(const SampleMetadata& m);

enum class Applicability {
    always,
    shared_band,    // at least one band has >= 2 transmitters
    hotspot,        // mask has a positive component
    quiet_band,     // some band has at most one transmitter
    mitigation,     // a reallocation recommendation exists
};

bool is_applicable(Applicability a, const SampleMetadata& m);

struct QaVariant {
    std::string question;
    std::string answer;
};

struct QaTemplate {
    std::string id;
    QaCategory category = QaCategory::descriptive;
    Applicability applicability = Applicability::always;
    std::vector<std::string> grounded_keys;
    std::vector<QaVariant> variants;
};

// Replaces every {key} with facts[key]. Throws on an unknown key.
std::string expand(std::string_view pattern, const FactTable& facts);

const std::vector<QaTemplate>& default_templates();

// Throws when a category has no template, a template has fewer than 4 or more
// than 8 variants, or a variant references an unknown fact key.
void validate_templates(const std::vector<QaTemplate>& templates);

const QaTemplate* find_template(const std::vector<QaTemplate>& templates, std::string_view id);

}  // namespace sqa
