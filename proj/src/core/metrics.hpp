#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/radiomap.hpp"

namespace sqa {

// Fraction of predictions that match their gold label exactly. Every
// prediction id must exist in gold.
double accuracy(const std::map<std::string, std::string>& predictions,
                const std::map<std::string, std::string>& gold);

// |a & b| / |a | b|; 1.0 when both are empty.
double iou(const Mask& a, const Mask& b);

// Lowercased alphanumeric runs.
std::vector<std::string> tokenize(std::string_view text);

// The 30 function words dropped before keyword matching.
const std::set<std::string, std::less<>>& keyword_stopwords();

std::set<std::string> keyword_set(std::string_view text);

// Set F1 over keyword_set; 1 when both sets are empty, 0 when only one is.
double keyword_f1(std::string_view prediction, std::string_view gold);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

// LCS F1 (beta = 1) over tokenize(); stopwords kept.
double rouge_l(std::string_view prediction, std::string_view gold);

}  // namespace sqa
