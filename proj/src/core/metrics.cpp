#include "core/metrics.hpp"

#include <cctype>

#include "core/error.hpp"

namespace sqa {

double accuracy(const std::map<std::string, std::string>& predictions,
                const std::map<std::string, std::string>& gold) {
    if (predictions.empty()) fail(ErrorKind::invalid_argument, "accuracy of an empty prediction set");
    std::size_t correct = 0;
    for (const auto& [id, label] : predictions) {
        auto it = gold.find(id);
        if (it == gold.end()) fail(ErrorKind::data_error, "no gold label for sample " + id);
        if (it->second == label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

double iou(const Mask& a, const Mask& b) {
    if (a.side != b.side || a.cells.size() != b.cells.size())
        fail(ErrorKind::invalid_argument, "iou: mask shapes differ");
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        const bool x = a.cells[i] != 0, y = b.cells[i] != 0;
        inter += (x && y);
        uni += (x || y);
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

const std::set<std::string, std::less<>>& keyword_stopwords() {
    static const std::set<std::string, std::less<>> words{
        "a",  "an",  "the", "is",   "are",  "was",   "were", "be",  "of",   "to",
        "in", "on",  "at",  "by",   "for",  "with",  "and",  "or",  "as",   "this",
        "that", "it", "its", "from", "which", "what", "there", "their", "has", "have",
    };
    return words;
}

std::set<std::string> keyword_set(std::string_view text) {
    std::set<std::string> out;
    const auto& stop = keyword_stopwords();
    for (auto& t : tokenize(text)) {
        if (!stop.contains(t)) out.insert(std::move(t));
    }
    return out;
}

double keyword_f1(std::string_view prediction, std::string_view gold) {
    const auto p = keyword_set(prediction);
    const auto g = keyword_set(gold);
    if (p.empty() && g.empty()) return 1.0;
    if (p.empty() || g.empty()) return 0.0;
    std::size_t common = 0;
    for (const auto& t : p) common += g.contains(t);
    if (common == 0) return 0.0;
    // 2PR/(P+R) with P = c/|p|, R = c/|g| simplifies to 2c/(|p|+|g|).
    return 2.0 * static_cast<double>(common) / static_cast<double>(p.size() + g.size());
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double rouge_l(std::string_view prediction, std::string_view gold) {
    const auto p = tokenize(prediction);
    const auto g = tokenize(gold);
    if (p.empty() && g.empty()) return 1.0;
    if (p.empty() || g.empty()) return 0.0;
    const auto lcs = static_cast<double>(lcs_length(p, g));
    if (lcs == 0.0) return 0.0;
    return 2.0 * lcs / static_cast<double>(p.size() + g.size());
}

}  // namespace sqa
