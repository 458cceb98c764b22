#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sentifolio/market_data.hpp"

namespace sentifolio {

/// Proportional negative/neutral/positive masses plus the normalized
/// compound score in [-1, 1]. neg + neu + pos == 1 (up to fp rounding) for
/// any text that produced at least one token; all-zero otherwise.
struct SentimentScores {
    double neg = 0;
    double neu = 0;
    double pos = 0;
    double compound = 0;
};

/// Token valence ratings loaded from the published VADER lexicon file
/// (tab-separated `token\trating\t...`), plus the rule constants of the
/// scorer: booster/dampener increments, the negation token set, and the
/// special-case idiom valences.
class Lexicon {
public:
    /// Throws DataError when the file is missing, malformed or empty.
    static Lexicon load(const std::string& path);

    bool has_rating(const std::string& token_lower) const {
        return ratings_.count(token_lower) > 0;
    }
    double rating(const std::string& token_lower) const { return ratings_.at(token_lower); }

    bool is_booster(const std::string& token_lower) const {
        return boosters_.count(token_lower) > 0;
    }
    double booster(const std::string& token_lower) const { return boosters_.at(token_lower); }

    bool is_negation(const std::string& token) const { return negations_.count(token) > 0; }

    bool is_idiom(const std::string& phrase) const { return idioms_.count(phrase) > 0; }
    double idiom(const std::string& phrase) const { return idioms_.at(phrase); }

    std::size_t size() const { return ratings_.size(); }

private:
    Lexicon();

    std::unordered_map<std::string, double> ratings_;
    std::unordered_map<std::string, double> boosters_;
    std::unordered_set<std::string> negations_;
    std::unordered_map<std::string, double> idioms_;
};

/// VADER rule-based sentiment scoring: lexicon valence lookup, booster and
/// dampener increments with distance decay (0.293 base, x0.95 / x0.9 at
/// distance 2 / 3), negation flip (-0.74), ALL-CAPS emphasis (+-0.733),
/// "but" clause reweighting (x0.5 before / x1.5 after), special-case idioms,
/// exclamation- and question-mark amplification, and the S / sqrt(S^2 + 15)
/// compound normalization. Deterministic and pure.
SentimentScores score_text(const std::string& text, const Lexicon& lexicon);

/// Title and body concatenated with a sentence separator, then scored.
SentimentScores score_news_item(const NewsItem& item, const Lexicon& lexicon);

/// raw / sqrt(raw^2 + alpha), clipped to [-1, 1]. Odd, strictly increasing.
double normalize_compound(double raw_sum, double alpha = 15.0);

/// Groups scored articles by (asset, date); mean compound and group size.
/// Output sorted by asset then date.
std::vector<DailySentiment> aggregate_daily(
    const std::vector<std::pair<NewsItem, SentimentScores>>& items);

}  // namespace sentifolio
