#include "sentifolio/vader.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>

#include "sentifolio/csv.hpp"
#include "sentifolio/errors.hpp"

namespace sentifolio {

namespace {

constexpr double kBoosterIncr = 0.293;
constexpr double kBoosterDecr = -0.293;
constexpr double kCapsIncr = 0.733;     // ALL-CAPS emphasis
constexpr double kNegationScalar = -0.74;

const char* const kPuncChars = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";

// Leading/trailing punctuation combinations that get stripped from a token
// when the remainder is a known word of the text.
const std::vector<std::string>& punc_list() {
    static const std::vector<std::string> list = {
        ".", "!", "?", ",", ";", ":", "-", "'", "\"",
        "!!", "!!!", "??", "???", "?!?", "!?!", "?!?!", "!?!?"};
    return list;
}

const std::vector<std::string>& negate_words() {
    static const std::vector<std::string> words = {
        "aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt",
        "ain't", "aren't", "can't", "couldn't", "daren't", "didn't", "doesn't",
        "dont", "hadnt", "hasnt", "havent", "isnt", "mightnt", "mustnt", "neither",
        "don't", "hadn't", "hasn't", "haven't", "isn't", "mightn't", "mustn't",
        "neednt", "needn't", "never", "none", "nope", "nor", "not", "nothing",
        "nowhere", "oughtnt", "shant", "shouldnt", "uhuh", "wasnt", "werent",
        "oughtn't", "shan't", "shouldn't", "uh-uh", "wasn't", "weren't", "without",
        "wont", "wouldnt", "won't", "wouldn't", "rarely", "seldom", "despite"};
    return words;
}

std::vector<std::pair<std::string, double>> booster_entries() {
    std::vector<std::pair<std::string, double>> entries;
    for (const char* w :
         {"absolutely", "amazingly", "awfully", "completely", "considerably", "decidedly",
          "deeply", "effing", "enormously", "entirely", "especially", "exceptionally",
          "extremely", "fabulously", "flipping", "flippin", "fricking", "frickin",
          "frigging", "friggin", "fully", "fucking", "greatly", "hella", "highly", "hugely",
          "incredibly", "intensely", "majorly", "more", "most", "particularly", "purely",
          "quite", "really", "remarkably", "so", "substantially", "thoroughly", "totally",
          "tremendously", "uber", "unbelievably", "unusually", "utterly", "very"})
        entries.emplace_back(w, kBoosterIncr);
    for (const char* w :
         {"almost", "barely", "hardly", "just enough", "kind of", "kinda", "kindof",
          "kind-of", "less", "little", "marginally", "occasionally", "partly", "scarcely",
          "slightly", "somewhat", "sort of", "sorta", "sortof", "sort-of"})
        entries.emplace_back(w, kBoosterDecr);
    return entries;
}

std::vector<std::pair<std::string, double>> idiom_entries() {
    return {{"the shit", 3},        {"the bomb", 3},       {"bad ass", 1.5},
            {"yeah right", -2},     {"cut the mustard", 2}, {"kiss of death", -1.5},
            {"hand to mouth", -2}};
}

std::string to_lower(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_punc(char c) {
    for (const char* p = kPuncChars; *p; ++p)
        if (*p == c) return true;
    return false;
}

// Python-style isupper over ASCII: at least one upper-case letter and no
// lower-case letters.
bool is_upper_token(const std::string& word) {
    bool has_upper = false;
    for (char c : word) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::islower(u)) return false;
        if (std::isupper(u)) has_upper = true;
    }
    return has_upper;
}

std::vector<std::string> split_whitespace(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

// Tokenization: whitespace split, singleton tokens dropped, then a single
// leading or trailing punctuation cluster is stripped when the remainder is
// a word of the punctuation-free text. Contractions and most emoticons
// survive intact.
std::vector<std::string> words_and_emoticons(const std::string& text) {
    std::unordered_set<std::string> words_only;
    {
        std::string no_punc;
        no_punc.reserve(text.size());
        for (char c : text)
            if (!is_punc(c)) no_punc.push_back(c);
        for (auto& w : split_whitespace(no_punc))
            if (w.size() > 1) words_only.insert(w);
    }

    std::vector<std::string> tokens;
    for (auto& raw : split_whitespace(text)) {
        if (raw.size() <= 1) continue;
        std::string token = raw;
        for (const auto& p : punc_list()) {
            if (token.size() <= p.size()) continue;
            if (token.compare(0, p.size(), p) == 0) {
                std::string rest = token.substr(p.size());
                if (words_only.count(rest)) {
                    token = rest;
                    break;
                }
            }
            if (token.compare(token.size() - p.size(), p.size(), p) == 0) {
                std::string rest = token.substr(0, token.size() - p.size());
                if (words_only.count(rest)) {
                    token = rest;
                    break;
                }
            }
        }
        tokens.push_back(std::move(token));
    }
    return tokens;
}

bool allcap_differential(const std::vector<std::string>& words) {
    std::size_t allcaps = 0;
    for (const auto& w : words)
        if (is_upper_token(w)) ++allcaps;
    const std::size_t diff = words.size() - allcaps;
    return diff > 0 && diff < words.size();
}

bool negated_single(const std::string& word, const Lexicon& lexicon) {
    if (lexicon.is_negation(word)) return true;
    return word.find("n't") != std::string::npos;
}

double scalar_inc_dec(const std::string& word, double valence, bool is_cap_diff,
                      const Lexicon& lexicon) {
    const std::string lower = to_lower(word);
    if (!lexicon.is_booster(lower)) return 0.0;
    double scalar = lexicon.booster(lower);
    if (valence < 0) scalar = -scalar;
    if (is_cap_diff && is_upper_token(word)) scalar += valence > 0 ? kCapsIncr : -kCapsIncr;
    return scalar;
}

double never_check(double valence, const std::vector<std::string>& tokens, int start_i,
                   std::size_t i, const Lexicon& lexicon) {
    if (start_i == 0) {
        if (negated_single(tokens[i - 1], lexicon)) valence *= kNegationScalar;
    } else if (start_i == 1) {
        if (tokens[i - 2] == "never" && (tokens[i - 1] == "so" || tokens[i - 1] == "this"))
            valence *= 1.5;
        else if (negated_single(tokens[i - 2], lexicon))
            valence *= kNegationScalar;
    } else if (start_i == 2) {
        if ((tokens[i - 3] == "never" &&
             (tokens[i - 2] == "so" || tokens[i - 2] == "this")) ||
            tokens[i - 1] == "so" || tokens[i - 1] == "this")
            valence *= 1.25;
        else if (negated_single(tokens[i - 3], lexicon))
            valence *= kNegationScalar;
    }
    return valence;
}

double idioms_check(double valence, const std::vector<std::string>& tokens, std::size_t i,
                    const Lexicon& lexicon) {
    const std::string onezero = tokens[i - 1] + " " + tokens[i];
    const std::string twoonezero = tokens[i - 2] + " " + tokens[i - 1] + " " + tokens[i];
    const std::string twoone = tokens[i - 2] + " " + tokens[i - 1];
    const std::string threetwoone = tokens[i - 3] + " " + tokens[i - 2] + " " + tokens[i - 1];
    const std::string threetwo = tokens[i - 3] + " " + tokens[i - 2];

    for (const auto& seq : {onezero, twoonezero, twoone, threetwoone, threetwo}) {
        if (lexicon.is_idiom(seq)) {
            valence = lexicon.idiom(seq);
            break;
        }
    }
    if (tokens.size() - 1 > i) {
        const std::string zeroone = tokens[i] + " " + tokens[i + 1];
        if (lexicon.is_idiom(zeroone)) valence = lexicon.idiom(zeroone);
    }
    if (tokens.size() - 1 > i + 1) {
        const std::string zeroonetwo = tokens[i] + " " + tokens[i + 1] + " " + tokens[i + 2];
        if (lexicon.is_idiom(zeroonetwo)) valence = lexicon.idiom(zeroonetwo);
    }
    // booster/dampener bi-grams such as "sort of" or "kind of"
    if (lexicon.is_booster(threetwo) || lexicon.is_booster(twoone)) valence += kBoosterDecr;
    return valence;
}

double least_check(double valence, const std::vector<std::string>& tokens, std::size_t i,
                   const Lexicon& lexicon) {
    if (i > 1 && to_lower(tokens[i - 1]) == "least" &&
        !lexicon.has_rating(to_lower(tokens[i - 1]))) {
        const std::string prev = to_lower(tokens[i - 2]);
        if (prev != "at" && prev != "very") valence *= kNegationScalar;
    } else if (i > 0 && to_lower(tokens[i - 1]) == "least" &&
               !lexicon.has_rating(to_lower(tokens[i - 1]))) {
        valence *= kNegationScalar;
    }
    return valence;
}

double token_valence(const std::vector<std::string>& tokens, std::size_t i, bool is_cap_diff,
                     const Lexicon& lexicon) {
    const std::string& item = tokens[i];
    const std::string lower = to_lower(item);
    if (!lexicon.has_rating(lower)) return 0.0;

    double valence = lexicon.rating(lower);
    if (is_upper_token(item) && is_cap_diff) valence += valence > 0 ? kCapsIncr : -kCapsIncr;

    for (int start_i = 0; start_i < 3; ++start_i) {
        if (i <= static_cast<std::size_t>(start_i)) continue;
        const std::string& context = tokens[i - (start_i + 1)];
        if (lexicon.has_rating(to_lower(context))) continue;
        double s = scalar_inc_dec(context, valence, is_cap_diff, lexicon);
        if (start_i == 1 && s != 0) s *= 0.95;
        else if (start_i == 2 && s != 0) s *= 0.9;
        valence += s;
        valence = never_check(valence, tokens, start_i, i, lexicon);
        if (start_i == 2) valence = idioms_check(valence, tokens, i, lexicon);
    }
    return least_check(valence, tokens, i, lexicon);
}

void but_check(const std::vector<std::string>& tokens, std::vector<double>& sentiments) {
    auto it = std::find(tokens.begin(), tokens.end(), "but");
    if (it == tokens.end()) it = std::find(tokens.begin(), tokens.end(), "BUT");
    if (it == tokens.end()) return;
    const std::size_t but_index = static_cast<std::size_t>(it - tokens.begin());
    for (std::size_t k = 0; k < sentiments.size(); ++k) {
        if (k < but_index) sentiments[k] *= 0.5;
        else if (k > but_index) sentiments[k] *= 1.5;
    }
}

double amplify_ep(const std::string& text) {
    long count = std::count(text.begin(), text.end(), '!');
    if (count > 4) count = 4;
    return static_cast<double>(count) * 0.292;
}

double amplify_qm(const std::string& text) {
    const long count = std::count(text.begin(), text.end(), '?');
    if (count <= 1) return 0.0;
    return count <= 3 ? static_cast<double>(count) * 0.18 : 0.96;
}

}  // namespace

Lexicon::Lexicon() {
    for (auto& [word, value] : booster_entries()) boosters_.emplace(word, value);
    for (auto& word : negate_words()) negations_.insert(word);
    for (auto& [phrase, value] : idiom_entries()) idioms_.emplace(phrase, value);
}

Lexicon Lexicon::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(fmt::format("cannot open lexicon '{}'", path));

    Lexicon lex;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab1 = line.find('\t');
        if (tab1 == std::string::npos)
            throw DataError(fmt::format("lexicon '{}' line {}: expected tab-separated "
                                        "token and rating", path, line_no));
        const auto tab2 = line.find('\t', tab1 + 1);
        const std::string token = line.substr(0, tab1);
        const std::string rating_text =
            line.substr(tab1 + 1, tab2 == std::string::npos ? std::string::npos
                                                            : tab2 - tab1 - 1);
        double rating;
        try {
            rating = parse_double(rating_text);
        } catch (const std::exception&) {
            throw DataError(fmt::format("lexicon '{}' line {}: bad rating '{}'", path,
                                        line_no, rating_text));
        }
        if (!std::isfinite(rating))
            throw DataError(fmt::format("lexicon '{}' line {}: non-finite rating", path,
                                        line_no));
        lex.ratings_[token] = rating;
    }
    if (lex.ratings_.empty()) throw DataError(fmt::format("lexicon '{}' is empty", path));
    return lex;
}

SentimentScores score_text(const std::string& text, const Lexicon& lexicon) {
    const auto tokens = words_and_emoticons(text);
    const bool is_cap_diff = allcap_differential(tokens);

    std::vector<double> sentiments;
    sentiments.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string lower = to_lower(tokens[i]);
        const bool kind_of = i + 1 < tokens.size() && lower == "kind" &&
                             to_lower(tokens[i + 1]) == "of";
        if (kind_of || lexicon.is_booster(lower)) {
            sentiments.push_back(0.0);
            continue;
        }
        sentiments.push_back(token_valence(tokens, i, is_cap_diff, lexicon));
    }
    but_check(tokens, sentiments);

    SentimentScores scores;
    if (sentiments.empty()) return scores;

    double sum_s = 0;
    for (double s : sentiments) sum_s += s;
    const double punct = amplify_ep(text) + amplify_qm(text);
    if (sum_s > 0) sum_s += punct;
    else if (sum_s < 0) sum_s -= punct;
    scores.compound = normalize_compound(sum_s);

    double pos_sum = 0, neg_sum = 0;
    double neu_count = 0;
    for (double s : sentiments) {
        if (s > 0) pos_sum += s + 1;       // +1 compensates for neutrals counted as 1
        else if (s < 0) neg_sum += s - 1;
        else neu_count += 1;
    }
    if (pos_sum > std::fabs(neg_sum)) pos_sum += punct;
    else if (pos_sum < std::fabs(neg_sum)) neg_sum -= punct;

    const double total = pos_sum + std::fabs(neg_sum) + neu_count;
    scores.pos = std::fabs(pos_sum / total);
    scores.neg = std::fabs(neg_sum / total);
    scores.neu = std::fabs(neu_count / total);
    return scores;
}

SentimentScores score_news_item(const NewsItem& item, const Lexicon& lexicon) {
    return score_text(item.body.empty() ? item.title : item.title + ". " + item.body,
                      lexicon);
}

double normalize_compound(double raw_sum, double alpha) {
    if (alpha <= 0) throw ConfigError("normalize_compound: alpha must be positive");
    const double norm = raw_sum / std::sqrt(raw_sum * raw_sum + alpha);
    return std::clamp(norm, -1.0, 1.0);
}

std::vector<DailySentiment> aggregate_daily(
    const std::vector<std::pair<NewsItem, SentimentScores>>& items) {
    std::map<std::pair<std::string, std::int64_t>, std::pair<double, int>> groups;
    for (const auto& [item, scores] : items) {
        auto& [sum, count] = groups[{item.asset.ticker, item.date.serial()}];
        sum += scores.compound;
        count += 1;
    }
    std::vector<DailySentiment> out;
    out.reserve(groups.size());
    for (const auto& [key, agg] : groups) {
        DailySentiment d;
        d.asset = AssetId(key.first);
        d.date = Date::from_serial(key.second);
        d.mean_compound = agg.first / agg.second;
        d.article_count = agg.second;
        out.push_back(d);
    }
    return out;
}

}  // namespace sentifolio
