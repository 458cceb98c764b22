#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "sentifolio/llm.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "sentifolio/errors.hpp"

namespace sentifolio {

using nlohmann::json;

const char* const kPromptTemplate =
    "You are a crypto investment assistant.\n"
    "\n"
    "News article:\n"
    "\"{news_text}\"\n"
    "\n"
    "The VADER sentiment score is: {vader_score}\n"
    "\n"
    "1. Do you agree with this sentiment?\n"
    "2. What is your interpretation?\n"
    "3. Should the investor increase, decrease, or hold their position?\n"
    "Please give clear reasoning and actionable advice.\n";

const char* to_string(Recommendation r) {
    switch (r) {
        case Recommendation::Increase: return "Increase";
        case Recommendation::Decrease: return "Decrease";
        case Recommendation::Hold: return "Hold";
        case Recommendation::Unclear: return "Unclear";
    }
    return "Unclear";
}

const char* to_string(Agreement a) {
    switch (a) {
        case Agreement::Agree: return "Agree";
        case Agreement::Partial: return "Partial";
        case Agreement::Disagree: return "Disagree";
        case Agreement::Unclear: return "Unclear";
    }
    return "Unclear";
}

std::string build_prompt(const std::string& news_text, double vader_score) {
    if (news_text.empty()) throw ConfigError("build_prompt: empty news text");
    if (vader_score < -1.0 || vader_score > 1.0)
        throw ConfigError(fmt::format("build_prompt: score {} outside [-1, 1]", vader_score));

    std::string prompt = kPromptTemplate;
    auto replace = [&prompt](const std::string& placeholder, const std::string& value) {
        const auto pos = prompt.find(placeholder);
        prompt.replace(pos, placeholder.size(), value);
    };
    replace("{news_text}", news_text);
    replace("{vader_score}", fmt::format("{:.2f}", vader_score));
    return prompt;
}

namespace {

std::string to_lower_copy(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_word_char(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

// First position where `stem` occurs with a non-letter (or start) on its
// left, so "hold"/"holding" match but "shareholder" does not.
std::size_t find_stem(const std::string& lower_text, const std::string& stem,
                      std::size_t from = 0) {
    std::size_t pos = from;
    while ((pos = lower_text.find(stem, pos)) != std::string::npos) {
        if (pos == 0 || !is_word_char(lower_text[pos - 1])) return pos;
        ++pos;
    }
    return std::string::npos;
}

// Start offset of the content following the marker of numbered item `n`
// ("1.", optionally wrapped in markdown emphasis) at the beginning of a
// line; npos when absent.
std::size_t find_numbered_item(const std::string& text, int n) {
    const std::string digit = std::to_string(n);
    std::size_t line_start = 0;
    while (line_start < text.size()) {
        std::size_t p = line_start;
        while (p < text.size() && (text[p] == ' ' || text[p] == '\t' || text[p] == '*')) ++p;
        if (text.compare(p, digit.size(), digit) == 0 && p + digit.size() < text.size() &&
            text[p + digit.size()] == '.')
            return p + digit.size() + 1;
        const auto nl = text.find('\n', line_start);
        if (nl == std::string::npos) break;
        line_start = nl + 1;
    }
    return std::string::npos;
}

}  // namespace

std::pair<Recommendation, Agreement> parse_recommendation(const std::string& response) {
    const std::string lower = to_lower_copy(response);

    // advice section: after item 3 when the response is numbered
    const auto item3 = find_numbered_item(response, 3);
    const std::string advice =
        item3 == std::string::npos ? lower : lower.substr(item3);

    Recommendation rec = Recommendation::Unclear;
    std::size_t best = std::string::npos;
    const std::pair<const char*, Recommendation> families[] = {
        {"hold", Recommendation::Hold},
        {"decreas", Recommendation::Decrease},
        {"increas", Recommendation::Increase},
    };
    for (const auto& [stem, candidate] : families) {
        const auto pos = find_stem(advice, stem);
        if (pos != std::string::npos && pos < best) {
            best = pos;
            rec = candidate;
        }
    }

    // agreement from item 1 (bounded by item 2 when present)
    const auto item1 = find_numbered_item(response, 1);
    std::string section = lower;
    if (item1 != std::string::npos) {
        const auto item2 = find_numbered_item(response, 2);
        section = item2 != std::string::npos && item2 > item1
                      ? lower.substr(item1, item2 - item1)
                      : lower.substr(item1);
    }
    Agreement agreement = Agreement::Unclear;
    if (section.find("do not agree") != std::string::npos ||
        section.find("don't agree") != std::string::npos ||
        find_stem(section, "disagree") != std::string::npos)
        agreement = Agreement::Disagree;
    else if (find_stem(section, "partial") != std::string::npos)
        agreement = Agreement::Partial;
    else if (find_stem(section, "agree") != std::string::npos)
        agreement = Agreement::Agree;

    return {rec, agreement};
}

namespace {

class GeminiTransport final : public ChatTransport {
public:
    explicit GeminiTransport(LlmConfig config) : config_(std::move(config)) {
        const char* key =
            config_.api_key_env.empty() ? nullptr : std::getenv(config_.api_key_env.c_str());
        if (!key || !*key)
            throw ConfigError(fmt::format(
                "LLM API key environment variable '{}' is not set; export it or switch "
                "the verify transport to 'mock'",
                config_.api_key_env));
        api_key_ = key;
    }

    ChatResult complete(const std::string& prompt, const std::string& model) override {
        httplib::Client client(config_.endpoint);
        client.set_connection_timeout(10);
        client.set_read_timeout(60);

        const json body = {{"contents", {{{"parts", {{{"text", prompt}}}}}}}};
        const std::string path =
            fmt::format("/v1beta/models/{}:generateContent?key={}", model, api_key_);
        auto res = client.Post(path, body.dump(), "application/json");
        if (!res) return {false, "", httplib::to_string(res.error())};
        if (res->status != 200)
            return {false, "", fmt::format("HTTP {}: {}", res->status, res->body)};

        const json payload = json::parse(res->body, nullptr, false);
        if (payload.is_discarded()) return {false, "", "unparseable response body"};
        try {
            return {true,
                    payload.at("candidates").at(0).at("content").at("parts").at(0).at("text")
                        .get<std::string>(),
                    ""};
        } catch (const json::exception& e) {
            return {false, "", fmt::format("unexpected response shape: {}", e.what())};
        }
    }

private:
    LlmConfig config_;
    std::string api_key_;
};

std::string utc_now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    return fmt::format("{:%FT%TZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(now)));
}

}  // namespace

std::unique_ptr<ChatTransport> make_live_chat_transport(const LlmConfig& config) {
    return std::make_unique<GeminiTransport>(config);
}

ChatResult MockChatTransport::complete(const std::string& prompt, const std::string&) {
    prompts_.push_back(prompt);
    if (script_.empty()) return {false, "", "empty mock script"};
    if (cursor_ < script_.size()) return script_[cursor_++];
    return script_.back();
}

std::string record_to_json(const VerificationRecord& record) {
    const json j = {{"news_text", record.news_text},
                    {"vader_score", record.vader_score},
                    {"model", record.model},
                    {"raw_response", record.raw_response},
                    {"recommendation", to_string(record.recommendation)},
                    {"agreement", to_string(record.agreement)},
                    {"error", record.error},
                    {"timestamp", record.timestamp}};
    return j.dump();
}

std::vector<VerificationRecord> verify_batch(
    const std::vector<std::pair<NewsItem, double>>& items, ChatTransport& client,
    const LlmConfig& policy, const std::string& out_path,
    const std::function<std::string()>& clock) {
    std::ofstream out;
    if (!out_path.empty()) {
        out.open(out_path, std::ios::binary);
        if (!out) throw DataError(fmt::format("cannot write '{}'", out_path));
    }

    std::vector<VerificationRecord> records;
    records.reserve(items.size());
    bool first_request = true;
    for (const auto& [item, score] : items) {
        VerificationRecord record;
        record.news_text = item.body.empty() ? item.title : item.title + ". " + item.body;
        record.vader_score = score;
        record.model = policy.model;
        record.timestamp = clock ? clock() : utc_now_iso8601();

        const std::string prompt = build_prompt(record.news_text, score);
        ChatResult result;
        for (int attempt = 0; attempt <= policy.max_retries; ++attempt) {
            if (!first_request && policy.rate_limit_ms > 0)
                std::this_thread::sleep_for(std::chrono::milliseconds(policy.rate_limit_ms));
            if (attempt > 0 && policy.rate_limit_ms > 0)
                std::this_thread::sleep_for(
                    std::chrono::milliseconds(policy.rate_limit_ms * (1 << (attempt - 1))));
            first_request = false;
            result = client.complete(prompt, policy.model);
            if (result.ok) break;
        }

        if (result.ok) {
            record.raw_response = result.text;
            std::tie(record.recommendation, record.agreement) =
                parse_recommendation(result.text);
        } else {
            record.error = result.error.empty() ? "transport failure" : result.error;
        }

        if (out.is_open()) out << record_to_json(record) << "\n";
        records.push_back(std::move(record));
    }
    return records;
}

}  // namespace sentifolio
