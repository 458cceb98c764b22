#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sentifolio/market_data.hpp"

namespace sentifolio {

enum class Recommendation { Increase, Decrease, Hold, Unclear };
enum class Agreement { Agree, Partial, Disagree, Unclear };

const char* to_string(Recommendation r);
const char* to_string(Agreement a);

/// The verification prompt template. `{news_text}` and `{vader_score}` are
/// the substitution points; the score renders with exactly two decimals.
/// The same template ships as a text asset (data/prompt_template.txt) and a
/// test pins the two byte-for-byte.
extern const char* const kPromptTemplate;

/// Byte-exact template instantiation. Throws ConfigError on empty news text
/// or a score outside [-1, 1].
std::string build_prompt(const std::string& news_text, double vader_score);

/// Total: every string maps to a valid pair (Unclear, never an exception).
/// Scans the advice section (text after the third numbered item when
/// present, else the whole text) for the first hold / decrease / increase
/// word-family match; agreement comes from the "agree" / "partially" /
/// "do not agree" patterns of item 1.
std::pair<Recommendation, Agreement> parse_recommendation(const std::string& response);

struct ChatResult {
    bool ok = false;
    std::string text;
    std::string error;
};

/// Pluggable chat-completion transport (live HTTP or deterministic mock).
class ChatTransport {
public:
    virtual ~ChatTransport() = default;
    virtual ChatResult complete(const std::string& prompt, const std::string& model) = 0;
};

struct LlmConfig {
    std::string model = "gemini-1.5-flash-latest";
    std::string endpoint = "https://generativelanguage.googleapis.com";
    std::string api_key_env = "GEMINI_API_KEY";
    int rate_limit_ms = 1000;
    int max_retries = 3;
};

/// Live transport for a Gemini-style generateContent endpoint. Construction
/// fails fast (ConfigError) when the API key variable is unset.
std::unique_ptr<ChatTransport> make_live_chat_transport(const LlmConfig& config);

/// Deterministic mock replaying a scripted result sequence; repeats the last
/// entry once the script is exhausted.
class MockChatTransport final : public ChatTransport {
public:
    explicit MockChatTransport(std::vector<ChatResult> script) : script_(std::move(script)) {}

    ChatResult complete(const std::string& prompt, const std::string& model) override;

    const std::vector<std::string>& prompts() const { return prompts_; }

private:
    std::vector<ChatResult> script_;
    std::vector<std::string> prompts_;
    std::size_t cursor_ = 0;
};

struct VerificationRecord {
    std::string news_text;
    double vader_score = 0;
    std::string model;
    std::string raw_response;
    Recommendation recommendation = Recommendation::Unclear;
    Agreement agreement = Agreement::Unclear;
    std::string error;      // non-empty when the transport ultimately failed
    std::string timestamp;  // ISO-8601 UTC
};

/// One record per item; transport failures become Unclear records with the
/// error preserved, never exceptions. When `out_path` is non-empty, records
/// are appended there as line-delimited JSON as they complete. The clock is
/// injectable so tests stay deterministic.
std::vector<VerificationRecord> verify_batch(
    const std::vector<std::pair<NewsItem, double>>& items, ChatTransport& client,
    const LlmConfig& policy, const std::string& out_path = "",
    const std::function<std::string()>& clock = {});

std::string record_to_json(const VerificationRecord& record);

}  // namespace sentifolio
