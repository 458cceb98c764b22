#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "sentifolio/fetch.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "sentifolio/errors.hpp"

namespace sentifolio {

using nlohmann::json;

namespace {

class LiveTransport final : public HttpTransport {
public:
    HttpResponse get(const std::string& url,
                     const std::vector<std::pair<std::string, std::string>>& headers) override {
        auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos) return {0, "", "bad url: " + url};
        auto path_start = url.find('/', scheme_end + 3);
        std::string host = url.substr(0, path_start);
        std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

        httplib::Client client(host);
        client.set_connection_timeout(10);
        client.set_read_timeout(30);
        httplib::Headers hdrs;
        for (const auto& [k, v] : headers) hdrs.emplace(k, v);
        auto res = client.Get(path, hdrs);
        if (!res) return {0, "", httplib::to_string(res.error())};
        return {res->status, res->body, ""};
    }
};

bool retryable(const HttpResponse& r) {
    return r.status == 0 || r.status == 429 || r.status >= 500;
}

std::string cache_file_name(const AssetId& asset, const DateRange& range, FetchKind kind) {
    return fmt::format("{}_{}_{}_{}.json", kind == FetchKind::Candles ? "candles" : "news",
                       asset.ticker, range.start.to_string(), range.end.to_string());
}

double require_number(const json& row, const char* key) {
    if (!row.contains(key) || !row[key].is_number())
        throw DataError(fmt::format("remote payload row missing numeric '{}'", key));
    return row[key].get<double>();
}

std::string require_string(const json& row, const char* key) {
    if (!row.contains(key) || !row[key].is_string())
        throw DataError(fmt::format("remote payload row missing string '{}'", key));
    return row[key].get<std::string>();
}

}  // namespace

std::unique_ptr<HttpTransport> make_live_transport() {
    return std::make_unique<LiveTransport>();
}

std::unique_ptr<HttpTransport> make_mock_transport_from_fixture(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("cannot open API mock fixture '{}'", path));
    json fixture = json::parse(in, nullptr, false);
    if (fixture.is_discarded() || !fixture.contains("responses") ||
        !fixture["responses"].is_array())
        throw ConfigError(fmt::format("API mock fixture '{}': expected "
                                      "{{\"responses\": [...]}}", path));
    std::vector<HttpResponse> script;
    for (const auto& entry : fixture["responses"]) {
        HttpResponse response;
        response.status = entry.value("status", 200);
        if (entry.contains("body"))
            response.body = entry["body"].is_string() ? entry["body"].get<std::string>()
                                                      : entry["body"].dump();
        response.error = entry.value("error", std::string());
        script.push_back(std::move(response));
    }
    return std::make_unique<MockHttpTransport>(std::move(script));
}

HttpResponse MockHttpTransport::get(
    const std::string& url, const std::vector<std::pair<std::string, std::string>>&) {
    urls_.push_back(url);
    if (cursor_ >= script_.size()) return {0, "", "mock script exhausted"};
    return script_[cursor_++];
}

RemoteFetcher::RemoteFetcher(ApiConfig config, std::shared_ptr<HttpTransport> transport,
                             std::string cache_dir)
    : config_(std::move(config)), transport_(std::move(transport)),
      cache_dir_(std::move(cache_dir)) {
    if (!cache_dir_.empty()) std::filesystem::create_directories(cache_dir_);
}

std::string RemoteFetcher::fetch_payload(const AssetId& asset, const DateRange& range,
                                         FetchKind kind) {
    stats_ = {};
    const auto cache_path =
        std::filesystem::path(cache_dir_) / cache_file_name(asset, range, kind);
    if (!cache_dir_.empty() && std::filesystem::exists(cache_path)) {
        std::ifstream in(cache_path, std::ios::binary);
        stats_.from_cache = true;
        return std::string(std::istreambuf_iterator<char>(in), {});
    }

    const std::string url = fmt::format(
        "{}/{}?asset={}&from={}&to={}", config_.base_url,
        kind == FetchKind::Candles ? "candles" : "news", asset.ticker,
        range.start.to_string(), range.end.to_string());

    std::vector<std::pair<std::string, std::string>> headers;
    if (!config_.api_key_header.empty()) {
        const char* key = config_.api_key_env.empty() ? nullptr
                                                      : std::getenv(config_.api_key_env.c_str());
        if (!key)
            throw ConfigError(fmt::format("API key environment variable '{}' not set",
                                          config_.api_key_env));
        headers.emplace_back(config_.api_key_header, key);
    }

    HttpResponse response;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            ++stats_.retries;
            std::this_thread::sleep_for(
                std::chrono::milliseconds(config_.rate_limit_ms * attempt));
        }
        response = transport_->get(url, headers);
        if (!retryable(response)) break;
    }
    if (response.status == 0)
        throw EngineError(fmt::format("fetch {} failed after {} retries: {}", url,
                                      stats_.retries, response.error));
    if (response.status != 200)
        throw EngineError(fmt::format("fetch {} failed: HTTP {}", url, response.status));

    if (!cache_dir_.empty()) {
        std::ofstream out(cache_path, std::ios::binary);
        out << response.body;
    }
    return response.body;
}

PriceSeries RemoteFetcher::fetch_candles(const AssetId& asset, const DateRange& range) {
    const std::string body = fetch_payload(asset, range, FetchKind::Candles);
    json payload = json::parse(body, nullptr, false);
    if (payload.is_discarded() || !payload.contains("data") || !payload["data"].is_array())
        throw DataError(fmt::format("candles payload for {}: expected {{\"data\": [...]}}",
                                    asset.ticker));

    PriceSeries series{asset, {}};
    for (const auto& row : payload["data"]) {
        Candle c;
        c.date = parse_date(require_string(row, "date"));
        c.open = require_number(row, "open");
        c.high = require_number(row, "high");
        c.low = require_number(row, "low");
        c.close = require_number(row, "close");
        c.volume = require_number(row, "volume");
        if (!c.is_valid())
            throw DataError(fmt::format("candles payload for {}: invalid candle on {}",
                                        asset.ticker, c.date.to_string()));
        series.candles.push_back(c);
    }
    std::sort(series.candles.begin(), series.candles.end(),
              [](const Candle& a, const Candle& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < series.candles.size(); ++i)
        if (series.candles[i].date == series.candles[i - 1].date)
            throw DataError(fmt::format("candles payload for {}: duplicate date {}",
                                        asset.ticker, series.candles[i].date.to_string()));
    return series;
}

std::vector<NewsItem> RemoteFetcher::fetch_news(const AssetId& asset, const DateRange& range) {
    const std::string body = fetch_payload(asset, range, FetchKind::News);
    json payload = json::parse(body, nullptr, false);
    if (payload.is_discarded() || !payload.contains("data") || !payload["data"].is_array())
        throw DataError(fmt::format("news payload for {}: expected {{\"data\": [...]}}",
                                    asset.ticker));

    std::vector<NewsItem> items;
    for (const auto& row : payload["data"]) {
        NewsItem item;
        item.date = parse_date(require_string(row, "date"));
        item.asset = asset;
        item.title = require_string(row, "title");
        item.body = row.contains("body") && row["body"].is_string()
                        ? row["body"].get<std::string>()
                        : std::string();
        if (item.title.empty()) continue;
        items.push_back(std::move(item));
    }
    std::sort(items.begin(), items.end(),
              [](const NewsItem& a, const NewsItem& b) { return a.date < b.date; });
    return items;
}

}  // namespace sentifolio
