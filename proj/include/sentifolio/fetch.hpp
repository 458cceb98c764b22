#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sentifolio/dates.hpp"
#include "sentifolio/market_data.hpp"

namespace sentifolio {

struct HttpResponse {
    int status = 0;       // 0 = transport-level failure (no HTTP status)
    std::string body;
    std::string error;    // transport diagnostics when status == 0
};

/// Minimal GET transport so the fetcher can run against a live endpoint or a
/// scripted mock. Implementations must be safe to call from multiple threads.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse get(const std::string& url,
                             const std::vector<std::pair<std::string, std::string>>& headers) = 0;
};

/// Live transport over cpp-httplib (HTTPS supported).
std::unique_ptr<HttpTransport> make_live_transport();

/// Scripted mock: replays a fixed response sequence, records requested URLs.
class MockHttpTransport final : public HttpTransport {
public:
    explicit MockHttpTransport(std::vector<HttpResponse> script) : script_(std::move(script)) {}

    HttpResponse get(const std::string& url,
                     const std::vector<std::pair<std::string, std::string>>& headers) override;

    const std::vector<std::string>& urls() const { return urls_; }

private:
    std::vector<HttpResponse> script_;
    std::vector<std::string> urls_;
    std::size_t cursor_ = 0;
};

struct ApiConfig {
    std::string base_url;           // e.g. "https://data.example.com"
    std::string api_key_header;     // header name; value comes from the environment
    std::string api_key_env;        // environment variable holding the key
    int rate_limit_ms = 1000;       // delay between consecutive requests
    int max_retries = 3;
    std::string mock_fixture;       // JSON response script; replaces the live transport
};

/// Builds a MockHttpTransport from a JSON fixture of the form
/// {"responses": [{"status": 200, "body": {...}}, ...]}; `body` may be an
/// inline JSON value or a string.
std::unique_ptr<HttpTransport> make_mock_transport_from_fixture(const std::string& path);

enum class FetchKind { Candles, News };

struct FetchStats {
    int retries = 0;      // retried attempts on the last fetch
    bool from_cache = false;
};

/// Fetches daily candles or news for one asset over a date range, validating
/// the JSON payload into the same shapes the CSV loaders produce. Responses
/// are cached one file per (asset, kind, range) under `cache_dir`, so reruns
/// never touch the network.
///
/// Expected payload: {"data": [{...}]} with candle rows
/// {date, open, high, low, close, volume} or news rows {date, title, body}.
///
/// A fetcher instance is not synchronized; concurrent per-asset fetches use
/// one fetcher each (cache files never collide across assets or kinds).
class RemoteFetcher {
public:
    RemoteFetcher(ApiConfig config, std::shared_ptr<HttpTransport> transport,
                  std::string cache_dir);

    PriceSeries fetch_candles(const AssetId& asset, const DateRange& range);
    std::vector<NewsItem> fetch_news(const AssetId& asset, const DateRange& range);

    const FetchStats& last_stats() const { return stats_; }

private:
    std::string fetch_payload(const AssetId& asset, const DateRange& range, FetchKind kind);

    ApiConfig config_;
    std::shared_ptr<HttpTransport> transport_;
    std::string cache_dir_;
    FetchStats stats_;
};

}  // namespace sentifolio
