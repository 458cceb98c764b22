#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sentifolio/errors.hpp"
#include "sentifolio/fetch.hpp"

using namespace sentifolio;
namespace fs = std::filesystem;

namespace {

const char* kThreeCandles = R"({"data": [
  {"date": "2021-01-02", "open": 10, "high": 12, "low": 9, "close": 11, "volume": 100},
  {"date": "2021-01-01", "open": 9, "high": 11, "low": 8, "close": 10, "volume": 50},
  {"date": "2021-01-03", "open": 11, "high": 13, "low": 10, "close": 12, "volume": 80}
]})";

ApiConfig api_config() {
    ApiConfig config;
    config.base_url = "https://mock.example";
    config.rate_limit_ms = 0;
    config.max_retries = 3;
    return config;
}

std::string fresh_cache(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "sentifolio_fetch" / name;
    fs::remove_all(dir);
    return dir.string();
}

}  // namespace

TEST_CASE("fetch_candles passes validated candles through, sorted by date") {
    auto transport = std::make_shared<MockHttpTransport>(
        std::vector<HttpResponse>{{200, kThreeCandles, ""}});
    RemoteFetcher fetcher(api_config(), transport, fresh_cache("sort"));
    const auto series = fetcher.fetch_candles(AssetId("BTC"), {{2021, 1, 1}, {2021, 1, 3}});
    REQUIRE(series.candles.size() == 3);
    CHECK(series.candles[0].date.to_string() == "2021-01-01");  // out-of-order input sorted
    CHECK(series.candles[2].close == 12);
    CHECK(fetcher.last_stats().retries == 0);
    CHECK_FALSE(fetcher.last_stats().from_cache);
    REQUIRE(transport->urls().size() == 1);
    CHECK(transport->urls()[0] ==
          "https://mock.example/candles?asset=BTC&from=2021-01-01&to=2021-01-03");
}

TEST_CASE("HTTP 429 twice then 200 succeeds with retry count 2") {
    auto transport = std::make_shared<MockHttpTransport>(std::vector<HttpResponse>{
        {429, "slow down", ""}, {429, "slow down", ""}, {200, kThreeCandles, ""}});
    RemoteFetcher fetcher(api_config(), transport, fresh_cache("retry"));
    const auto series = fetcher.fetch_candles(AssetId("BTC"), {{2021, 1, 1}, {2021, 1, 3}});
    CHECK(series.candles.size() == 3);
    CHECK(fetcher.last_stats().retries == 2);
}

TEST_CASE("exhausted retries raise, non-retryable statuses fail immediately") {
    auto flaky = std::make_shared<MockHttpTransport>(std::vector<HttpResponse>{
        {500, "", ""}, {500, "", ""}, {500, "", ""}, {500, "", ""}, {500, "", ""}});
    RemoteFetcher fetcher(api_config(), flaky, fresh_cache("fail"));
    CHECK_THROWS_AS(fetcher.fetch_candles(AssetId("BTC"), {{2021, 1, 1}, {2021, 1, 2}}),
                    EngineError);

    auto forbidden = std::make_shared<MockHttpTransport>(
        std::vector<HttpResponse>{{403, "denied", ""}});
    RemoteFetcher f2(api_config(), forbidden, fresh_cache("forbid"));
    CHECK_THROWS_AS(f2.fetch_candles(AssetId("BTC"), {{2021, 1, 1}, {2021, 1, 2}}),
                    EngineError);
    CHECK(forbidden->urls().size() == 1);  // no retry on 403
}

TEST_CASE("payloads are cached; the second fetch never touches the transport") {
    const auto cache = fresh_cache("cache");
    auto transport = std::make_shared<MockHttpTransport>(
        std::vector<HttpResponse>{{200, kThreeCandles, ""}});
    {
        RemoteFetcher fetcher(api_config(), transport, cache);
        fetcher.fetch_candles(AssetId("BTC"), {{2021, 1, 1}, {2021, 1, 3}});
        CHECK_FALSE(fetcher.last_stats().from_cache);
    }
    {
        // a transport with an empty script would fail if it were consulted
        auto dead = std::make_shared<MockHttpTransport>(std::vector<HttpResponse>{});
        RemoteFetcher fetcher(api_config(), dead, cache);
        const auto series =
            fetcher.fetch_candles(AssetId("BTC"), {{2021, 1, 1}, {2021, 1, 3}});
        CHECK(series.candles.size() == 3);
        CHECK(fetcher.last_stats().from_cache);
        CHECK(dead->urls().empty());
    }
    // one file per (kind, asset, range), addressed by the request parameters
    CHECK(fs::exists(fs::path(cache) / "candles_BTC_2021-01-01_2021-01-03.json"));
}

TEST_CASE("schema mismatches are data errors") {
    auto bad_shape = std::make_shared<MockHttpTransport>(
        std::vector<HttpResponse>{{200, R"({"rows": []})", ""}});
    RemoteFetcher fetcher(api_config(), bad_shape, fresh_cache("schema"));
    CHECK_THROWS_AS(fetcher.fetch_candles(AssetId("BTC"), {{2021, 1, 1}, {2021, 1, 2}}),
                    DataError);

    auto bad_candle = std::make_shared<MockHttpTransport>(std::vector<HttpResponse>{
        {200, R"({"data": [{"date": "2021-01-01", "open": 1, "high": 2, "low": 3,
                  "close": 1, "volume": 0}]})", ""}});
    RemoteFetcher f2(api_config(), bad_candle, fresh_cache("schema2"));
    CHECK_THROWS_AS(f2.fetch_candles(AssetId("BTC"), {{2021, 1, 1}, {2021, 1, 2}}),
                    DataError);
}

TEST_CASE("fetch_news validates and sorts items") {
    auto transport = std::make_shared<MockHttpTransport>(std::vector<HttpResponse>{
        {200, R"({"data": [
          {"date": "2021-01-02", "title": "Later item", "body": "b"},
          {"date": "2021-01-01", "title": "Earlier item", "body": ""},
          {"date": "2021-01-03", "title": "", "body": "dropped, empty title"}
        ]})", ""}});
    RemoteFetcher fetcher(api_config(), transport, fresh_cache("news"));
    const auto items = fetcher.fetch_news(AssetId("ETH"), {{2021, 1, 1}, {2021, 1, 3}});
    REQUIRE(items.size() == 2);
    CHECK(items[0].title == "Earlier item");
    CHECK(items[1].title == "Later item");
    CHECK(items[0].asset.ticker == "ETH");
}

TEST_CASE("configured api key header demands the environment variable") {
    auto transport = std::make_shared<MockHttpTransport>(
        std::vector<HttpResponse>{{200, kThreeCandles, ""}});
    auto config = api_config();
    config.api_key_header = "authorization";
    config.api_key_env = "SENTIFOLIO_FETCH_TEST_KEY_MISSING";
    RemoteFetcher fetcher(config, transport, fresh_cache("key"));
    CHECK_THROWS_AS(fetcher.fetch_candles(AssetId("BTC"), {{2021, 1, 1}, {2021, 1, 2}}),
                    ConfigError);
}
