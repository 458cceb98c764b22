#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sentifolio/csv.hpp"
#include "sentifolio/errors.hpp"
#include "sentifolio/market_data.hpp"

using namespace sentifolio;

namespace {

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "sentifolio_md_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string write_temp(const std::string& name, const std::string& content) {
    const auto path = temp_dir() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path.string();
}

}  // namespace

TEST_CASE("dates parse, format and order") {
    const Date d = parse_date("2020-02-14");
    CHECK(d.to_string() == "2020-02-14");
    CHECK(parse_date("2020-02-29").to_string() == "2020-02-29");  // leap day
    CHECK(d < parse_date("2020-02-15"));
    CHECK(Date::from_serial(d.serial() + 1).to_string() == "2020-02-15");
    CHECK_THROWS_AS(parse_date("2021-02-30"), std::invalid_argument);
    CHECK_THROWS_AS(parse_date("2021-13-01"), std::invalid_argument);
    CHECK_THROWS_AS(parse_date("14/02/2020"), std::invalid_argument);
}

TEST_CASE("csv reader handles RFC-4180 quoting") {
    std::istringstream in("a,\"b,with comma\",\"line\nbreak\",\"doubled \"\"quote\"\"\"\nx,y,z,w\n");
    CsvReader reader(in);
    std::vector<std::string> fields;
    std::size_t line = 0;
    REQUIRE(reader.next(fields, line));
    CHECK(line == 1);
    CHECK(fields == std::vector<std::string>{"a", "b,with comma", "line\nbreak",
                                             "doubled \"quote\""});
    REQUIRE(reader.next(fields, line));
    CHECK(line == 3);  // physical line after the embedded newline
    CHECK(fields == std::vector<std::string>{"x", "y", "z", "w"});
    CHECK_FALSE(reader.next(fields, line));
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 44053.63, 1e-17, -2.5, 0.0})
        CHECK(parse_double(format_double(v)) == v);
}

TEST_CASE("load_candles_csv identity load") {
    const auto path = write_temp("candles_ok.csv",
                                 "date,asset,open,high,low,close,volume\n"
                                 "2021-01-02,BTC,10,12,9,11,100\n"
                                 "2021-01-01,BTC,9,11,8,10,50\n"
                                 "2021-01-01,ETH,1,2,0.5,1.5,10\n"
                                 "2021-01-02,ETH,1.5,2.5,1,2,20\n");
    const auto series = load_candles_csv(path);
    REQUIRE(series.size() == 2);
    CHECK(series[0].asset.ticker == "BTC");
    REQUIRE(series[0].candles.size() == 2);
    CHECK(series[0].candles[0].date.to_string() == "2021-01-01");  // sorted
    CHECK(series[0].candles[1].close == 11);
    CHECK(series[1].asset.ticker == "ETH");
    CHECK(series[1].candles.size() == 2);
}

TEST_CASE("load_candles_csv rejects bad rows with line numbers") {
    const auto zero_close = write_temp("candles_zero.csv",
                                       "date,asset,open,high,low,close,volume\n"
                                       "2021-01-01,BTC,9,11,8,10,50\n"
                                       "2021-01-02,BTC,1,2,0.5,0,10\n");
    CHECK_THROWS_WITH_AS(load_candles_csv(zero_close),
                         doctest::Contains("line 3"), DataError);

    const auto dup = write_temp("candles_dup.csv",
                                "date,asset,open,high,low,close,volume\n"
                                "2021-01-01,BTC,9,11,8,10,50\n"
                                "2021-01-01,BTC,9,11,8,10,50\n");
    CHECK_THROWS_WITH_AS(load_candles_csv(dup), doctest::Contains("duplicate"), DataError);

    const auto bad_header = write_temp("candles_hdr.csv", "date,asset,close\n");
    CHECK_THROWS_AS(load_candles_csv(bad_header), DataError);
    CHECK_THROWS_AS(load_candles_csv("/nonexistent/file.csv"), DataError);
}

TEST_CASE("load_news_csv validates and counts skips") {
    const std::vector<AssetId> universe = {AssetId("BTC"), AssetId("ETH")};
    const auto path = write_temp("news.csv",
                                 "date,asset,title,body\n"
                                 "2021-01-01,BTC,Rally continues,\"Body, with comma\"\n"
                                 "2021-01-01,BTC,,empty title row\n"
                                 "2021-01-02,DOGE,Outside universe,body\n"
                                 "2021-01-03,ETH,Upgrade lands,\n");
    const auto result = load_news_csv(path, universe);
    CHECK(result.items.size() == 2);
    CHECK(result.skipped == 2);
    CHECK(result.items[0].body == "Body, with comma");
}

TEST_CASE("news csv round-trips bodies with commas and newlines") {
    std::vector<NewsItem> items = {
        {parse_date("2021-01-01"), AssetId("BTC"), "Title, tricky",
         "line one\nline two, with \"quotes\""}};
    const auto path = (temp_dir() / "news_rt.csv").string();
    save_news_csv(path, items);
    const auto loaded = load_news_csv(path, {});
    REQUIRE(loaded.items.size() == 1);
    CHECK(loaded.items[0].title == items[0].title);
    CHECK(loaded.items[0].body == items[0].body);
}

TEST_CASE("align_panel intersects calendars") {
    PriceSeries a{AssetId("BTC"),
                  {{parse_date("2021-01-01"), 1, 1, 1, 1, 0},
                   {parse_date("2021-01-02"), 1, 1, 1, 2, 0},
                   {parse_date("2021-01-03"), 1, 1, 1, 3, 0}}};
    PriceSeries b{AssetId("ETH"),
                  {{parse_date("2021-01-01"), 1, 1, 1, 10, 0},
                   {parse_date("2021-01-03"), 1, 1, 1, 30, 0}}};

    SUBCASE("identical calendars") {
        const auto panel = align_panel({a, a}, {});
        CHECK(panel.days() == 3);
    }
    SUBCASE("missing day excluded") {
        std::vector<DailySentiment> sentiment = {
            {AssetId("BTC"), parse_date("2021-01-02"), 0.5, 1},  // excluded day
            {AssetId("BTC"), parse_date("2021-01-03"), -0.25, 2}};
        const auto panel = align_panel({a, b}, sentiment);
        REQUIRE(panel.days() == 2);
        CHECK(panel.dates[0].to_string() == "2021-01-01");
        CHECK(panel.dates[1].to_string() == "2021-01-03");
        CHECK(panel.closes[0][1] == 3);
        CHECK(panel.closes[1][1] == 30);
        // sentiment dated on the excluded day is dropped from the panel
        CHECK_FALSE(panel.sentiment[0][0].has_value());
        CHECK(panel.sentiment[0][1] == -0.25);
    }
    SUBCASE("empty intersection") {
        PriceSeries c{AssetId("ADA"), {{parse_date("2022-06-01"), 1, 1, 1, 1, 0}}};
        CHECK_THROWS_AS(align_panel({a, c}, {}), DataError);
    }
}

TEST_CASE("panel save/load round-trips bit-exactly") {
    PriceSeries a{AssetId("BTC"),
                  {{parse_date("2021-01-01"), 1, 1, 1, 0.1, 0},
                   {parse_date("2021-01-02"), 1, 1, 1, 1.0 / 3.0, 0}}};
    PriceSeries b{AssetId("ETH"),
                  {{parse_date("2021-01-01"), 1, 1, 1, 44053.63, 0},
                   {parse_date("2021-01-02"), 1, 1, 1, 2e-7, 0}}};
    std::vector<DailySentiment> sentiment = {
        {AssetId("ETH"), parse_date("2021-01-02"), -0.123456789123456789, 3}};
    const auto panel = align_panel({a, b}, sentiment);

    const auto path = (temp_dir() / "panel_rt.csv").string();
    save_panel_csv(path, panel);
    const auto loaded = load_panel_csv(path);

    REQUIRE(loaded.days() == panel.days());
    REQUIRE(loaded.asset_count() == panel.asset_count());
    for (std::size_t i = 0; i < panel.asset_count(); ++i) {
        CHECK(loaded.assets[i] == panel.assets[i]);
        for (std::size_t d = 0; d < panel.days(); ++d) {
            CHECK(loaded.closes[i][d] == panel.closes[i][d]);  // bitwise
            CHECK(loaded.sentiment[i][d] == panel.sentiment[i][d]);
        }
    }
}

TEST_CASE("asset tickers normalize to upper case") {
    CHECK(AssetId("btc").ticker == "BTC");
    CHECK(AssetId("Eth").ticker == "ETH");
    CHECK_THROWS_AS(AssetId(""), DataError);
}

TEST_CASE("panel loader reports malformed rows as data errors") {
    const auto garbage = write_temp("panel_bad.csv",
                                    "date,asset,close,sentiment\n"
                                    "not-a-date,BTC,1.0,\n");
    CHECK_THROWS_AS(load_panel_csv(garbage), DataError);
    const auto ragged = write_temp("panel_ragged.csv",
                                   "date,asset,close,sentiment\n"
                                   "2021-01-01,BTC,1.0,\n"
                                   "2021-01-02,BTC,2.0,\n"
                                   "2021-01-01,ETH,3.0,\n");
    CHECK_THROWS_WITH_AS(load_panel_csv(ragged), doctest::Contains("rectangular"), DataError);
}

TEST_CASE("simple_returns definition and properties") {
    const auto single = simple_returns({100, 110});
    REQUIRE(single.size() == 1);
    CHECK(single[0] == doctest::Approx(0.10).epsilon(1e-14));
    CHECK(simple_returns({5, 5, 5}) == std::vector<double>{0.0, 0.0});

    const auto r = simple_returns({100, 110, 99});
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(0.10).epsilon(1e-12));
    CHECK(r[1] == doctest::Approx(-0.10).epsilon(1e-12));

    CHECK_THROWS_AS(simple_returns({100}), DataError);
    CHECK_THROWS_AS(simple_returns({100, -1}), DataError);

    // k points -> k-1 returns; scale invariance under c > 0
    std::vector<double> series = {3.5, 7.25, 6.0, 6.0, 9.125};
    const auto base = simple_returns(series);
    CHECK(base.size() == series.size() - 1);
    for (double c : {2.0, 0.5, 128.0}) {
        std::vector<double> scaled;
        for (double p : series) scaled.push_back(p * c);
        CHECK(simple_returns(scaled) == base);  // powers of two scale exactly
    }
}
