#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sentifolio/dates.hpp"

namespace sentifolio {

/// Ticker symbol, normalized to upper case ("BTC").
struct AssetId {
    std::string ticker;

    AssetId() = default;
    explicit AssetId(std::string t);

    auto operator<=>(const AssetId&) const = default;
};

/// One asset-day of OHLCV data. Prices in quote currency (USD).
struct Candle {
    Date date;
    double open = 0;
    double high = 0;
    double low = 0;
    double close = 0;
    double volume = 0;

    /// low <= open,close <= high; prices > 0; volume >= 0.
    bool is_valid() const;
};

struct PriceSeries {
    AssetId asset;
    std::vector<Candle> candles;  // strictly increasing dates
};

struct NewsItem {
    Date date;
    AssetId asset;
    std::string title;  // non-empty
    std::string body;
};

/// Daily sentiment signal for one (asset, date) cell.
struct DailySentiment {
    AssetId asset;
    Date date;
    double mean_compound = 0;  // in [-1, 1]
    int article_count = 0;
};

/// Rectangular per-asset panel over a shared ascending calendar. Sentiment
/// cells are optional; an absent cell means "no articles that day" and is
/// treated as a neutral (zero-boost) signal downstream.
struct Panel {
    std::vector<Date> dates;
    std::vector<AssetId> assets;
    std::vector<std::vector<double>> closes;                    // [asset][day]
    std::vector<std::vector<std::optional<double>>> sentiment;  // [asset][day]

    std::size_t days() const { return dates.size(); }
    std::size_t asset_count() const { return assets.size(); }
    std::optional<std::size_t> asset_index(const AssetId& a) const;
};

/// Loads `date,asset,open,high,low,close,volume`. One sorted, validated
/// series per asset. Throws DataError naming the offending line on malformed
/// rows, duplicate (asset,date) pairs or candle-invariant violations.
std::vector<PriceSeries> load_candles_csv(const std::string& path);

void save_candles_csv(const std::string& path, const std::vector<PriceSeries>& series);

struct NewsLoadResult {
    std::vector<NewsItem> items;
    std::size_t skipped = 0;  // rows dropped by validation (empty title, unknown asset)
};

/// Loads `date,asset,title,body` (RFC-4180 quoting). Rows with an empty title
/// or an asset outside `universe` are skipped and counted, not fatal.
/// An empty universe accepts every ticker.
NewsLoadResult load_news_csv(const std::string& path, const std::vector<AssetId>& universe);

void save_news_csv(const std::string& path, const std::vector<NewsItem>& items);

/// Joins price series and daily sentiment on the intersection of all assets'
/// dates. Throws DataError when the intersection is empty.
Panel align_panel(const std::vector<PriceSeries>& prices,
                  const std::vector<DailySentiment>& sentiment);

/// Long-format panel serialization (`date,asset,close,sentiment`); sentiment
/// field empty for absent cells. load(save(panel)) is bit-exact.
void save_panel_csv(const std::string& path, const Panel& panel);
Panel load_panel_csv(const std::string& path);

/// r_t = p_t / p_{t-1} - 1. Output has input.size() - 1 entries.
/// Throws DataError on fewer than 2 points or non-positive prices.
std::vector<double> simple_returns(const std::vector<double>& closes);

}  // namespace sentifolio
