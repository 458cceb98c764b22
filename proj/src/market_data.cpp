#include "sentifolio/market_data.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "sentifolio/csv.hpp"
#include "sentifolio/errors.hpp"

namespace sentifolio {

AssetId::AssetId(std::string t) : ticker(std::move(t)) {
    if (ticker.empty()) throw DataError("empty asset ticker");
    for (char& c : ticker) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
}

bool Candle::is_valid() const {
    return low > 0 && low <= open && low <= close && open <= high && close <= high &&
           volume >= 0;
}

std::optional<std::size_t> Panel::asset_index(const AssetId& a) const {
    for (std::size_t i = 0; i < assets.size(); ++i)
        if (assets[i] == a) return i;
    return std::nullopt;
}

namespace {

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(fmt::format("cannot open '{}'", path));
    return in;
}

void expect_header(const std::vector<std::string>& fields, const std::vector<std::string>& want,
                   const std::string& path) {
    if (fields != want)
        throw DataError(fmt::format("'{}': expected header '{}'", path, fmt::join(want, ",")));
}

}  // namespace

std::vector<PriceSeries> load_candles_csv(const std::string& path) {
    auto in = open_or_throw(path);
    CsvReader reader(in);
    std::vector<std::string> fields;
    std::size_t line = 0;

    if (!reader.next(fields, line)) throw DataError(fmt::format("'{}': empty file", path));
    expect_header(fields, {"date", "asset", "open", "high", "low", "close", "volume"}, path);

    std::map<AssetId, std::vector<Candle>> by_asset;
    std::set<std::pair<std::string, std::int64_t>> seen;
    while (reader.next(fields, line)) {
        if (fields.size() == 1 && fields[0].empty()) continue;  // trailing newline
        if (fields.size() != 7)
            throw DataError(fmt::format("'{}' line {}: expected 7 fields, got {}", path, line,
                                        fields.size()));
        Candle c;
        AssetId asset;
        try {
            c.date = parse_date(fields[0]);
            asset = AssetId(fields[1]);
            c.open = parse_double(fields[2]);
            c.high = parse_double(fields[3]);
            c.low = parse_double(fields[4]);
            c.close = parse_double(fields[5]);
            c.volume = parse_double(fields[6]);
        } catch (const std::exception& e) {
            throw DataError(fmt::format("'{}' line {}: {}", path, line, e.what()));
        }
        if (!c.is_valid())
            throw DataError(fmt::format(
                "'{}' line {}: invalid candle for {} on {} (prices must be positive, "
                "low <= open,close <= high, volume >= 0)",
                path, line, asset.ticker, c.date.to_string()));
        if (!seen.emplace(asset.ticker, c.date.serial()).second)
            throw DataError(fmt::format("'{}' line {}: duplicate ({}, {})", path, line,
                                        asset.ticker, c.date.to_string()));
        by_asset[asset].push_back(c);
    }

    std::vector<PriceSeries> out;
    for (auto& [asset, candles] : by_asset) {
        std::sort(candles.begin(), candles.end(),
                  [](const Candle& a, const Candle& b) { return a.date < b.date; });
        out.push_back(PriceSeries{asset, std::move(candles)});
    }
    return out;
}

void save_candles_csv(const std::string& path, const std::vector<PriceSeries>& series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(fmt::format("cannot write '{}'", path));
    out << "date,asset,open,high,low,close,volume\n";
    for (const auto& s : series)
        for (const auto& c : s.candles)
            out << fmt::format("{},{},{},{},{},{},{}\n", c.date.to_string(), s.asset.ticker,
                               format_double(c.open), format_double(c.high),
                               format_double(c.low), format_double(c.close),
                               format_double(c.volume));
}

NewsLoadResult load_news_csv(const std::string& path, const std::vector<AssetId>& universe) {
    auto in = open_or_throw(path);
    CsvReader reader(in);
    std::vector<std::string> fields;
    std::size_t line = 0;

    if (!reader.next(fields, line)) throw DataError(fmt::format("'{}': empty file", path));
    expect_header(fields, {"date", "asset", "title", "body"}, path);

    NewsLoadResult result;
    while (reader.next(fields, line)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != 4)
            throw DataError(fmt::format("'{}' line {}: expected 4 fields, got {}", path, line,
                                        fields.size()));
        NewsItem item;
        try {
            item.date = parse_date(fields[0]);
            item.asset = AssetId(fields[1]);
        } catch (const std::exception& e) {
            throw DataError(fmt::format("'{}' line {}: {}", path, line, e.what()));
        }
        item.title = fields[2];
        item.body = fields[3];
        if (item.title.empty()) {
            ++result.skipped;
            continue;
        }
        if (!universe.empty() &&
            std::find(universe.begin(), universe.end(), item.asset) == universe.end()) {
            ++result.skipped;
            continue;
        }
        result.items.push_back(std::move(item));
    }
    return result;
}

void save_news_csv(const std::string& path, const std::vector<NewsItem>& items) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(fmt::format("cannot write '{}'", path));
    out << "date,asset,title,body\n";
    for (const auto& n : items)
        out << fmt::format("{},{},{},{}\n", n.date.to_string(), n.asset.ticker,
                           csv_quote(n.title), csv_quote(n.body));
}

Panel align_panel(const std::vector<PriceSeries>& prices,
                  const std::vector<DailySentiment>& sentiment) {
    if (prices.empty()) throw DataError("align_panel: no price series");
    for (const auto& s : prices)
        if (s.candles.empty())
            throw DataError(fmt::format("align_panel: empty series for {}", s.asset.ticker));

    // Intersection of all assets' date sets; incomplete days are dropped
    // rather than filled so the panel never contains fabricated prices.
    std::set<std::int64_t> common;
    for (const auto& c : prices.front().candles) common.insert(c.date.serial());
    for (std::size_t i = 1; i < prices.size(); ++i) {
        std::set<std::int64_t> here;
        for (const auto& c : prices[i].candles) here.insert(c.date.serial());
        std::set<std::int64_t> kept;
        std::set_intersection(common.begin(), common.end(), here.begin(), here.end(),
                              std::inserter(kept, kept.begin()));
        common.swap(kept);
    }
    if (common.empty()) throw DataError("align_panel: assets share no common dates");

    Panel panel;
    for (auto serial : common) panel.dates.push_back(Date::from_serial(serial));
    for (const auto& s : prices) panel.assets.push_back(s.asset);

    panel.closes.assign(prices.size(), std::vector<double>(panel.dates.size(), 0.0));
    panel.sentiment.assign(prices.size(),
                           std::vector<std::optional<double>>(panel.dates.size()));

    std::map<std::int64_t, std::size_t> day_index;
    for (std::size_t d = 0; d < panel.dates.size(); ++d)
        day_index[panel.dates[d].serial()] = d;

    for (std::size_t a = 0; a < prices.size(); ++a)
        for (const auto& c : prices[a].candles)
            if (auto it = day_index.find(c.date.serial()); it != day_index.end())
                panel.closes[a][it->second] = c.close;

    for (const auto& s : sentiment) {
        auto a = panel.asset_index(s.asset);
        if (!a) continue;
        if (auto it = day_index.find(s.date.serial()); it != day_index.end())
            panel.sentiment[*a][it->second] = s.mean_compound;
    }
    return panel;
}

void save_panel_csv(const std::string& path, const Panel& panel) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(fmt::format("cannot write '{}'", path));
    out << "date,asset,close,sentiment\n";
    for (std::size_t d = 0; d < panel.days(); ++d)
        for (std::size_t a = 0; a < panel.asset_count(); ++a) {
            const auto& cell = panel.sentiment[a][d];
            out << fmt::format("{},{},{},{}\n", panel.dates[d].to_string(),
                               panel.assets[a].ticker, format_double(panel.closes[a][d]),
                               cell ? format_double(*cell) : std::string());
        }
}

Panel load_panel_csv(const std::string& path) {
    auto in = open_or_throw(path);
    CsvReader reader(in);
    std::vector<std::string> fields;
    std::size_t line = 0;

    if (!reader.next(fields, line)) throw DataError(fmt::format("'{}': empty file", path));
    expect_header(fields, {"date", "asset", "close", "sentiment"}, path);

    Panel panel;
    std::map<std::string, std::size_t> asset_idx;
    std::map<std::int64_t, std::size_t> day_idx;
    struct Cell {
        std::size_t a, d;
        double close;
        std::optional<double> sent;
    };
    std::vector<Cell> cells;

    while (reader.next(fields, line)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != 4)
            throw DataError(fmt::format("'{}' line {}: expected 4 fields", path, line));
        try {
            Date date = parse_date(fields[0]);
            AssetId asset(fields[1]);
            auto [ait, ains] = asset_idx.try_emplace(asset.ticker, asset_idx.size());
            if (ains) panel.assets.push_back(asset);
            auto [dit, dins] = day_idx.try_emplace(date.serial(), day_idx.size());
            if (dins) panel.dates.push_back(date);
            Cell cell{ait->second, dit->second, parse_double(fields[2]), std::nullopt};
            if (!fields[3].empty()) cell.sent = parse_double(fields[3]);
            cells.push_back(cell);
        } catch (const std::invalid_argument& e) {
            throw DataError(fmt::format("'{}' line {}: {}", path, line, e.what()));
        }
    }

    panel.closes.assign(panel.asset_count(), std::vector<double>(panel.days(), 0.0));
    panel.sentiment.assign(panel.asset_count(),
                           std::vector<std::optional<double>>(panel.days()));
    if (cells.size() != panel.asset_count() * panel.days())
        throw DataError(fmt::format("'{}': panel is not rectangular", path));
    for (const auto& c : cells) {
        panel.closes[c.a][c.d] = c.close;
        panel.sentiment[c.a][c.d] = c.sent;
    }
    if (!std::is_sorted(panel.dates.begin(), panel.dates.end()))
        throw DataError(fmt::format("'{}': panel dates out of order", path));
    return panel;
}

std::vector<double> simple_returns(const std::vector<double>& closes) {
    if (closes.size() < 2) throw DataError("simple_returns: need at least 2 prices");
    std::vector<double> out;
    out.reserve(closes.size() - 1);
    for (std::size_t i = 1; i < closes.size(); ++i) {
        if (closes[i - 1] <= 0 || closes[i] <= 0)
            throw DataError("simple_returns: prices must be positive");
        out.push_back(closes[i] / closes[i - 1] - 1.0);
    }
    return out;
}

}  // namespace sentifolio
