#include "sentifolio/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "sentifolio/csv.hpp"
#include "sentifolio/errors.hpp"
#include "sentifolio/indicators.hpp"
#include "sentifolio/svg_chart.hpp"
#include "sentifolio/vader.hpp"

namespace sentifolio {

using nlohmann::json;

namespace {

// SplitMix64: tiny, seedable, identical output everywhere.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform() {  // [0, 1)
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

MarketInputs generate_synthetic(const RunConfig& config) {
    Rng rng(config.seed);
    MarketInputs inputs;

    const char* positive_titles[] = {
        "{} rallies as adoption accelerates, investors celebrate strong gains",
        "Major fund praises {} upgrade, calls outlook excellent",
        "{} wins regulatory approval, traders welcome the good news",
    };
    const char* negative_titles[] = {
        "{} plunges after exchange hack, investors fear further losses",
        "Regulators threaten {} crackdown, markets react with panic",
        "{} network outage sparks anger and doubt among holders",
    };
    const char* neutral_titles[] = {
        "{} trades sideways as volumes hold steady",
        "Weekly roundup: {} market activity summarized",
        "{} developers publish routine maintenance schedule",
    };

    Date day0 = config.date_range.start;
    for (const auto& asset : config.universe) {
        PriceSeries series{asset, {}};
        double close = 50.0 + rng.uniform() * 1000.0;
        const double drift = (rng.uniform() - 0.45) * 0.004;
        for (int t = 0; t < config.data.synthetic.days; ++t) {
            const double shock = (rng.uniform() * 2.0 - 1.0) * 0.03;
            const double next_close = close * (1.0 + drift + shock);
            Candle c;
            c.date = Date::from_serial(day0.serial() + t);
            c.open = close;
            c.close = next_close;
            c.high = std::max(c.open, c.close) * (1.0 + rng.uniform() * 0.01);
            c.low = std::min(c.open, c.close) * (1.0 - rng.uniform() * 0.01);
            c.volume = 1e6 * (0.5 + rng.uniform());
            series.candles.push_back(c);
            close = next_close;

            if (t % config.data.synthetic.news_every_days == 0) {
                const double pick = rng.uniform();
                const char* tmpl = pick < 0.4
                                       ? positive_titles[rng.next() % 3]
                                       : pick < 0.8 ? negative_titles[rng.next() % 3]
                                                    : neutral_titles[rng.next() % 3];
                NewsItem item;
                item.date = c.date;
                item.asset = asset;
                item.title = fmt::format(fmt::runtime(tmpl), asset.ticker);
                item.body = fmt::format("Daily market note for {} covering session {}.",
                                        asset.ticker, c.date.to_string());
                inputs.news.push_back(std::move(item));
            }
        }
        inputs.prices.push_back(std::move(series));
    }
    return inputs;
}

std::vector<NewsItem> load_news_from_csv(const RunConfig& config) {
    auto result = load_news_csv(config.data.news_csv, config.universe);
    if (result.skipped > 0)
        std::cerr << fmt::format("warning: skipped {} news rows (empty title or asset "
                                 "outside the universe)\n",
                                 result.skipped);
    return std::move(result.items);
}

std::vector<PriceSeries> clip_to_range(std::vector<PriceSeries> series, const DateRange& range) {
    for (auto& s : series) {
        std::vector<Candle> kept;
        for (auto& c : s.candles)
            if (range.contains(c.date)) kept.push_back(c);
        s.candles = std::move(kept);
    }
    std::erase_if(series, [](const PriceSeries& s) { return s.candles.empty(); });
    return series;
}

MarketInputs resolve_from_source(const RunConfig& config) {
    MarketInputs inputs;
    switch (config.data.source) {
        case DataSource::Synthetic:
            inputs = generate_synthetic(config);
            break;
        case DataSource::Csv: {
            if (config.data.candles_csv.empty())
                throw ConfigError("data.source is csv but data.candles_csv is not set");
            inputs.prices = load_candles_csv(config.data.candles_csv);
            if (!config.data.news_csv.empty()) inputs.news = load_news_from_csv(config);
            break;
        }
        case DataSource::Api: {
            if (config.data.api.base_url.empty())
                throw ConfigError("data.source is api but data.api.base_url is not set");
            std::shared_ptr<HttpTransport> transport =
                config.data.api.mock_fixture.empty()
                    ? std::shared_ptr<HttpTransport>(make_live_transport())
                    : std::shared_ptr<HttpTransport>(
                          make_mock_transport_from_fixture(config.data.api.mock_fixture));
            RemoteFetcher fetcher(config.data.api, transport,
                                  config.data.cache_dir + "/http");
            for (const auto& asset : config.universe) {
                inputs.prices.push_back(fetcher.fetch_candles(asset, config.date_range));
                auto news = fetcher.fetch_news(asset, config.date_range);
                inputs.news.insert(inputs.news.end(), news.begin(), news.end());
            }
            break;
        }
    }

    inputs.prices = clip_to_range(std::move(inputs.prices), config.date_range);
    if (inputs.prices.empty()) throw DataError("no price data inside the configured date range");

    // keep only configured assets, in universe order
    std::vector<PriceSeries> ordered;
    for (const auto& asset : config.universe)
        for (auto& s : inputs.prices)
            if (s.asset == asset) ordered.push_back(std::move(s));
    inputs.prices = std::move(ordered);
    if (inputs.prices.empty())
        throw DataError("none of the configured universe assets appear in the price data");

    std::erase_if(inputs.news, [&](const NewsItem& n) {
        return !config.date_range.contains(n.date);
    });
    return inputs;
}

std::filesystem::path cache_candles_path(const RunConfig& c) {
    return std::filesystem::path(c.data.cache_dir) / "candles.csv";
}
std::filesystem::path cache_news_path(const RunConfig& c) {
    return std::filesystem::path(c.data.cache_dir) / "news.csv";
}

void ensure_output_dir(const RunConfig& config) {
    std::filesystem::create_directories(config.output_dir);
}

Panel build_panel(const RunConfig& config, const MarketInputs& inputs) {
    std::vector<std::pair<NewsItem, SentimentScores>> scored;
    if (!inputs.news.empty()) {
        const Lexicon lexicon = Lexicon::load(config.sentiment.lexicon_path);
        for (const auto& item : inputs.news)
            scored.emplace_back(item, score_news_item(item, lexicon));
    }
    return align_panel(inputs.prices, aggregate_daily(scored));
}

void write_metrics_json(const std::filesystem::path& path, const BacktestReport& report) {
    auto entry = [](const MetricSummary& m) {
        return json{{"cumulative_return", m.cumulative_return},
                    {"sharpe", m.sharpe},
                    {"max_drawdown", m.max_drawdown}};
    };
    const json j = {{"strategy", entry(report.strategy_metrics)},
                    {"btc", entry(report.btc_metrics)},
                    {"equal_weight", entry(report.equal_weight_metrics)}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
    out << j.dump(2) << "\n";
}

void write_backtest_csv(const std::filesystem::path& path, const BacktestReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
    out << "date,strategy_ret,btc_ret,ew_ret";
    for (const auto& asset : report.assets) out << ",w_" << asset.ticker;
    out << "\n";
    for (std::size_t i = 0; i < report.dates.size(); ++i) {
        out << fmt::format("{},{},{},{}", report.dates[i].to_string(),
                           format_double(report.strategy_returns[i]),
                           format_double(report.btc_returns[i]),
                           format_double(report.equal_weight_returns[i]));
        for (double w : report.weights[i]) out << ',' << format_double(w);
        out << "\n";
    }
}

std::vector<double> wealth_curve(const std::vector<double>& returns) {
    std::vector<double> wealth;
    wealth.reserve(returns.size());
    double w = 1.0;
    for (double r : returns) {
        w *= 1.0 + r;
        wealth.push_back(w);
    }
    return wealth;
}

}  // namespace

MarketInputs load_market_inputs(const RunConfig& config) {
    const auto candles = cache_candles_path(config);
    const auto news = cache_news_path(config);
    if (std::filesystem::exists(candles)) {
        MarketInputs inputs;
        auto loaded = load_candles_csv(candles.string());
        // canonical universe order, independent of how the cache sorts assets
        for (const auto& asset : config.universe)
            for (auto& s : loaded)
                if (s.asset == asset) inputs.prices.push_back(std::move(s));
        if (inputs.prices.empty())
            throw DataError(fmt::format("cache '{}' holds no universe assets",
                                        candles.string()));
        if (std::filesystem::exists(news))
            inputs.news = load_news_csv(news.string(), config.universe).items;
        return inputs;
    }
    auto inputs = resolve_from_source(config);
    std::filesystem::create_directories(config.data.cache_dir);
    save_candles_csv(candles.string(), inputs.prices);
    save_news_csv(news.string(), inputs.news);
    return inputs;
}

void cmd_ingest(const RunConfig& config) {
    auto inputs = load_market_inputs(config);
    std::size_t rows = 0;
    for (const auto& s : inputs.prices) rows += s.candles.size();
    std::cout << fmt::format("ingested {} assets, {} candle rows, {} news rows -> {}\n",
                             inputs.prices.size(), rows, inputs.news.size(),
                             config.data.cache_dir);
}

void cmd_indicators(const RunConfig& config) {
    const auto inputs = load_market_inputs(config);
    ensure_output_dir(config);
    const auto path = std::filesystem::path(config.output_dir) / "indicators.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
    out << "date,asset,rsi,sma\n";
    for (const auto& series : inputs.prices) {
        std::vector<double> closes;
        for (const auto& c : series.candles) closes.push_back(c.close);
        const auto rsi_series = rsi(closes, config.rsi_period);
        const auto sma_series = sma(closes, config.sma_period);
        for (std::size_t t = 0; t < closes.size(); ++t)
            out << fmt::format("{},{},{},{}\n", series.candles[t].date.to_string(),
                               series.asset.ticker,
                               rsi_series[t] ? format_double(*rsi_series[t]) : std::string(),
                               sma_series[t] ? format_double(*sma_series[t]) : std::string());
    }
    std::cout << fmt::format("wrote {}\n", path.string());
}

void cmd_sentiment(const RunConfig& config) {
    const auto inputs = load_market_inputs(config);
    ensure_output_dir(config);
    const Lexicon lexicon = Lexicon::load(config.sentiment.lexicon_path);

    std::vector<std::pair<NewsItem, SentimentScores>> scored;
    for (const auto& item : inputs.news)
        scored.emplace_back(item, score_news_item(item, lexicon));
    const auto daily = aggregate_daily(scored);

    const auto path = std::filesystem::path(config.output_dir) / "sentiment.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
    out << "date,asset,mean_compound,article_count\n";
    for (const auto& row : daily)
        out << fmt::format("{},{},{},{}\n", row.date.to_string(), row.asset.ticker,
                           format_double(row.mean_compound), row.article_count);
    std::cout << fmt::format("wrote {} ({} asset-days)\n", path.string(), daily.size());
}

void cmd_optimize(const RunConfig& config, const std::string& mu_csv,
                  const std::string& sigma_csv) {
    if (mu_csv.empty() || sigma_csv.empty())
        throw ConfigError("optimize: --mu and --sigma CSV paths are required");

    // mu: `asset,mu`, one row per asset
    Moments moments;
    std::vector<AssetId> assets;
    {
        std::ifstream in(mu_csv, std::ios::binary);
        if (!in) throw DataError(fmt::format("cannot open '{}'", mu_csv));
        CsvReader reader(in);
        std::vector<std::string> fields;
        std::size_t line = 0;
        if (!reader.next(fields, line) || fields != std::vector<std::string>{"asset", "mu"})
            throw DataError(fmt::format("'{}': expected header 'asset,mu'", mu_csv));
        while (reader.next(fields, line)) {
            if (fields.size() == 1 && fields[0].empty()) continue;
            if (fields.size() != 2)
                throw DataError(fmt::format("'{}' line {}: expected 2 fields", mu_csv, line));
            assets.push_back(AssetId(fields[0]));
            moments.mu.push_back(parse_double(fields[1]));
        }
    }
    // sigma: header `asset,<T1>,<T2>,...`, square matrix in the same order
    {
        std::ifstream in(sigma_csv, std::ios::binary);
        if (!in) throw DataError(fmt::format("cannot open '{}'", sigma_csv));
        CsvReader reader(in);
        std::vector<std::string> fields;
        std::size_t line = 0;
        if (!reader.next(fields, line) || fields.size() != assets.size() + 1)
            throw DataError(fmt::format("'{}': header must list the {} assets", sigma_csv,
                                        assets.size()));
        while (reader.next(fields, line)) {
            if (fields.size() == 1 && fields[0].empty()) continue;
            if (fields.size() != assets.size() + 1)
                throw DataError(fmt::format("'{}' line {}: expected {} fields", sigma_csv,
                                            line, assets.size() + 1));
            std::vector<double> row;
            for (std::size_t i = 1; i < fields.size(); ++i)
                row.push_back(parse_double(fields[i]));
            moments.sigma.push_back(std::move(row));
        }
        if (moments.sigma.size() != assets.size())
            throw DataError(fmt::format("'{}': expected {} matrix rows", sigma_csv,
                                        assets.size()));
    }

    const auto weights = solve(moments, config.solver);
    ensure_output_dir(config);
    const auto path = std::filesystem::path(config.output_dir) / "weights.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
    out << "asset,weight\n";
    for (std::size_t i = 0; i < assets.size(); ++i)
        out << fmt::format("{},{}\n", assets[i].ticker, format_double(weights.values[i]));
    std::cout << fmt::format("wrote {} (KKT residual {:.3e})\n", path.string(),
                             kkt_residual(moments, config.solver, weights));
}

void cmd_backtest(const RunConfig& config) {
    const auto inputs = load_market_inputs(config);
    const Panel panel = build_panel(config, inputs);
    const BacktestReport report = run(panel, config.backtest_config());

    ensure_output_dir(config);
    const std::filesystem::path out_dir(config.output_dir);
    write_metrics_json(out_dir / "metrics.json", report);
    write_backtest_csv(out_dir / "backtest.csv", report);
    write_line_chart((out_dir / "wealth.svg").string(), "Proposed Strategy VS. Benchmark",
                     report.dates,
                     {{"Strategy", "#1f77b4", wealth_curve(report.strategy_returns)},
                      {"BTC buy-and-hold", "#ff7f0e", wealth_curve(report.btc_returns)},
                      {"Equal weight", "#2ca02c", wealth_curve(report.equal_weight_returns)}});
    std::cout << fmt::format(
        "backtest over {} days: strategy cumulative {:.4f} (multiple), sharpe {:.4f}, "
        "max drawdown {:.4f}\nwrote {}, {}, {}\n",
        report.dates.size(), report.strategy_metrics.cumulative_return,
        report.strategy_metrics.sharpe, report.strategy_metrics.max_drawdown,
        (out_dir / "metrics.json").string(), (out_dir / "backtest.csv").string(),
        (out_dir / "wealth.svg").string());
}

void cmd_verify(const RunConfig& config) {
    const auto inputs = load_market_inputs(config);
    ensure_output_dir(config);
    const auto out_path = std::filesystem::path(config.output_dir) / "verification.jsonl";

    if (inputs.news.empty()) {
        std::ofstream out(out_path, std::ios::binary);  // contract: empty file, exit 0
        std::cout << fmt::format("no news in cache; wrote empty {}\n", out_path.string());
        return;
    }

    const Lexicon lexicon = Lexicon::load(config.sentiment.lexicon_path);
    std::vector<std::pair<NewsItem, double>> items;
    for (const auto& item : inputs.news)
        items.emplace_back(item, score_news_item(item, lexicon).compound);

    std::unique_ptr<ChatTransport> transport;
    std::unique_ptr<MockChatTransport> mock_owner;
    if (config.verify.transport == "live") {
        transport = make_live_chat_transport(config.verify.llm);
    } else {
        std::vector<ChatResult> script;
        if (!config.verify.mock_fixture.empty()) {
            std::ifstream in(config.verify.mock_fixture, std::ios::binary);
            if (!in)
                throw ConfigError(fmt::format("cannot open mock fixture '{}'",
                                              config.verify.mock_fixture));
            json fixture = json::parse(in, nullptr, false);
            if (fixture.is_discarded() || !fixture.contains("responses"))
                throw ConfigError(fmt::format("mock fixture '{}': expected "
                                              "{{\"responses\": [...]}}",
                                              config.verify.mock_fixture));
            for (const auto& entry : fixture["responses"]) {
                if (entry.is_string()) script.push_back({true, entry.get<std::string>(), ""});
                else if (entry.is_object() && entry.contains("error"))
                    script.push_back({false, "", entry["error"].get<std::string>()});
                else
                    throw ConfigError("mock fixture entries must be strings or "
                                      "{\"error\": ...} objects");
            }
        }
        if (script.empty())
            script.push_back(
                {true,
                 "1. Do I agree? Partially, the score looks plausible.\n"
                 "2. Interpretation: routine market coverage.\n"
                 "3. Actionable advice: hold the current position.",
                 ""});
        mock_owner = std::make_unique<MockChatTransport>(std::move(script));
        transport = std::move(mock_owner);
    }

    LlmConfig policy = config.verify.llm;
    if (config.verify.transport == "mock") policy.rate_limit_ms = 0;
    const auto records = verify_batch(items, *transport, policy, out_path.string());

    std::size_t parsed = 0;
    for (const auto& r : records)
        if (r.error.empty()) ++parsed;
    std::cout << fmt::format("wrote {} ({} records, {} completed, {} failed)\n",
                             out_path.string(), records.size(), parsed,
                             records.size() - parsed);
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"sentiment-enhanced mean-variance crypto portfolio pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::string ew_mode;
    std::string mu_csv, sigma_csv;

    app.add_option("--config", config_path, "JSON config file")->required();
    app.add_option("--out", out_override, "override output directory");
    app.add_option("--equal-weight-mode", ew_mode,
                   "override equal-weight benchmark mode (rebalanced|buyhold)");

    auto* ingest = app.add_subcommand("ingest", "load/fetch data into the cache");
    auto* indicators = app.add_subcommand("indicators", "emit date,asset,rsi,sma CSV");
    auto* sentiment_cmd =
        app.add_subcommand("sentiment", "emit date,asset,mean_compound,article_count CSV");
    auto* optimize = app.add_subcommand("optimize", "solve weights from a mu/sigma CSV pair");
    optimize->add_option("--mu", mu_csv, "CSV `asset,mu`")->required();
    optimize->add_option("--sigma", sigma_csv, "CSV covariance matrix")->required();
    auto* backtest_cmd =
        app.add_subcommand("backtest", "rolling-window walk-forward backtest with benchmarks");
    auto* verify = app.add_subcommand("verify", "LLM verification of sentiment scores");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        RunConfig config = load_config(config_path);
        if (!out_override.empty()) config.output_dir = out_override;
        if (!ew_mode.empty()) {
            if (ew_mode == "rebalanced") config.equal_weight_mode = EqualWeightMode::Rebalanced;
            else if (ew_mode == "buyhold") config.equal_weight_mode = EqualWeightMode::BuyHold;
            else throw ConfigError(fmt::format("--equal-weight-mode '{}' "
                                               "(want rebalanced|buyhold)", ew_mode));
        }

        if (ingest->parsed()) cmd_ingest(config);
        else if (indicators->parsed()) cmd_indicators(config);
        else if (sentiment_cmd->parsed()) cmd_sentiment(config);
        else if (optimize->parsed()) cmd_optimize(config, mu_csv, sigma_csv);
        else if (backtest_cmd->parsed()) cmd_backtest(config);
        else if (verify->parsed()) cmd_verify(config);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const EngineError& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace sentifolio
