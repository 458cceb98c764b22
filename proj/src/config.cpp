#include "sentifolio/config.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>

#include "sentifolio/errors.hpp"

namespace sentifolio {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items())
        if (!known.count(key))
            throw ConfigError(fmt::format("config: unknown key '{}' in {}", key, where));
}

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(fmt::format("config: bad value for '{}'", key));
    }
}

std::string resolve_path(const std::filesystem::path& base, const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    return p.is_absolute() ? p.string() : (base / p).lexically_normal().string();
}

}  // namespace

BacktestConfig RunConfig::backtest_config() const {
    BacktestConfig bc;
    bc.train_window = train_window;
    bc.test_horizon = test_horizon;
    bc.rsi_period = rsi_period;
    bc.sma_period = sma_period;
    bc.solver = solver;
    bc.boosts = boosts;
    bc.sentiment_window = sentiment.window;
    bc.equal_weight_mode = equal_weight_mode;
    return bc;
}

RunConfig default_config() {
    RunConfig config;
    for (const char* t : {"BTC", "ETH", "ADA", "BNB", "XRP"})
        config.universe.push_back(AssetId(t));
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path));
    json root = json::parse(in, nullptr, false);
    if (root.is_discarded())
        throw ConfigError(fmt::format("config '{}' is not valid JSON", path));
    if (!root.is_object()) throw ConfigError(fmt::format("config '{}': expected an object", path));

    const auto base = std::filesystem::absolute(path).parent_path();
    RunConfig config = default_config();

    reject_unknown_keys(root,
                        {"universe", "date_range", "data", "indicators", "sentiment",
                         "boosts", "solver", "backtest", "verify", "output_dir", "seed"},
                        "top level");

    if (root.contains("universe")) {
        std::vector<std::string> tickers;
        read_field(root, "universe", tickers);
        if (tickers.empty()) throw ConfigError("config: universe must not be empty");
        config.universe.clear();
        for (const auto& t : tickers) config.universe.push_back(AssetId(t));
    }

    if (root.contains("date_range")) {
        const json& r = root.at("date_range");
        reject_unknown_keys(r, {"start", "end"}, "date_range");
        std::string start, end;
        read_field(r, "start", start);
        read_field(r, "end", end);
        if (!start.empty()) config.date_range.start = parse_date(start);
        if (!end.empty()) config.date_range.end = parse_date(end);
        if (config.date_range.end < config.date_range.start)
            throw ConfigError("config: date_range.end precedes date_range.start");
    }

    if (root.contains("data")) {
        const json& d = root.at("data");
        reject_unknown_keys(d, {"source", "candles_csv", "news_csv", "cache_dir", "api",
                                "synthetic"},
                            "data");
        std::string source = "csv";
        read_field(d, "source", source);
        if (source == "csv") config.data.source = DataSource::Csv;
        else if (source == "api") config.data.source = DataSource::Api;
        else if (source == "synthetic") config.data.source = DataSource::Synthetic;
        else throw ConfigError(fmt::format("config: data.source '{}' (want csv|api|synthetic)",
                                           source));
        read_field(d, "candles_csv", config.data.candles_csv);
        read_field(d, "news_csv", config.data.news_csv);
        read_field(d, "cache_dir", config.data.cache_dir);
        if (d.contains("api")) {
            const json& a = d.at("api");
            reject_unknown_keys(a, {"base_url", "api_key_header", "api_key_env",
                                    "rate_limit_ms", "max_retries", "mock_fixture"},
                                "data.api");
            read_field(a, "base_url", config.data.api.base_url);
            read_field(a, "api_key_header", config.data.api.api_key_header);
            read_field(a, "api_key_env", config.data.api.api_key_env);
            read_field(a, "rate_limit_ms", config.data.api.rate_limit_ms);
            read_field(a, "max_retries", config.data.api.max_retries);
            read_field(a, "mock_fixture", config.data.api.mock_fixture);
            if (config.data.api.max_retries < 0)
                throw ConfigError("config: data.api.max_retries must be >= 0");
            config.data.api.mock_fixture = resolve_path(base, config.data.api.mock_fixture);
        }
        if (d.contains("synthetic")) {
            const json& s = d.at("synthetic");
            reject_unknown_keys(s, {"days", "news_every_days"}, "data.synthetic");
            read_field(s, "days", config.data.synthetic.days);
            read_field(s, "news_every_days", config.data.synthetic.news_every_days);
            if (config.data.synthetic.days < 2)
                throw ConfigError("config: data.synthetic.days must be >= 2");
            if (config.data.synthetic.news_every_days < 1)
                throw ConfigError("config: data.synthetic.news_every_days must be >= 1");
        }
        config.data.candles_csv = resolve_path(base, config.data.candles_csv);
        config.data.news_csv = resolve_path(base, config.data.news_csv);
        config.data.cache_dir = resolve_path(base, config.data.cache_dir);
    } else {
        config.data.cache_dir = resolve_path(base, config.data.cache_dir);
    }

    if (root.contains("indicators")) {
        const json& i = root.at("indicators");
        reject_unknown_keys(i, {"rsi_period", "sma_period"}, "indicators");
        read_field(i, "rsi_period", config.rsi_period);
        read_field(i, "sma_period", config.sma_period);
        if (config.rsi_period < 1 || config.sma_period < 1)
            throw ConfigError("config: indicator periods must be >= 1");
    }

    if (root.contains("sentiment")) {
        const json& s = root.at("sentiment");
        reject_unknown_keys(s, {"lexicon_path", "window"}, "sentiment");
        read_field(s, "lexicon_path", config.sentiment.lexicon_path);
        std::string window = "train_window";
        read_field(s, "window", window);
        if (window == "train_window") config.sentiment.window = SentimentWindowMode::TrainWindow;
        else if (window == "last_day") config.sentiment.window = SentimentWindowMode::LastDay;
        else throw ConfigError(fmt::format(
                 "config: sentiment.window '{}' (want train_window|last_day)", window));
    }
    config.sentiment.lexicon_path = resolve_path(base, config.sentiment.lexicon_path);

    if (root.contains("boosts")) {
        const json& b = root.at("boosts");
        reject_unknown_keys(b, {"rsi_scale", "sma_step", "sentiment_scale"}, "boosts");
        read_field(b, "rsi_scale", config.boosts.rsi_scale);
        read_field(b, "sma_step", config.boosts.sma_step);
        read_field(b, "sentiment_scale", config.boosts.sentiment_scale);
    }

    if (root.contains("solver")) {
        const json& s = root.at("solver");
        reject_unknown_keys(s, {"lambda", "max_weight", "tolerance", "max_iterations"},
                            "solver");
        read_field(s, "lambda", config.solver.lambda);
        read_field(s, "max_weight", config.solver.max_weight);
        read_field(s, "tolerance", config.solver.tolerance);
        read_field(s, "max_iterations", config.solver.max_iterations);
        if (config.solver.lambda <= 0) throw ConfigError("config: solver.lambda must be > 0");
        if (config.solver.max_weight <= 0 || config.solver.max_weight > 1)
            throw ConfigError("config: solver.max_weight must lie in (0, 1]");
        if (static_cast<double>(config.universe.size()) * config.solver.max_weight <
            1.0 - 1e-12)
            throw ConfigError("config: solver.max_weight too small for the universe size");
        if (config.solver.tolerance <= 0)
            throw ConfigError("config: solver.tolerance must be > 0");
        if (config.solver.max_iterations < 1)
            throw ConfigError("config: solver.max_iterations must be >= 1");
    }

    if (root.contains("backtest")) {
        const json& b = root.at("backtest");
        reject_unknown_keys(b, {"train_window", "test_horizon", "equal_weight_mode"},
                            "backtest");
        read_field(b, "train_window", config.train_window);
        read_field(b, "test_horizon", config.test_horizon);
        std::string mode = "rebalanced";
        read_field(b, "equal_weight_mode", mode);
        if (mode == "rebalanced") config.equal_weight_mode = EqualWeightMode::Rebalanced;
        else if (mode == "buyhold") config.equal_weight_mode = EqualWeightMode::BuyHold;
        else throw ConfigError(fmt::format(
                 "config: backtest.equal_weight_mode '{}' (want rebalanced|buyhold)", mode));
        if (config.train_window < 3)
            throw ConfigError("config: backtest.train_window must be >= 3");
        if (config.test_horizon < 1)
            throw ConfigError("config: backtest.test_horizon must be >= 1");
    }

    if (root.contains("verify")) {
        const json& v = root.at("verify");
        reject_unknown_keys(v, {"transport", "mock_fixture", "model", "endpoint",
                                "api_key_env", "rate_limit_ms", "max_retries",
                                "prompt_asset"},
                            "verify");
        read_field(v, "transport", config.verify.transport);
        if (config.verify.transport != "mock" && config.verify.transport != "live")
            throw ConfigError(fmt::format("config: verify.transport '{}' (want mock|live)",
                                          config.verify.transport));
        read_field(v, "mock_fixture", config.verify.mock_fixture);
        read_field(v, "model", config.verify.llm.model);
        read_field(v, "endpoint", config.verify.llm.endpoint);
        read_field(v, "api_key_env", config.verify.llm.api_key_env);
        read_field(v, "rate_limit_ms", config.verify.llm.rate_limit_ms);
        read_field(v, "max_retries", config.verify.llm.max_retries);
        read_field(v, "prompt_asset", config.verify.prompt_asset);
        if (config.verify.llm.max_retries < 0)
            throw ConfigError("config: verify.max_retries must be >= 0");
    }
    config.verify.mock_fixture = resolve_path(base, config.verify.mock_fixture);
    config.verify.prompt_asset = resolve_path(base, config.verify.prompt_asset);

    read_field(root, "output_dir", config.output_dir);
    config.output_dir = resolve_path(base, config.output_dir);
    read_field(root, "seed", config.seed);
    return config;
}

}  // namespace sentifolio
