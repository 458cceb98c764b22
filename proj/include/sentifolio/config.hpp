#pragma once

#include <string>
#include <vector>

#include "sentifolio/backtest.hpp"
#include "sentifolio/dates.hpp"
#include "sentifolio/fetch.hpp"
#include "sentifolio/llm.hpp"
#include "sentifolio/market_data.hpp"

namespace sentifolio {

enum class DataSource { Csv, Api, Synthetic };

struct SyntheticConfig {
    int days = 420;
    int news_every_days = 3;  // per asset
};

struct DataConfig {
    DataSource source = DataSource::Csv;
    std::string candles_csv;
    std::string news_csv;
    std::string cache_dir = "cache";
    ApiConfig api;
    SyntheticConfig synthetic;
};

struct SentimentConfig {
    std::string lexicon_path = "data/vader_lexicon.txt";
    SentimentWindowMode window = SentimentWindowMode::TrainWindow;
};

struct VerifyConfig {
    std::string transport = "mock";  // "mock" | "live"
    std::string mock_fixture;        // JSON fixture for the mock transport
    LlmConfig llm;
    std::string prompt_asset = "data/prompt_template.txt";
};

/// One JSON file drives every command; flags override, environment variables
/// hold only secrets. Unknown keys are rejected so typos cannot silently
/// fall back to defaults. Relative paths resolve against the config file's
/// directory.
struct RunConfig {
    std::vector<AssetId> universe;  // default: BTC ETH ADA BNB XRP
    DateRange date_range{{2020, 2, 14}, {2025, 8, 6}};
    DataConfig data;
    int rsi_period = 14;
    int sma_period = 14;
    SentimentConfig sentiment;
    BoostScalars boosts;
    SolverConfig solver;
    int train_window = 180;
    int test_horizon = 1;
    EqualWeightMode equal_weight_mode = EqualWeightMode::Rebalanced;
    VerifyConfig verify;
    std::string output_dir = "out";
    std::uint64_t seed = 42;  // synthetic data generation only

    BacktestConfig backtest_config() const;
};

/// Parses and validates. Throws ConfigError on unreadable files, JSON syntax
/// errors, unknown keys or out-of-range values.
RunConfig load_config(const std::string& path);

/// Validated defaults (equivalent to loading "{}").
RunConfig default_config();

}  // namespace sentifolio
