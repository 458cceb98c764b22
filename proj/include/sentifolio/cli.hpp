#pragma once

#include <string>
#include <vector>

#include "sentifolio/config.hpp"

namespace sentifolio {

/// Normalized market inputs every command consumes. Built from the cache
/// when present, otherwise resolved from the configured source and cached.
struct MarketInputs {
    std::vector<PriceSeries> prices;
    std::vector<NewsItem> news;
};

MarketInputs load_market_inputs(const RunConfig& config);

// Subcommand bodies. Each throws ConfigError / DataError / EngineError on
// failure; `run_cli` maps those to exit codes 1 / 2 / 3.
void cmd_ingest(const RunConfig& config);
void cmd_indicators(const RunConfig& config);
void cmd_sentiment(const RunConfig& config);
void cmd_optimize(const RunConfig& config, const std::string& mu_csv,
                  const std::string& sigma_csv);
void cmd_backtest(const RunConfig& config);
void cmd_verify(const RunConfig& config);

/// Entry point behind main(). Exit codes: 0 success, 1 usage or config
/// error, 2 data error, 3 runtime/solver error.
int run_cli(int argc, const char* const* argv);

}  // namespace sentifolio
