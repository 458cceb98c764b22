#pragma once

#include <cstddef>
#include <vector>

#include "sentifolio/market_data.hpp"
#include "sentifolio/metrics.hpp"
#include "sentifolio/mvo.hpp"
#include "sentifolio/signal_fusion.hpp"

namespace sentifolio {

enum class SentimentWindowMode {
    TrainWindow,  // mean of the daily sentiment values inside the training window
    LastDay,      // most recent day's value only
};

enum class EqualWeightMode { Rebalanced, BuyHold };

struct BacktestConfig {
    int train_window = 180;  // >= 3 (moment estimation needs 2 return rows)
    int test_horizon = 1;
    int rsi_period = 14;
    int sma_period = 14;
    SolverConfig solver;
    BoostScalars boosts;
    SentimentWindowMode sentiment_window = SentimentWindowMode::TrainWindow;
    EqualWeightMode equal_weight_mode = EqualWeightMode::Rebalanced;
};

struct BacktestReport {
    std::vector<AssetId> assets;
    std::vector<Date> dates;                   // out-of-sample days
    std::vector<double> strategy_returns;
    std::vector<double> btc_returns;
    std::vector<double> equal_weight_returns;
    std::vector<std::vector<double>> weights;  // [day][asset], feasible rows

    // sharpe is NaN for a degenerate (zero-variance) series
    MetricSummary strategy_metrics;
    MetricSummary btc_metrics;
    MetricSummary equal_weight_metrics;
};

/// Decision inputs for out-of-sample day t, all derived from panel data
/// strictly before t: moments over the trailing window, last defined
/// indicator readings, and the sentiment signal per the window mode.
struct DayDecision {
    Moments moments;
    std::vector<BoostSet> boosts;
    std::vector<double> adjusted_mu;
    PortfolioWeights weights;
};

/// Computes the day-t decision. Exposed so tests can verify the
/// no-lookahead property directly.
DayDecision decide_day(const Panel& panel, std::size_t day, const BacktestConfig& config);

/// Walk-forward simulation: for each out-of-sample day, fit moments on the
/// trailing `train_window` days, apply the three boosts from data strictly
/// before the day, solve for weights, and realize the close-to-close return.
/// No transaction costs or slippage. Throws DataError when the panel is
/// shorter than train_window + 1, EngineError (naming the date) when the
/// solver fails on a day.
BacktestReport run(const Panel& panel, const BacktestConfig& config);

/// BTC buy-and-hold daily returns over the out-of-sample range starting at
/// `first_test_day`. Throws DataError when BTC is not in the panel.
std::vector<double> benchmark_btc(const Panel& panel, std::size_t first_test_day);

/// Equal-weight benchmark over the same range; either rebalanced daily
/// (return = cross-asset mean) or buy-and-hold from an initial 1/N split.
std::vector<double> benchmark_equal_weight(const Panel& panel, std::size_t first_test_day,
                                           EqualWeightMode mode);

}  // namespace sentifolio
