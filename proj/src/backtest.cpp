#include "sentifolio/backtest.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

#include "sentifolio/errors.hpp"
#include "sentifolio/indicators.hpp"

namespace sentifolio {

namespace {

void check_config(const BacktestConfig& config) {
    if (config.train_window < 3)
        throw ConfigError("backtest: train_window must be >= 3");
    if (config.test_horizon < 1)
        throw ConfigError("backtest: test_horizon must be >= 1");
    if (config.rsi_period < 1 || config.sma_period < 1)
        throw ConfigError("backtest: indicator periods must be >= 1");
}

MetricSummary summarize_allowing_degenerate(const std::vector<double>& returns) {
    MetricSummary out;
    out.cumulative_return = cumulative_return(returns);
    out.max_drawdown = max_drawdown(returns);
    try {
        out.sharpe = sharpe(returns);
    } catch (const DataError&) {
        out.sharpe = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

}  // namespace

DayDecision decide_day(const Panel& panel, std::size_t day, const BacktestConfig& config) {
    check_config(config);
    const std::size_t window = static_cast<std::size_t>(config.train_window);
    if (day < window || day >= panel.days())
        throw ConfigError(fmt::format("decide_day: day {} outside usable range", day));
    const std::size_t n = panel.asset_count();

    // trailing-window return matrix, rows are days (window - 1 of them)
    std::vector<std::vector<double>> window_returns(window - 1, std::vector<double>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t r = 0; r + 1 < window; ++r) {
            const std::size_t d = day - window + r;
            window_returns[r][a] = panel.closes[a][d + 1] / panel.closes[a][d] - 1.0;
        }

    DayDecision decision;
    decision.moments = estimate_moments(window_returns);

    decision.boosts.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        // indicators over the full history strictly before `day`
        const std::vector<double> history(panel.closes[a].begin(),
                                          panel.closes[a].begin() + day);
        const auto rsi_series = rsi(history, config.rsi_period);
        const auto sma_series = sma(history, config.sma_period);

        std::optional<double> sentiment_signal;
        if (config.sentiment_window == SentimentWindowMode::LastDay) {
            sentiment_signal = panel.sentiment[a][day - 1];
        } else {
            double sum = 0;
            int count = 0;
            for (std::size_t d = day - window; d < day; ++d)
                if (panel.sentiment[a][d]) {
                    sum += *panel.sentiment[a][d];
                    ++count;
                }
            if (count > 0) sentiment_signal = sum / count;
        }

        BoostSet& b = decision.boosts[a];
        b.rsi_boost = rsi_boost(rsi_series.back(), config.boosts.rsi_scale);
        b.sma_boost = sma_boost(history.back(), sma_series.back(), config.boosts.sma_step);
        b.sentiment_boost = sentiment_boost(sentiment_signal, config.boosts.sentiment_scale);
    }

    decision.adjusted_mu = adjust_mu(decision.moments.mu, decision.boosts);

    Moments adjusted = decision.moments;
    adjusted.mu = decision.adjusted_mu;
    try {
        decision.weights = solve(adjusted, config.solver);
    } catch (const std::exception& e) {
        throw EngineError(fmt::format("solver failed on {} (day index {}): {}",
                                      panel.dates[day].to_string(), day, e.what()));
    }
    return decision;
}

BacktestReport run(const Panel& panel, const BacktestConfig& config) {
    check_config(config);
    const std::size_t window = static_cast<std::size_t>(config.train_window);
    if (panel.days() < window + 1)
        throw DataError(fmt::format("backtest: panel has {} days, need at least {}",
                                    panel.days(), window + 1));

    BacktestReport report;
    report.assets = panel.assets;

    std::vector<double> held_weights;
    std::size_t next_decision_day = window;
    for (std::size_t t = window; t < panel.days(); ++t) {
        if (t == next_decision_day) {
            held_weights = decide_day(panel, t, config).weights.values;
            next_decision_day = t + static_cast<std::size_t>(config.test_horizon);
        }
        double day_return = 0;
        for (std::size_t a = 0; a < panel.asset_count(); ++a)
            day_return +=
                held_weights[a] * (panel.closes[a][t] / panel.closes[a][t - 1] - 1.0);

        report.dates.push_back(panel.dates[t]);
        report.weights.push_back(held_weights);
        report.strategy_returns.push_back(day_return);
    }

    report.btc_returns = benchmark_btc(panel, window);
    report.equal_weight_returns =
        benchmark_equal_weight(panel, window, config.equal_weight_mode);

    report.strategy_metrics = summarize_allowing_degenerate(report.strategy_returns);
    report.btc_metrics = summarize_allowing_degenerate(report.btc_returns);
    report.equal_weight_metrics = summarize_allowing_degenerate(report.equal_weight_returns);
    return report;
}

std::vector<double> benchmark_btc(const Panel& panel, std::size_t first_test_day) {
    const auto btc = panel.asset_index(AssetId("BTC"));
    if (!btc) throw DataError("benchmark_btc: BTC not in panel");
    std::vector<double> out;
    for (std::size_t t = first_test_day; t < panel.days(); ++t)
        out.push_back(panel.closes[*btc][t] / panel.closes[*btc][t - 1] - 1.0);
    return out;
}

std::vector<double> benchmark_equal_weight(const Panel& panel, std::size_t first_test_day,
                                           EqualWeightMode mode) {
    const std::size_t n = panel.asset_count();
    if (n == 0) throw DataError("benchmark_equal_weight: empty panel");
    std::vector<double> out;
    if (mode == EqualWeightMode::Rebalanced) {
        for (std::size_t t = first_test_day; t < panel.days(); ++t) {
            double mean = 0;
            for (std::size_t a = 0; a < n; ++a)
                mean += panel.closes[a][t] / panel.closes[a][t - 1] - 1.0;
            out.push_back(mean / static_cast<double>(n));
        }
    } else {
        // 1/N bought at the close before the first test day, then held
        double prev_wealth = 1.0;
        for (std::size_t t = first_test_day; t < panel.days(); ++t) {
            double wealth = 0;
            for (std::size_t a = 0; a < n; ++a)
                wealth += panel.closes[a][t] / panel.closes[a][first_test_day - 1];
            wealth /= static_cast<double>(n);
            out.push_back(wealth / prev_wealth - 1.0);
            prev_wealth = wealth;
        }
    }
    return out;
}

}  // namespace sentifolio
