#pragma once

#include <vector>

namespace sentifolio {

struct MetricSummary {
    double cumulative_return = 0;  // wealth multiple minus one
    double sharpe = 0;             // annualized, no risk-free deduction
    double max_drawdown = 0;       // in [-1, 0]
};

/// prod(1 + r_t) - 1. Throws DataError when any return <= -1.
double cumulative_return(const std::vector<double>& returns);

/// (mean / sample std) * sqrt(periods_per_year), risk-free rate fixed at 0,
/// sample standard deviation with divisor n-1. Throws DataError on fewer
/// than 2 observations or zero variance.
double sharpe(const std::vector<double>& returns, int periods_per_year = 252);

/// Largest peak-to-trough decline of the wealth curve W_t = prod(1 + r_s),
/// with W_0 = 1 included so a first-day loss registers. Result <= 0.
double max_drawdown(const std::vector<double>& returns);

MetricSummary summarize(const std::vector<double>& returns, int periods_per_year = 252);

}  // namespace sentifolio
