#include "sentifolio/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "sentifolio/errors.hpp"

namespace sentifolio {

namespace {

void check_returns(const std::vector<double>& returns) {
    for (double r : returns)
        if (!(r > -1.0))
            throw DataError(fmt::format("return {} <= -1 (wealth would go non-positive)", r));
}

}  // namespace

double cumulative_return(const std::vector<double>& returns) {
    check_returns(returns);
    double wealth = 1.0;
    for (double r : returns) wealth *= 1.0 + r;
    return wealth - 1.0;
}

double sharpe(const std::vector<double>& returns, int periods_per_year) {
    if (returns.size() < 2) throw DataError("sharpe: need at least 2 returns");
    double mean = 0;
    for (double r : returns) mean += r;
    mean /= static_cast<double>(returns.size());

    double ss = 0;
    for (double r : returns) ss += (r - mean) * (r - mean);
    const double variance = ss / static_cast<double>(returns.size() - 1);
    if (variance == 0.0) throw DataError("sharpe: zero return variance");

    return mean / std::sqrt(variance) * std::sqrt(static_cast<double>(periods_per_year));
}

double max_drawdown(const std::vector<double>& returns) {
    check_returns(returns);
    double wealth = 1.0;
    double peak = 1.0;
    double worst = 0.0;
    for (double r : returns) {
        wealth *= 1.0 + r;
        peak = std::max(peak, wealth);
        worst = std::min(worst, wealth / peak - 1.0);
    }
    return worst;
}

MetricSummary summarize(const std::vector<double>& returns, int periods_per_year) {
    MetricSummary out;
    out.cumulative_return = cumulative_return(returns);
    out.sharpe = sharpe(returns, periods_per_year);
    out.max_drawdown = max_drawdown(returns);
    return out;
}

}  // namespace sentifolio
