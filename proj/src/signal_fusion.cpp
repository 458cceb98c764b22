#include "sentifolio/signal_fusion.hpp"

#include <fmt/format.h>

#include "sentifolio/errors.hpp"

namespace sentifolio {

double rsi_boost(std::optional<double> rsi_value, double scale) {
    if (!rsi_value) return 0.0;
    if (*rsi_value < 0.0 || *rsi_value > 100.0)
        throw ConfigError(fmt::format("rsi_boost: rsi {} outside [0, 100]", *rsi_value));
    return scale * (*rsi_value - 50.0) / 50.0;
}

double sma_boost(double price, std::optional<double> sma_value, double step) {
    if (price <= 0) throw ConfigError("sma_boost: price must be positive");
    if (!sma_value) return 0.0;
    return price > *sma_value ? step : -step;
}

double sentiment_boost(std::optional<double> mean_compound, double scale) {
    if (!mean_compound) return 0.0;
    if (*mean_compound < -1.0 || *mean_compound > 1.0)
        throw ConfigError(
            fmt::format("sentiment_boost: compound {} outside [-1, 1]", *mean_compound));
    return scale * *mean_compound;
}

std::vector<double> adjust_mu(const std::vector<double>& mu,
                              const std::vector<BoostSet>& boosts) {
    if (mu.size() != boosts.size())
        throw ConfigError(fmt::format("adjust_mu: {} means vs {} boost sets", mu.size(),
                                      boosts.size()));
    std::vector<double> adjusted(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) adjusted[i] = mu[i] + boosts[i].total();
    return adjusted;
}

}  // namespace sentifolio
