#pragma once

#include <optional>
#include <vector>

namespace sentifolio {

/// Scale factors for the three return adjustments. Defaults are the working
/// values; all three are config-exposed.
struct BoostScalars {
    double rsi_scale = 0.005;
    double sma_step = 0.005;
    double sentiment_scale = 0.01;
};

/// The three additive daily-return adjustments for one asset-day. A missing
/// input signal (indicator warm-up, no news) contributes exactly 0 so the
/// optimizer's universe stays stable day to day.
struct BoostSet {
    double sentiment_boost = 0;
    double rsi_boost = 0;
    double sma_boost = 0;

    double total() const { return sentiment_boost + rsi_boost + sma_boost; }
};

/// 0.005 * (rsi - 50) / 50; zero during warm-up. Throws ConfigError when a
/// defined rsi falls outside [0, 100].
double rsi_boost(std::optional<double> rsi_value, double scale = 0.005);

/// +0.005 when price > sma, -0.005 otherwise (equality included in the
/// negative branch); zero during warm-up. Throws ConfigError on
/// non-positive price.
double sma_boost(double price, std::optional<double> sma_value, double step = 0.005);

/// 0.01 * mean compound; zero when no sentiment is available. Throws
/// ConfigError when a defined compound falls outside [-1, 1].
double sentiment_boost(std::optional<double> mean_compound, double scale = 0.01);

/// mu_adj[i] = mu[i] + sentiment + rsi + sma boosts of asset i.
/// Throws ConfigError on size mismatch.
std::vector<double> adjust_mu(const std::vector<double>& mu,
                              const std::vector<BoostSet>& boosts);

}  // namespace sentifolio
