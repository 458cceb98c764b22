#pragma once

#include <optional>
#include <vector>

namespace sentifolio {

/// Simple moving average. Entry t is the mean of closes[t-period+1 ..= t];
/// the first period-1 entries are nullopt (warm-up, never a silent zero).
/// Throws ConfigError when period == 0.
std::vector<std::optional<double>> sma(const std::vector<double>& closes, int period = 14);

/// Relative Strength Index with Wilder (recursive) smoothing. The seed
/// average gain/loss is the simple mean of the first `period` up/down moves;
/// afterwards avg = (prev * (period-1) + current) / period. Entry t is
/// defined for t >= period. Flat markets (zero gains and zero losses) read
/// 50 so they contribute no momentum signal downstream.
/// Throws ConfigError when period == 0.
std::vector<std::optional<double>> rsi(const std::vector<double>& closes, int period = 14);

}  // namespace sentifolio
