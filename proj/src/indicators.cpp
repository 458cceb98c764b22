#include "sentifolio/indicators.hpp"

#include "sentifolio/errors.hpp"

namespace sentifolio {

std::vector<std::optional<double>> sma(const std::vector<double>& closes, int period) {
    if (period < 1) throw ConfigError("sma: period must be >= 1");
    std::vector<std::optional<double>> out(closes.size());
    if (closes.size() < static_cast<std::size_t>(period)) return out;

    double window_sum = 0;
    for (std::size_t t = 0; t < closes.size(); ++t) {
        window_sum += closes[t];
        if (t >= static_cast<std::size_t>(period)) window_sum -= closes[t - period];
        if (t + 1 >= static_cast<std::size_t>(period)) out[t] = window_sum / period;
    }
    return out;
}

std::vector<std::optional<double>> rsi(const std::vector<double>& closes, int period) {
    if (period < 1) throw ConfigError("rsi: period must be >= 1");
    std::vector<std::optional<double>> out(closes.size());
    if (closes.size() < static_cast<std::size_t>(period) + 1) return out;

    auto rsi_value = [](double avg_gain, double avg_loss) {
        if (avg_gain == 0.0 && avg_loss == 0.0) return 50.0;
        if (avg_loss == 0.0) return 100.0;
        if (avg_gain == 0.0) return 0.0;
        return 100.0 - 100.0 / (1.0 + avg_gain / avg_loss);
    };

    double avg_gain = 0, avg_loss = 0;
    for (int t = 1; t <= period; ++t) {
        const double move = closes[t] - closes[t - 1];
        if (move > 0) avg_gain += move;
        else avg_loss -= move;
    }
    avg_gain /= period;
    avg_loss /= period;
    out[period] = rsi_value(avg_gain, avg_loss);

    for (std::size_t t = period + 1; t < closes.size(); ++t) {
        const double move = closes[t] - closes[t - 1];
        const double gain = move > 0 ? move : 0.0;
        const double loss = move < 0 ? -move : 0.0;
        avg_gain = (avg_gain * (period - 1) + gain) / period;
        avg_loss = (avg_loss * (period - 1) + loss) / period;
        out[t] = rsi_value(avg_gain, avg_loss);
    }
    return out;
}

}  // namespace sentifolio
