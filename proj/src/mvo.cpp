#include "sentifolio/mvo.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "sentifolio/errors.hpp"

namespace sentifolio {

namespace {

std::vector<double> mat_vec(const std::vector<std::vector<double>>& m,
                            const std::vector<double>& v) {
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
    return out;
}

// Eigenvalue range of a small symmetric matrix via cyclic Jacobi sweeps.
// Plenty for the handful of assets this solver sees.
std::pair<double, double> symmetric_eigen_range(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    if (n == 0) return {0.0, 0.0};
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    double lo = a[0][0], hi = a[0][0];
    for (std::size_t i = 1; i < n; ++i) {
        lo = std::min(lo, a[i][i]);
        hi = std::max(hi, a[i][i]);
    }
    return {lo, hi};
}

void check_config(std::size_t n, const SolverConfig& config) {
    if (n == 0) throw ConfigError("solver: empty asset set");
    if (config.lambda <= 0) throw ConfigError("solver: lambda must be positive");
    if (config.max_weight <= 0 || config.max_weight > 1.0)
        throw ConfigError("solver: max_weight must lie in (0, 1]");
    if (static_cast<double>(n) * config.max_weight < 1.0 - 1e-12)
        throw ConfigError(fmt::format(
            "solver: cap {} infeasible for {} assets (n * cap must reach 1)",
            config.max_weight, n));
    if (config.tolerance <= 0) throw ConfigError("solver: tolerance must be positive");
    if (config.max_iterations < 1) throw ConfigError("solver: max_iterations must be >= 1");
}

void check_moments(const Moments& m) {
    const std::size_t n = m.mu.size();
    if (m.sigma.size() != n) throw ConfigError("solver: mu/sigma dimension mismatch");
    for (const auto& row : m.sigma)
        if (row.size() != n) throw ConfigError("solver: sigma is not square");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(m.mu[i])) throw DataError("solver: non-finite mean");
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(m.sigma[i][j])) throw DataError("solver: non-finite covariance");
            if (std::fabs(m.sigma[i][j] - m.sigma[j][i]) > 1e-12)
                throw DataError("solver: sigma not symmetric");
        }
    }
}

}  // namespace

Moments estimate_moments(const std::vector<std::vector<double>>& returns) {
    if (returns.size() < 2) throw DataError("estimate_moments: need at least 2 rows");
    const std::size_t n = returns.front().size();
    if (n == 0) throw DataError("estimate_moments: no assets");
    for (const auto& row : returns) {
        if (row.size() != n) throw DataError("estimate_moments: ragged return matrix");
        for (double v : row)
            if (!std::isfinite(v)) throw DataError("estimate_moments: non-finite return");
    }
    const double rows = static_cast<double>(returns.size());

    Moments m;
    m.mu.assign(n, 0.0);
    for (const auto& row : returns)
        for (std::size_t j = 0; j < n; ++j) m.mu[j] += row[j];
    for (std::size_t j = 0; j < n; ++j) m.mu[j] /= rows;

    m.sigma.assign(n, std::vector<double>(n, 0.0));
    for (const auto& row : returns)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                m.sigma[i][j] += (row[i] - m.mu[i]) * (row[j] - m.mu[j]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            m.sigma[i][j] /= rows - 1.0;
            m.sigma[j][i] = m.sigma[i][j];
        }
    return m;
}

std::vector<double> project_capped_simplex(const std::vector<double>& x, double cap) {
    const std::size_t n = x.size();
    if (n == 0) throw ConfigError("projection: empty vector");
    if (static_cast<double>(n) * cap < 1.0 - 1e-12)
        throw ConfigError("projection: cap infeasible");

    // S(tau) = sum_i clamp(x_i - tau, 0, cap) is continuous, piecewise linear
    // and nonincreasing; the solution of S(tau) = 1 lies between consecutive
    // breakpoints {x_i, x_i - cap}.
    auto shift_sum = [&](double tau) {
        double s = 0;
        for (double xi : x) s += std::clamp(xi - tau, 0.0, cap);
        return s;
    };

    std::vector<double> breakpoints;
    breakpoints.reserve(2 * n);
    for (double xi : x) {
        breakpoints.push_back(xi);
        breakpoints.push_back(xi - cap);
    }
    std::sort(breakpoints.begin(), breakpoints.end());

    // At the smallest breakpoint every coordinate sits at the cap, so
    // S(lo) = n * cap >= 1; at the largest, S(hi) = 0. The crossing segment
    // always exists and S is linear on it.
    double tau = breakpoints.front();
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
        const double a = breakpoints[k], b = breakpoints[k + 1];
        const double sa = shift_sum(a), sb = shift_sum(b);
        if (sa >= 1.0 && sb <= 1.0) {
            tau = sa == sb ? a : a + (sa - 1.0) * (b - a) / (sa - sb);
            break;
        }
    }

    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = std::clamp(x[i] - tau, 0.0, cap);

    // exact renormalization of the residual rounding error over free coords
    double sum = 0;
    for (double wi : w) sum += wi;
    const double diff = 1.0 - sum;
    if (diff != 0.0) {
        std::size_t free_count = 0;
        for (double wi : w)
            if (wi > 0.0 && wi < cap) ++free_count;
        if (free_count > 0) {
            const double adj = diff / static_cast<double>(free_count);
            for (double& wi : w)
                if (wi > 0.0 && wi < cap) wi = std::clamp(wi + adj, 0.0, cap);
        } else if (!w.empty()) {
            // all pinned: push the remainder into the largest adjustable slot
            for (double& wi : w) {
                const double room = diff > 0 ? cap - wi : wi;
                if (room > 0) {
                    wi += std::clamp(diff, -wi, cap - wi);
                    break;
                }
            }
        }
    }
    return w;
}

double objective_value(const Moments& moments, double lambda, const std::vector<double>& w) {
    const auto sw = mat_vec(moments.sigma, w);
    double lin = 0, quad = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        lin += moments.mu[i] * w[i];
        quad += w[i] * sw[i];
    }
    return lin - 0.5 * lambda * quad;
}

PortfolioWeights solve(const Moments& moments, const SolverConfig& config) {
    check_moments(moments);
    const std::size_t n = moments.size();
    check_config(n, config);

    if (n == 1) return PortfolioWeights{{1.0}};

    Moments work = moments;
    auto [eig_min, eig_max] = symmetric_eigen_range(work.sigma);
    if (eig_min < -1e-10) {
        const double shift = -eig_min + 1e-12;
        for (std::size_t i = 0; i < n; ++i) work.sigma[i][i] += shift;
        eig_max += shift;
    }

    // Fixed step from the gradient Lipschitz bound; a vanishing covariance
    // degenerates to a linear program where any positive step is an ascent
    // step, so jump straight at the maximizing vertex.
    const double lipschitz = config.lambda * std::max(eig_max, 0.0);
    const double step = lipschitz > 1e-12 ? 1.0 / lipschitz : 1e12;

    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    w = project_capped_simplex(w, config.max_weight);

    PortfolioWeights result;
    for (int iter = 0; iter < config.max_iterations; ++iter) {
        const auto sw = mat_vec(work.sigma, w);
        std::vector<double> ascent(n);
        for (std::size_t i = 0; i < n; ++i)
            ascent[i] = w[i] + step * (work.mu[i] - config.lambda * sw[i]);
        auto next = project_capped_simplex(ascent, config.max_weight);

        double move = 0;
        for (std::size_t i = 0; i < n; ++i) move = std::max(move, std::fabs(next[i] - w[i]));
        w = std::move(next);
        if (move <= config.tolerance) {
            result.values = w;
            return result;
        }
    }

    result.values = w;
    const double residual = kkt_residual(moments, config, result);
    if (residual > std::max(config.tolerance, 1e-8))
        throw EngineError(fmt::format(
            "solver did not converge in {} iterations (KKT residual {:.3e})",
            config.max_iterations, residual));
    return result;
}

double kkt_residual(const Moments& moments, const SolverConfig& config,
                    const PortfolioWeights& weights) {
    check_moments(moments);
    const std::size_t n = moments.size();
    check_config(n, config);
    const auto& w = weights.values;
    if (w.size() != n) throw ConfigError("kkt_residual: weight dimension mismatch");

    double sum = 0;
    for (double wi : w) {
        if (wi < -1e-6 || wi > config.max_weight + 1e-6)
            throw ConfigError("kkt_residual: weights violate box constraints");
        sum += wi;
    }
    if (std::fabs(sum - 1.0) > 1e-6)
        throw ConfigError("kkt_residual: weights do not sum to 1");

    const auto sw = mat_vec(moments.sigma, w);
    std::vector<double> grad(n);
    for (std::size_t i = 0; i < n; ++i) grad[i] = moments.mu[i] - config.lambda * sw[i];

    // Active-set classification, then the equality multiplier nu that
    // minimizes the worst stationarity violation:
    //   free coordinates need grad_i == nu,
    //   coordinates at zero need grad_i <= nu,
    //   coordinates at the cap need grad_i >= nu.
    constexpr double kBoundTol = 1e-7;
    double need_low = -std::numeric_limits<double>::infinity();
    double need_high = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const bool at_lower = w[i] <= kBoundTol;
        const bool at_upper = w[i] >= config.max_weight - kBoundTol;
        if (at_lower && at_upper) continue;  // cap == 0 cannot happen (cap > 0)
        if (at_lower) need_low = std::max(need_low, grad[i]);
        else if (at_upper) need_high = std::min(need_high, grad[i]);
        else {
            need_low = std::max(need_low, grad[i]);
            need_high = std::min(need_high, grad[i]);
        }
    }
    double nu;
    if (!std::isfinite(need_low) && !std::isfinite(need_high)) nu = 0;
    else if (!std::isfinite(need_low)) nu = need_high;
    else if (!std::isfinite(need_high)) nu = need_low;
    else nu = 0.5 * (need_low + need_high);

    double residual = std::fabs(sum - 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        residual = std::max(residual, -w[i]);
        residual = std::max(residual, w[i] - config.max_weight);
        const bool at_lower = w[i] <= kBoundTol;
        const bool at_upper = w[i] >= config.max_weight - kBoundTol;
        if (at_lower) residual = std::max(residual, grad[i] - nu);
        else if (at_upper) residual = std::max(residual, nu - grad[i]);
        else residual = std::max(residual, std::fabs(grad[i] - nu));
    }
    return std::max(residual, 0.0);
}

PortfolioWeights brute_force_oracle(const Moments& moments, const SolverConfig& config,
                                    double step) {
    check_moments(moments);
    const std::size_t n = moments.size();
    check_config(n, config);
    if (n > 4) throw ConfigError("brute_force_oracle: enumeration limited to 4 assets");
    if (step <= 0 || step > 1) throw ConfigError("brute_force_oracle: bad step");
    const int units = static_cast<int>(std::lround(1.0 / step));
    if (std::fabs(units * step - 1.0) > 1e-9)
        throw ConfigError("brute_force_oracle: step must divide 1");
    const int max_units = static_cast<int>(std::floor(config.max_weight * units + 1e-9));

    std::vector<int> counts(n, 0);
    std::vector<double> best;
    double best_value = -std::numeric_limits<double>::infinity();

    auto evaluate = [&]() {
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<double>(counts[i]) / units;
        const double value = objective_value(moments, config.lambda, w);
        if (value > best_value) {
            best_value = value;
            best = std::move(w);
        }
    };

    auto enumerate = [&](auto&& self, std::size_t idx, int remaining) -> void {
        if (idx + 1 == n) {
            if (remaining <= max_units) {
                counts[idx] = remaining;
                evaluate();
            }
            return;
        }
        const int hi = std::min(remaining, max_units);
        for (int c = 0; c <= hi; ++c) {
            counts[idx] = c;
            self(self, idx + 1, remaining - c);
        }
    };
    enumerate(enumerate, 0, units);

    if (best.empty()) throw ConfigError("brute_force_oracle: no feasible grid point");
    return PortfolioWeights{std::move(best)};
}

}  // namespace sentifolio
