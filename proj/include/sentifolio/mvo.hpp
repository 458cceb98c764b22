#pragma once

#include <vector>

namespace sentifolio {

/// Per-asset mean daily returns and the sample covariance of daily returns.
struct Moments {
    std::vector<double> mu;
    std::vector<std::vector<double>> sigma;  // symmetric PSD, n x n

    std::size_t size() const { return mu.size(); }
};

struct SolverConfig {
    double lambda = 1.0;        // risk aversion, > 0
    double max_weight = 1.0;    // per-asset cap in (0, 1]; n * max_weight >= 1
    double tolerance = 1e-10;   // step / KKT threshold
    int max_iterations = 100000;
};

struct PortfolioWeights {
    std::vector<double> values;  // sum == 1, 0 <= w_i <= max_weight
};

/// Column means and unbiased (n-1) sample covariance of a days x assets
/// return matrix. Throws DataError on fewer than 2 rows, ragged rows or
/// non-finite entries.
Moments estimate_moments(const std::vector<std::vector<double>>& returns);

/// Euclidean projection onto {w : sum w_i = 1, 0 <= w_i <= cap}. Exact
/// breakpoint search, deterministic. Requires n * cap >= 1.
std::vector<double> project_capped_simplex(const std::vector<double>& x, double cap);

/// Maximizes mu'w - (lambda/2) w'Sigma w over the capped simplex by
/// projected gradient ascent with a fixed step from the Lipschitz bound
/// lambda * max-eigenvalue. If the smallest eigenvalue of Sigma is below
/// -1e-10 the diagonal is shifted up first (sample covariance on short
/// windows can come out slightly indefinite). Deterministic for fixed
/// inputs. Throws ConfigError on infeasible config, EngineError when the
/// iteration budget is exhausted with the KKT residual still above
/// tolerance.
PortfolioWeights solve(const Moments& moments, const SolverConfig& config);

/// Max violation over stationarity, complementary-slackness and feasibility
/// conditions of the capped-simplex KKT system at w. The equality multiplier
/// is chosen to minimize the reported violation. Throws ConfigError when w
/// is infeasible beyond 1e-6.
double kkt_residual(const Moments& moments, const SolverConfig& config,
                    const PortfolioWeights& w);

/// Exhaustive grid argmax of the objective over feasible weights whose
/// entries are multiples of `step`. Test oracle; asset count <= 4.
PortfolioWeights brute_force_oracle(const Moments& moments, const SolverConfig& config,
                                    double step);

/// mu'w - (lambda/2) w'Sigma w.
double objective_value(const Moments& moments, double lambda,
                       const std::vector<double>& w);

}  // namespace sentifolio
