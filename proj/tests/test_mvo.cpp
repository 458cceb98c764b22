#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "sentifolio/errors.hpp"
#include "sentifolio/mvo.hpp"

using namespace sentifolio;

namespace {

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    double uniform() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state >> 11) * 0x1.0p-53;
    }
};

// random PSD covariance: A A^T scaled to daily-return magnitudes
Moments random_instance(Rng& rng, std::size_t n) {
    Moments m;
    m.mu.resize(n);
    for (auto& v : m.mu) v = (rng.uniform() - 0.5) * 0.01;
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    for (auto& row : a)
        for (auto& v : row) v = (rng.uniform() - 0.5) * 0.04;
    m.sigma.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) m.sigma[i][j] += a[i][k] * a[j][k];
    return m;
}

void check_feasible(const PortfolioWeights& w, double cap) {
    double sum = 0;
    for (double v : w.values) {
        CHECK(v >= -1e-9);
        CHECK(v <= cap + 1e-9);
        sum += v;
    }
    CHECK(std::fabs(sum - 1.0) <= 1e-9);
}

}  // namespace

TEST_CASE("estimate_moments examples") {
    SUBCASE("all-zero returns") {
        const auto m = estimate_moments({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}});
        CHECK(m.mu == std::vector<double>{0.0, 0.0});
        for (const auto& row : m.sigma)
            for (double v : row) CHECK(v == 0.0);
    }
    SUBCASE("single asset hand computation") {
        const auto m = estimate_moments({{0.1}, {-0.1}});
        CHECK(m.mu[0] == 0.0);
        CHECK(m.sigma[0][0] == doctest::Approx(0.02).epsilon(1e-15));  // (0.01+0.01)/1
    }
    SUBCASE("perfectly correlated columns") {
        // column B is exactly 2x column A on a 3-row fixture
        const auto m = estimate_moments({{0.01, 0.02}, {0.02, 0.04}, {0.03, 0.06}});
        const double var_a = m.sigma[0][0], var_b = m.sigma[1][1];
        CHECK(m.sigma[0][1] == doctest::Approx(std::sqrt(var_a * var_b)).epsilon(1e-12));
        CHECK(m.sigma[0][1] == m.sigma[1][0]);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(estimate_moments({{0.1}}), DataError);
        CHECK_THROWS_AS(estimate_moments({{0.1}, {0.1, 0.2}}), DataError);
        CHECK_THROWS_AS(estimate_moments({{0.1}, {std::nan("")}}), DataError);
    }
}

TEST_CASE("capped simplex projection") {
    SUBCASE("already feasible is a fixed point") {
        const auto w = project_capped_simplex({0.25, 0.75}, 1.0);
        CHECK(w[0] == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(w[1] == doctest::Approx(0.75).epsilon(1e-12));
    }
    SUBCASE("uniform shift is removed") {
        const auto w = project_capped_simplex({10.25, 10.75}, 1.0);
        CHECK(w[0] == doctest::Approx(0.25).epsilon(1e-9));
        CHECK(w[1] == doctest::Approx(0.75).epsilon(1e-9));
    }
    SUBCASE("negative coordinates clamp to zero") {
        const auto w = project_capped_simplex({1.5, -2.0, 0.1}, 1.0);
        CHECK(w[1] == 0.0);
        check_feasible(PortfolioWeights{w}, 1.0);
    }
    SUBCASE("cap binds") {
        const auto w = project_capped_simplex({5.0, 0.0, 0.0}, 0.5);
        CHECK(w[0] == 0.5);
        check_feasible(PortfolioWeights{w}, 0.5);
    }
    SUBCASE("projection property: no feasible point is closer") {
        Rng rng(17);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 3);
            const double cap = rng.uniform() < 0.5 ? 1.0 : std::max(0.5, 1.2 / n);
            std::vector<double> x(n);
            for (auto& v : x) v = (rng.uniform() - 0.5) * 4.0;
            const auto w = project_capped_simplex(x, cap);
            check_feasible(PortfolioWeights{w}, cap);
            auto dist2 = [&](const std::vector<double>& p) {
                double d = 0;
                for (std::size_t i = 0; i < n; ++i) d += (p[i] - x[i]) * (p[i] - x[i]);
                return d;
            };
            // random feasible competitors must not beat the projection
            for (int c = 0; c < 20; ++c) {
                std::vector<double> raw(n);
                double sum = 0;
                for (auto& v : raw) {
                    v = rng.uniform();
                    sum += v;
                }
                for (auto& v : raw) v /= sum;
                bool ok = true;
                for (double v : raw) ok = ok && v <= cap;
                if (!ok) continue;
                CHECK(dist2(w) <= dist2(raw) + 1e-9);
            }
        }
    }
}

TEST_CASE("solve closed forms and symmetry") {
    SUBCASE("single asset") {
        Moments m{{0.01}, {{0.0001}}};
        const auto w = solve(m, {});
        CHECK(w.values == std::vector<double>{1.0});
        CHECK(kkt_residual(m, {}, w) == 0.0);
    }
    SUBCASE("exchange-symmetric two assets") {
        Moments m{{0.004, 0.004}, {{0.0004, 0.0001}, {0.0001, 0.0004}}};
        const auto w = solve(m, {});
        CHECK(std::fabs(w.values[0] - 0.5) <= 1e-6);
        CHECK(std::fabs(w.values[1] - 0.5) <= 1e-6);
    }
    SUBCASE("diagonal covariance interior closed form") {
        // equality-constrained stationarity: w_i = (mu_i - nu) / (lambda d_i)
        const std::vector<double> mu = {0.001, 0.002, 0.003};
        const std::vector<double> d = {0.01, 0.02, 0.04};
        Moments m{mu, {{d[0], 0, 0}, {0, d[1], 0}, {0, 0, d[2]}}};
        SolverConfig config;
        config.lambda = 1.0;

        double inv_sum = 0, ratio_sum = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            inv_sum += 1.0 / (config.lambda * d[i]);
            ratio_sum += mu[i] / (config.lambda * d[i]);
        }
        const double nu = (ratio_sum - 1.0) / inv_sum;
        std::vector<double> expected(3);
        for (std::size_t i = 0; i < 3; ++i) expected[i] = (mu[i] - nu) / (config.lambda * d[i]);
        for (double v : expected) REQUIRE(v > 0);  // interior, so the form applies

        const auto w = solve(m, config);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(w.values[i] == doctest::Approx(expected[i]).epsilon(1e-7));
        CHECK(kkt_residual(m, config, w) <= 1e-8);

        const auto oracle = brute_force_oracle(m, config, 0.01);
        CHECK(objective_value(m, config.lambda, w.values) >=
              objective_value(m, config.lambda, oracle.values) - 1e-4);
    }
    SUBCASE("zero covariance puts everything on the best asset") {
        Moments m{{0.01, 0.002}, {{0.0, 0.0}, {0.0, 0.0}}};
        const auto w = solve(m, {});
        CHECK(w.values[0] == 1.0);
        CHECK(w.values[1] == 0.0);
    }
    SUBCASE("infeasible cap") {
        Moments m{{0.01, 0.002}, {{0.0001, 0.0}, {0.0, 0.0001}}};
        SolverConfig config;
        config.max_weight = 0.4;  // 2 * 0.4 < 1
        CHECK_THROWS_AS(solve(m, config), ConfigError);
    }
    SUBCASE("cap exactly 1/n pins the unique feasible point") {
        Moments m{{0.02, -0.01}, {{0.0004, 0.0001}, {0.0001, 0.0002}}};
        SolverConfig config;
        config.max_weight = 0.5;
        const auto w = solve(m, config);
        CHECK(w.values[0] == 0.5);
        CHECK(w.values[1] == 0.5);
        CHECK(kkt_residual(m, config, w) <= 1e-8);
    }
    SUBCASE("extreme risk aversion still satisfies the certificate") {
        Moments m{{0.03, 0.001, -0.02},
                  {{0.0009, 0.0002, 0.0}, {0.0002, 0.0004, 0.0001}, {0.0, 0.0001, 0.0016}}};
        for (double lambda : {1e-3, 1.0, 1e4}) {
            SolverConfig config;
            config.lambda = lambda;
            const auto w = solve(m, config);
            CHECK(kkt_residual(m, config, w) <= 1e-8);
        }
    }
}

TEST_CASE("kkt_residual flags perturbed optima") {
    Moments m{{0.002, 0.001}, {{0.0004, 0.0001}, {0.0001, 0.0002}}};
    SolverConfig config;
    config.lambda = 5.0;

    // hand-solved interior optimum (stationarity gives w1 = 0.75)
    const PortfolioWeights optimum{{0.75, 0.25}};
    CHECK(kkt_residual(m, config, optimum) <= 1e-8);

    const auto solved = solve(m, config);
    CHECK(solved.values[0] == doctest::Approx(0.75).epsilon(1e-8));

    PortfolioWeights perturbed{{0.76 / 1.01, 0.25 / 1.01}};
    CHECK(kkt_residual(m, config, perturbed) > config.tolerance);
    CHECK(kkt_residual(m, config, perturbed) > 1e-8);

    PortfolioWeights infeasible{{0.8, 0.3}};
    CHECK_THROWS_AS(kkt_residual(m, config, infeasible), ConfigError);
}

TEST_CASE("solver beats the grid oracle on seeded instances") {
    Rng rng(2024);
    int tested = 0;
    while (tested < 40) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 3);
        SolverConfig config;
        config.lambda = std::vector<double>{0.5, 1.0, 5.0}[static_cast<int>(rng.uniform() * 3)];
        config.max_weight = rng.uniform() < 0.5 ? 1.0 : 0.5;
        if (static_cast<double>(n) * config.max_weight < 1.0) continue;
        const auto m = random_instance(rng, n);

        const auto w = solve(m, config);
        check_feasible(w, config.max_weight);
        CHECK(kkt_residual(m, config, w) <= 1e-8);

        const auto oracle = brute_force_oracle(m, config, 0.01);
        CHECK(objective_value(m, config.lambda, w.values) >=
              objective_value(m, config.lambda, oracle.values) - 1e-4);
        ++tested;
    }
}

TEST_CASE("brute_force_oracle basics") {
    SUBCASE("single asset") {
        Moments m{{0.01}, {{0.0001}}};
        CHECK(brute_force_oracle(m, {}, 0.01).values == std::vector<double>{1.0});
    }
    SUBCASE("symmetric two assets") {
        Moments m{{0.004, 0.004}, {{0.0004, 0.0001}, {0.0001, 0.0004}}};
        const auto w = brute_force_oracle(m, {}, 0.01);
        CHECK(w.values[0] == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("step must divide 1") {
        Moments m{{0.01}, {{0.0001}}};
        CHECK_THROWS_AS(brute_force_oracle(m, {}, 0.03), ConfigError);
        CHECK_THROWS_AS(brute_force_oracle(m, {}, 0.0), ConfigError);
    }
    SUBCASE("too many assets for enumeration") {
        Moments m;
        m.mu.assign(5, 0.001);
        m.sigma.assign(5, std::vector<double>(5, 0.0));
        CHECK_THROWS_AS(brute_force_oracle(m, {}, 0.01), ConfigError);
    }
}

TEST_CASE("solver properties") {
    Rng rng(7);
    const auto m = random_instance(rng, 3);
    SolverConfig config;
    config.lambda = 2.0;

    SUBCASE("determinism is bitwise") {
        const auto a = solve(m, config);
        const auto b = solve(m, config);
        CHECK(a.values == b.values);
    }
    SUBCASE("adding a constant to every mean leaves the argmax unchanged") {
        const auto base = solve(m, config);
        for (double k : {0.01, -0.005, 1.0}) {
            Moments shifted = m;
            for (auto& v : shifted.mu) v += k;
            const auto w = solve(shifted, config);
            for (std::size_t i = 0; i < 3; ++i)
                CHECK(std::fabs(w.values[i] - base.values[i]) <= 1e-6);
        }
    }
    SUBCASE("indefinite sigma gets repaired rather than diverging") {
        Moments broken = m;
        broken.sigma[0][0] = -1e-9;  // slightly indefinite diagonal
        const auto w = solve(broken, config);
        check_feasible(w, 1.0);
    }
}
