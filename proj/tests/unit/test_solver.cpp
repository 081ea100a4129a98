#include <catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "decafs/error.hpp"
#include "decafs/oracle.hpp"
#include "decafs/solver.hpp"
#include "grid_oracle.hpp"

using namespace decafs;
using Catch::Approx;
using pwq::PiecewiseQuadratic;
using pwq::Quadratic;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ModelVariant variant_for(const ModelParams& p) {
  if (!p.has_random_walk()) return p.phi() == 0.0 ? ModelVariant::kIid : ModelVariant::kArOnly;
  return p.phi() == 0.0 ? ModelVariant::kRwOnly : ModelVariant::kRwAr;
}

Segmentation run(std::span<const double> y, const ModelParams& p, double beta) {
  SolverConfig c;
  c.beta = beta;
  c.variant = variant_for(p);
  return solve(y, p, c);
}

std::vector<double> random_series(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> noise(0.0, 1.0);
  std::bernoulli_distribution jump(0.2);
  std::vector<double> y(n);
  double level = 0.0;
  for (auto& v : y) {
    if (jump(rng)) level += 4.0 * noise(rng);
    v = level + noise(rng);
  }
  return y;
}

}  // namespace

TEST_CASE("single observation") {
  const double y[] = {3.0};
  for (const auto& p : {ModelParams::make(0, 1, 0), ModelParams::make(0.5, 2, 0.7)}) {
    const Segmentation s = run(y, p, 2.0);
    CHECK(s.changepoints.empty());
    CHECK(s.signal == std::vector<double>{3.0});
    CHECK(s.cost == 0.0);
  }
}

TEST_CASE("step series under the iid model") {
  const std::vector<double> y{0, 0, 0, 10, 10, 10};
  const Segmentation s = run(y, ModelParams::make(0, 1, 0), 4.0);
  CHECK(s.changepoints == std::vector<std::size_t>{3});
  CHECK(s.signal == std::vector<double>{0, 0, 0, 10, 10, 10});
  CHECK(s.cost == Approx(4.0));
}

TEST_CASE("huge penalties forbid changes") {
  std::mt19937_64 rng(3);
  const std::vector<double> y = random_series(rng, 50);
  for (const auto& p : {ModelParams::make(0, 1, 0), ModelParams::make(0.3, 1, 0.5)}) {
    CHECK(run(y, p, kInf).changepoints.empty());
    CHECK(run(y, p, 1e18).changepoints.empty());
  }
}

TEST_CASE("constant data has no changes") {
  const std::vector<double> y(40, 2.5);
  for (const auto& p : {ModelParams::make(0, 1, 0), ModelParams::make(0.3, 1, 0.5),
                        ModelParams::make(0, 2, 0.9)}) {
    for (double beta : {1e-6, 1.0, 10.0}) CHECK(run(y, p, beta).changepoints.empty());
  }
}

TEST_CASE("extract_changepoints applies the strict rule") {
  const ModelParams p = ModelParams::make(1, 1, 0);
  CHECK(extract_changepoints(std::vector<double>{0, 0, 5, 5}, p, 4.0) ==
        std::vector<std::size_t>{2});
  CHECK(extract_changepoints(std::vector<double>{0, 1, 2, 3}, p, 4.0).empty());
  CHECK(extract_changepoints(std::vector<double>{0, 2}, p, 4.0).empty());
  CHECK(extract_changepoints(std::vector<double>(7, 1.5), p, 4.0).empty());
  const ModelParams flat = ModelParams::make(0, 1, 0);
  CHECK(extract_changepoints(std::vector<double>{0, 0, 1e-12, 1e-12}, flat, 4.0) ==
        std::vector<std::size_t>{2});
}

TEST_CASE("input validation") {
  const ModelParams p = ModelParams::make(0, 1, 0);
  SolverConfig c;
  c.variant = ModelVariant::kIid;
  CHECK_THROWS_AS(solve(std::vector<double>{}, p, c), EmptyInput);
  CHECK_THROWS_AS(solve(std::vector<double>{1.0, std::nan("")}, p, c), InvalidData);
  CHECK_THROWS_AS(solve(std::vector<double>{1.0, kInf}, p, c), InvalidData);
  c.beta = 0.0;
  CHECK_THROWS_AS(solve(std::vector<double>{1.0}, p, c), InvalidParameter);
  c.beta = 1.0;
  c.variant = ModelVariant::kIid;
  CHECK_THROWS_AS(solve(std::vector<double>{1.0}, ModelParams::make(1, 1, 0), c),
                  InvalidParameter);
  CHECK_THROWS_AS(ModelParams::make(0, 0, 0), InvalidParameter);
  CHECK_THROWS_AS(ModelParams::make(0, 1, 1.0), InvalidParameter);
  CHECK_THROWS_AS(ModelParams::make(-1, 1, 0), InvalidParameter);
}

TEST_CASE("update_step from a single quadratic matches a direct 2-D minimisation") {
  struct Case {
    ModelParams p;
    double beta;
  };
  const std::vector<Case> cases{{ModelParams::make(0.5, 1.0, 0.3), 2.0},
                                {ModelParams::make(0.5, 2.0, 0.7), 5.0},
                                {ModelParams::make(0.0, 0.5, 0.7), 1.0},
                                {ModelParams::make(0.0, 1.0, 0.0), 3.0},
                                {ModelParams::make(2.0, 1.0, 0.0), 1.0},
                                {ModelParams::make(0.5, 1.0, 0.3), kInf}};
  const Quadratic prev = Quadratic::centered(0.8, 1.5) + Quadratic{0, 0, 0.4};
  const double y_t = -0.7;
  const double y_prev = 2.1;
  const std::vector<double> mus = testing::linspace(-6.0, 6.0, 1000);
  for (const auto& c : cases) {
    const PiecewiseQuadratic q = update_step(PiecewiseQuadratic(prev), y_t, y_prev, c.p, c.beta);
    CHECK(q.size() <= 3);
    double worst = 0.0;
    for (double mu : mus) {
      const double oracle = testing::grid_update(prev, y_t, y_prev, c.p, c.beta, mu, -20, 20, 1e-3);
      worst = std::max(worst, std::abs(q(mu) - oracle));
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("update_step in the iid case is the textbook recursion") {
  const ModelParams p = ModelParams::make(0, 2, 0);
  const PiecewiseQuadratic prev = pwq::min_of_two(
      PiecewiseQuadratic(Quadratic::centered(1, -1)),
      PiecewiseQuadratic(Quadratic::centered(0.5, 2) + Quadratic{0, 0, 0.3}));
  const double beta = 1.7;
  const double y_t = 0.4;
  const PiecewiseQuadratic q = update_step(prev, y_t, 9.0, p, beta);
  const double floor = pwq::global_argmin(prev).value + beta;
  for (double mu : testing::linspace(-5, 5, 2001)) {
    const double expected = std::min(prev(mu), floor) + p.gamma() * (y_t - mu) * (y_t - mu);
    CHECK(q(mu) == Approx(expected).margin(1e-12));
  }
}

TEST_CASE("update_step with an infinite penalty keeps only the no-change branch") {
  const ModelParams p = ModelParams::make(0.5, 1.0, 0.4);
  const PiecewiseQuadratic prev(Quadratic::centered(1.2, 0.3));
  const PiecewiseQuadratic q = update_step(prev, 1.0, 0.5, p, kInf);
  REQUIRE(q.size() == 1);
  for (double mu : testing::linspace(-5, 5, 101)) {
    const double oracle = testing::grid_update(prev[0].q, 1.0, 0.5, p, kInf, mu, -20, 20, 1e-3);
    CHECK(q(mu) == Approx(oracle).margin(1e-9));
  }
}

TEST_CASE("solve agrees with the exhaustive oracle") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> length(4, 10);
  const double phis[] = {0.0, 0.3, 0.7};
  const double etas[] = {0.0, 0.5};
  const double betas[] = {1.0, 5.0};
  int instances = 0;
  for (double phi : phis) {
    for (double eta : etas) {
      for (double beta : betas) {
        for (int rep = 0; rep < 4; ++rep) {
          const std::vector<double> y = random_series(rng, length(rng));
          const ModelParams p = ModelParams::make(eta, rep % 2 == 0 ? 0.5 : 2.0, phi);
          const Segmentation s = run(y, p, beta);
          const oracle::ExhaustiveResult o = oracle::exhaustive_segment(y, p, beta, y.size() - 1);
          CHECK(s.cost == Approx(o.cost).margin(1e-6));
          CHECK(s.changepoints == o.tau);
          ++instances;
        }
      }
    }
  }
  CHECK(instances == 48);
}

TEST_CASE("reported cost equals the objective recomputed from the signal") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 40; ++rep) {
    const std::vector<double> y = random_series(rng, 200);
    const ModelParams p = ModelParams::make(rep % 2 == 0 ? 0.0 : 0.2, 1.0, 0.1 * (rep % 10));
    const double beta = 2.0 * std::log(200.0);
    const Segmentation s = run(y, p, beta);
    CHECK(penalised_cost(y, s.signal, p, beta) == Approx(s.cost).margin(1e-8 * (1 + s.cost)));

    // Changepoint rule and exact ties on no-change steps without a random walk.
    const double lambda = p.lambda();
    std::size_t k = 0;
    for (std::size_t t = 1; t < y.size(); ++t) {
      const bool is_change = k < s.changepoints.size() && s.changepoints[k] == t;
      const double d = s.signal[t] - s.signal[t - 1];
      if (is_change) {
        ++k;
        if (std::isinf(lambda)) {
          CHECK(d != 0.0);
        } else {
          CHECK(lambda * d * d > beta);
        }
      } else if (std::isinf(lambda)) {
        CHECK(d == 0.0);
      }
    }
  }
}

TEST_CASE("cost functions lie below the grid recursion within its discretisation error") {
  std::mt19937_64 rng(123);
  const double h = 0.01;
  for (const auto& p : {ModelParams::make(0.5, 1.0, 0.3), ModelParams::make(0.0, 1.0, 0.6),
                        ModelParams::make(0.2, 0.5, 0.0)}) {
    const std::vector<double> y = random_series(rng, 6);
    const double beta = 3.0;
    const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
    std::vector<double> grid;
    for (double g = std::floor(*lo_it) - 3.0; g <= std::ceil(*hi_it) + 3.0; g += h) grid.push_back(g);
    const auto rows = oracle::grid_dp(y, p, beta, grid);

    const double lambda = std::isinf(p.lambda()) ? 0.0 : p.lambda();
    const double curvature = 2.0 * (4.0 * lambda + 2.0 * p.gamma() * (1 + p.phi()) * (1 + p.phi()));
    PiecewiseQuadratic q = initial_cost(y[0], p);
    for (std::size_t t = 0; t < y.size(); ++t) {
      if (t > 0) q = update_step(q, y[t], y[t - 1], p, beta);
      const double bound = 0.5 * curvature * static_cast<double>(t) * (h / 2) * (h / 2) + 1e-9;
      double below = -kInf;
      double gap = 0.0;
      for (std::size_t j = 0; j < grid.size(); ++j) {
        below = std::max(below, q(grid[j]) - rows[t][j]);
        gap = std::max(gap, rows[t][j] - q(grid[j]));
      }
      CHECK(below <= 1e-9);
      CHECK(gap <= bound);
    }
  }
}

TEST_CASE("number of changes does not increase with the penalty") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    const std::vector<double> y = random_series(rng, 300);
    const ModelParams p = ModelParams::make(rep % 2 == 0 ? 0.0 : 0.1, 1.0, 0.4);
    std::size_t previous = y.size();
    for (double beta : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 1e3}) {
      const std::size_t m = run(y, p, beta).m();
      CHECK(m <= previous);
      previous = m;
    }
  }
}

TEST_CASE("shifting the data shifts the fit") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> offset(-50.0, 50.0);
  for (int rep = 0; rep < 20; ++rep) {
    const std::vector<double> y = random_series(rng, 120);
    const double c = offset(rng);
    std::vector<double> shifted(y);
    for (auto& v : shifted) v += c;
    const ModelParams p = ModelParams::make(rep % 3 == 0 ? 0.0 : 0.3, 1.5, 0.1 * (rep % 8));
    const Segmentation a = run(y, p, 6.0);
    const Segmentation b = run(shifted, p, 6.0);
    CHECK(a.changepoints == b.changepoints);
    for (std::size_t t = 0; t < y.size(); ++t) {
      CHECK(b.signal[t] - c == Approx(a.signal[t]).margin(1e-6));
    }
  }
}
