#include "doctest.h"
#include "gridlab/errors.hpp"
#include "gridlab/logistic.hpp"
#include "gridlab/rng.hpp"

#include <cmath>

using namespace gridlab;

TEST_CASE("separable two-point fit") {
  Matrix X = {{0.0}, {1.0}};
  std::vector<int> y = {0, 1};
  LogisticOptions opt;
  opt.min_samples = 2;
  const auto m = fit_logistic(X, y, opt);
  CHECK(m.weights[0] > 0);
  CHECK(m.predict_proba({1.0}) > 0.5);
  CHECK(m.predict_proba({0.0}) < 0.5);
  CHECK(m.train_accuracy == 1.0);
  CHECK(is_non_increasing(m.loss_trace));
}

TEST_CASE("pure-noise labels give small weights") {
  // Single draws scatter around the bound; the mean over draws does not.
  double sum = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RngStream rng(seed, "coins");
    Matrix X;
    std::vector<int> y;
    for (int i = 0; i < 2000; ++i) {
      X.push_back({draw_uniform(rng, 0, 1)});
      y.push_back(draw_uniform(rng, 0, 1) < 0.5 ? 1 : 0);
    }
    const auto m = fit_logistic(X, y);
    CHECK(m.converged);
    sum += std::abs(m.weights[0]);
  }
  CHECK(sum / 40 < 0.1);
}

TEST_CASE("gradient matches finite differences") {
  Matrix X = {{0.1, 0.9}, {0.7, 0.2}, {0.4, 0.4}, {1.0, 0.0}};
  std::vector<int> y = {1, 0, 1, 0};
  std::vector<double> w = {0.3, -0.8};
  double b = 0.2;
  const double lambda = 0.05;
  const auto g = logistic_gradient(w, b, X, y, lambda);
  const double h = 1e-6;
  for (std::size_t j = 0; j < w.size(); ++j) {
    auto wp = w, wm = w;
    wp[j] += h;
    wm[j] -= h;
    const double fd = (logistic_loss(wp, b, X, y, lambda) - logistic_loss(wm, b, X, y, lambda)) / (2 * h);
    CHECK(g.w[j] == doctest::Approx(fd).epsilon(1e-6));
  }
  const double fdb = (logistic_loss(w, b + h, X, y, lambda) - logistic_loss(w, b - h, X, y, lambda)) / (2 * h);
  CHECK(g.b == doctest::Approx(fdb).epsilon(1e-6));
}

TEST_CASE("loss trace is non-increasing") {
  RngStream rng(2, "trace");
  Matrix X;
  std::vector<int> y;
  for (int i = 0; i < 300; ++i) {
    const double a = draw_uniform(rng, 0, 1), c = draw_uniform(rng, 0, 1);
    X.push_back({a, c});
    y.push_back(draw_uniform(rng, 0, 1) < 1.0 / (1.0 + std::exp(-(4 * a - 2 * c - 1))) ? 1 : 0);
  }
  LogisticOptions opt;
  opt.trace_every = 1;
  opt.max_iterations = 3000;
  const auto m = fit_logistic(X, y, opt);
  CHECK(m.loss_trace.size() > 100);
  CHECK(is_non_increasing(m.loss_trace));
  CHECK(m.weights[0] > 0);
  CHECK(m.weights[1] < 0);
}

TEST_CASE("contract violations") {
  Matrix X(30, std::vector<double>{0.5});
  CHECK_THROWS_AS(fit_logistic(X, std::vector<int>(30, 1)), ContractViolation);
  CHECK_THROWS_AS(fit_logistic(Matrix(5, {0.0}), {0, 1, 0, 1, 0}), ContractViolation);
  CHECK_THROWS_AS(fit_logistic(X, std::vector<int>(29, 0)), ContractViolation);
  std::vector<int> y(30, 0);
  y[0] = 2;
  CHECK_THROWS_AS(fit_logistic(X, y), ContractViolation);
}

TEST_CASE("holdout split") {
  Matrix X;
  std::vector<int> y;
  for (int i = 0; i < 50; ++i) {
    X.push_back({static_cast<double>(i % 2)});
    y.push_back(i % 2);
  }
  LogisticOptions opt;
  opt.holdout = true;
  const auto m = fit_logistic(X, y, opt);
  REQUIRE(m.heldout_accuracy);
  CHECK(*m.heldout_accuracy == 1.0);
}

TEST_CASE("min-max normalization") {
  Matrix X = {{1, 5, 2}, {3, 5, 0}, {2, 5, 1}};
  const auto n = normalize(X);
  CHECK(n[0] == std::vector<double>{0, 0, 1});
  CHECK(n[1] == std::vector<double>{1, 0, 0});
  CHECK(n[2] == std::vector<double>{0.5, 0, 0.5});
  CHECK(normalize(n) == n);
  const auto mm = fit_minmax(X);
  CHECK(mm.min == std::vector<double>{1, 5, 0});
  CHECK(mm.max == std::vector<double>{3, 5, 2});
}
