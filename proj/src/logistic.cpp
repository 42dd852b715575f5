#include "gridlab/logistic.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gridlab/errors.hpp"

namespace gridlab {

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double dot(const std::vector<double>& w, const std::vector<double>& x, double b) {
  double z = b;
  for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * x[j];
  return z;
}

}  // namespace

MinMax fit_minmax(const Matrix& X) {
  require(!X.empty(), "fit_minmax: empty matrix");
  MinMax mm{X.front(), X.front()};
  for (const auto& row : X) {
    require(row.size() == mm.min.size(), "fit_minmax: ragged matrix");
    for (std::size_t j = 0; j < row.size(); ++j) {
      mm.min[j] = std::min(mm.min[j], row[j]);
      mm.max[j] = std::max(mm.max[j], row[j]);
    }
  }
  return mm;
}

Matrix apply_minmax(const Matrix& X, const MinMax& mm) {
  Matrix out = X;
  for (auto& row : out) {
    require(row.size() == mm.min.size(), "apply_minmax: dimension mismatch");
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double span = mm.max[j] - mm.min[j];
      row[j] = span > 0 ? (row[j] - mm.min[j]) / span : 0.0;
    }
  }
  return out;
}

Matrix normalize(const Matrix& X) { return apply_minmax(X, fit_minmax(X)); }

double LogisticModel::predict_proba(const std::vector<double>& x) const {
  require(x.size() == weights.size(), "predict_proba: dimension mismatch");
  return sigmoid(dot(weights, x, bias));
}

double logistic_loss(const std::vector<double>& w, double b, const Matrix& X,
                     const std::vector<int>& y, double lambda) {
  double sum = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double z = dot(w, X[i], b);
    sum += y[i] ? softplus(-z) : softplus(z);
  }
  double reg = 0.0;
  for (double v : w) reg += v * v;
  return sum / static_cast<double>(X.size()) + 0.5 * lambda * reg;
}

Gradient logistic_gradient(const std::vector<double>& w, double b, const Matrix& X,
                           const std::vector<int>& y, double lambda) {
  Gradient g{std::vector<double>(w.size(), 0.0), 0.0};
  const double n = static_cast<double>(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double r = sigmoid(dot(w, X[i], b)) - y[i];
    for (std::size_t j = 0; j < w.size(); ++j) g.w[j] += r * X[i][j];
    g.b += r;
  }
  for (std::size_t j = 0; j < w.size(); ++j) g.w[j] = g.w[j] / n + lambda * w[j];
  g.b /= n;
  return g;
}

double accuracy(const LogisticModel& m, const Matrix& X, const std::vector<int>& y) {
  if (X.empty()) return 0.0;
  int hits = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    hits += (m.predict_proba(X[i]) >= 0.5) == (y[i] == 1);
  }
  return static_cast<double>(hits) / static_cast<double>(X.size());
}

bool is_non_increasing(const std::vector<double>& trace, double slack) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i] > trace[i - 1] + slack) return false;
  }
  return true;
}

LogisticModel fit_logistic(const Matrix& X, const std::vector<int>& y, const LogisticOptions& opt) {
  require(X.size() == y.size(), "fit_logistic: X and y differ in length");
  require(X.size() >= opt.min_samples,
          fmt::format("fit_logistic: need at least {} samples, got {}", opt.min_samples, X.size()));
  require(opt.trace_every >= 1 && opt.max_iterations >= 0, "fit_logistic: bad options");
  const std::size_t d = X.front().size();
  for (std::size_t i = 0; i < X.size(); ++i) {
    require(X[i].size() == d, "fit_logistic: ragged matrix");
    require(y[i] == 0 || y[i] == 1, "fit_logistic: labels must be 0/1");
  }

  Matrix Xtr, Xte;
  std::vector<int> ytr, yte;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (opt.holdout && i % 5 == 4) {
      Xte.push_back(X[i]);
      yte.push_back(y[i]);
    } else {
      Xtr.push_back(X[i]);
      ytr.push_back(y[i]);
    }
  }
  const auto positives = std::count(ytr.begin(), ytr.end(), 1);
  require(positives > 0 && positives < static_cast<long>(ytr.size()),
          "fit_logistic: labels contain a single class (need both wins and losses)");

  LogisticModel m;
  m.weights.assign(d, 0.0);
  m.lambda = opt.lambda;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    if (it % opt.trace_every == 0) {
      m.loss_trace.push_back(logistic_loss(m.weights, m.bias, Xtr, ytr, opt.lambda));
    }
    const Gradient g = logistic_gradient(m.weights, m.bias, Xtr, ytr, opt.lambda);
    double gmax = std::abs(g.b);
    for (double v : g.w) gmax = std::max(gmax, std::abs(v));
    if (gmax < opt.tolerance) {
      m.converged = true;
      break;
    }
    for (std::size_t j = 0; j < d; ++j) m.weights[j] -= opt.learning_rate * g.w[j];
    m.bias -= opt.learning_rate * g.b;
  }
  m.iterations = it;
  m.final_loss = logistic_loss(m.weights, m.bias, Xtr, ytr, opt.lambda);
  m.loss_trace.push_back(m.final_loss);
  require(is_non_increasing(m.loss_trace), "fit_logistic: loss increased during training");
  m.train_accuracy = accuracy(m, Xtr, ytr);
  if (opt.holdout && !Xte.empty()) m.heldout_accuracy = accuracy(m, Xte, yte);
  return m;
}

}  // namespace gridlab
