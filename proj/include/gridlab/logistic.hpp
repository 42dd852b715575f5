#pragma once

#include <optional>
#include <vector>

namespace gridlab {

using Matrix = std::vector<std::vector<double>>;

struct MinMax {
  std::vector<double> min;
  std::vector<double> max;
  bool operator==(const MinMax&) const = default;
};

MinMax fit_minmax(const Matrix& X);
// Constant columns map to 0.
Matrix apply_minmax(const Matrix& X, const MinMax& mm);
Matrix normalize(const Matrix& X);

struct LogisticOptions {
  double lambda = 0.01;
  double learning_rate = 0.1;
  double tolerance = 1e-6;  // on the gradient max-norm
  int max_iterations = 50000;
  int trace_every = 100;
  std::size_t min_samples = 20;
  // Every 5th row (index % 5 == 4) is held out when set.
  bool holdout = false;
};

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 0.0;
  int iterations = 0;
  double final_loss = 0.0;
  std::vector<double> loss_trace;  // every trace_every iterations, plus the final loss
  bool converged = false;
  double train_accuracy = 0.0;
  std::optional<double> heldout_accuracy;

  double predict_proba(const std::vector<double>& x) const;
};

// Mean binary cross-entropy + (lambda/2)|w|^2, bias unregularized.
double logistic_loss(const std::vector<double>& w, double b, const Matrix& X,
                     const std::vector<int>& y, double lambda);

struct Gradient {
  std::vector<double> w;
  double b = 0.0;
};

Gradient logistic_gradient(const std::vector<double>& w, double b, const Matrix& X,
                           const std::vector<int>& y, double lambda);

// Full-batch gradient descent. Throws ContractViolation on too few samples,
// ragged rows or single-class labels.
LogisticModel fit_logistic(const Matrix& X, const std::vector<int>& y,
                           const LogisticOptions& options = {});

double accuracy(const LogisticModel& m, const Matrix& X, const std::vector<int>& y);

bool is_non_increasing(const std::vector<double>& trace, double slack = 1e-12);

}  // namespace gridlab
