#pragma once

#include <string>
#include <vector>

#include "qrf/matrix.hpp"

namespace qrf {

struct TrainOptions {
  // Mapped feature vectors have unit norm by construction, which makes the
  // useful loss weight much larger than the classic C = 1 default.
  double reg_c = 100.0;  // loss weight C in 0.5|w|^2 + C * sum of squared hinges
  double tol = 1e-4;     // stop when the relative objective decrease drops below this
  int max_iters = 1000;  // outer (Newton) iteration cap
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  // Objective value before the first step and after every accepted step.
  std::vector<double> objective_trace;
};

// L2-regularised squared-hinge classifier,
//   J(w, b) = 0.5 w.w + C * sum_j max(0, 1 - y_j (w.x_j + b))^2,
// minimised by a Newton method with conjugate-gradient inner solves and an
// Armijo backtracking line search.  The bias is not regularised.  The
// solver is deterministic: it uses no randomness and every parallel
// reduction has a fixed summation order.
LinearModel train(const Matrix& features, const std::vector<int>& labels,
                  const TrainOptions& opt = {});

// Decision value w.x + b.
double decision_value(const LinearModel& model, const double* x, int n);

// Class in {-1, +1}; a decision value of exactly zero maps to +1.
int predict_one(const LinearModel& model, const double* x, int n);
std::vector<int> predict(const LinearModel& model, const Matrix& features);

// Fraction of agreeing entries; throws on empty or mismatched input.
double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

void save_model(const LinearModel& model, const std::string& path);
LinearModel load_model(const std::string& path);

}  // namespace qrf
