#include "qrf/linclf.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace qrf {

namespace {

// out[j] = x_j . v + vb for the listed columns (all columns when idx is
// null).  Parallel over columns; each output element is one serial dot.
void column_scores(const Matrix& X, const std::vector<int>* idx, const double* v, double vb,
                   double* out) {
  const int n = idx ? static_cast<int>(idx->size()) : X.cols;
#pragma omp parallel for schedule(static)
  for (int t = 0; t < n; ++t) {
    const int j = idx ? (*idx)[static_cast<std::size_t>(t)] : t;
    out[t] = dot(X.col(j), v, X.rows) + vb;
  }
}

// acc[i] += sum_t coef[t] * X(i, idx[t]).  Parallel over row blocks; the
// sum over t runs in index order inside every block, so the result does
// not depend on the thread count.
void accumulate_columns(const Matrix& X, const std::vector<int>& idx,
                        const std::vector<double>& coef, double* acc) {
  constexpr int kBlock = 2048;
  const int rows = X.rows;
  const int nblocks = (rows + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static)
  for (int b = 0; b < nblocks; ++b) {
    const int i0 = b * kBlock;
    const int i1 = std::min(rows, i0 + kBlock);
    for (std::size_t t = 0; t < idx.size(); ++t) {
      const double* xj = X.col(idx[t]);
      const double c = coef[t];
      for (int i = i0; i < i1; ++i) acc[i] += c * xj[i];
    }
  }
}

}  // namespace

LinearModel train(const Matrix& features, const std::vector<int>& labels,
                  const TrainOptions& opt) {
  const int M = features.rows, N = features.cols;
  if (N < 1 || M < 1) throw std::invalid_argument("train: empty feature matrix");
  if (static_cast<int>(labels.size()) != N)
    throw std::invalid_argument("train: label count does not match feature columns");
  for (int y : labels)
    if (y != -1 && y != 1) throw std::invalid_argument("train: labels must be -1 or +1");
  bool has_pos = false, has_neg = false;
  for (int y : labels) (y == 1 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw std::invalid_argument("train: both classes must be present");
  for (double v : features.data)
    if (!std::isfinite(v)) throw std::invalid_argument("train: non-finite feature value");
  if (!(opt.reg_c > 0.0)) throw std::invalid_argument("train: reg_c must be > 0");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("train: tol must be > 0");
  if (opt.max_iters < 1) throw std::invalid_argument("train: max_iters must be >= 1");

  const double C = opt.reg_c;
  LinearModel model;
  model.weights.assign(static_cast<std::size_t>(M), 0.0);
  double& bias = model.bias;

  std::vector<double> scores(static_cast<std::size_t>(N), 0.0);  // w.x_j + b
  double objective = C * N;  // all hinges are exactly 1 at w = 0, b = 0
  model.objective_trace.push_back(objective);

  std::vector<int> active;
  std::vector<double> coef, grad(static_cast<std::size_t>(M));
  std::vector<double> dir(static_cast<std::size_t>(M)), resid(static_cast<std::size_t>(M));
  std::vector<double> conj(static_cast<std::size_t>(M)), hconj(static_cast<std::size_t>(M));
  std::vector<double> z, delta(static_cast<std::size_t>(N));

  for (int iter = 0; iter < opt.max_iters; ++iter) {
    // Gradient: w - 2C * sum_{active} r_j y_j x_j, and the bias part.
    active.clear();
    coef.clear();
    for (int j = 0; j < N; ++j) {
      const double r = 1.0 - labels[static_cast<std::size_t>(j)] * scores[static_cast<std::size_t>(j)];
      if (r > 0.0) {
        active.push_back(j);
        coef.push_back(-2.0 * C * r * labels[static_cast<std::size_t>(j)]);
      }
    }
    std::copy(model.weights.begin(), model.weights.end(), grad.begin());
    accumulate_columns(features, active, coef, grad.data());
    double grad_b = 0.0;
    for (double c : coef) grad_b += c;

    double gnorm_sq = grad_b * grad_b;
    for (double g : grad) gnorm_sq += g * g;
    if (gnorm_sq <= 1e-24) break;  // stationary point

    // Conjugate gradient on (H dir = -grad) with
    // H = diag(1,...,1,0) + 2C * [X_A; 1]^t [X_A; 1] restricted to active.
    std::fill(dir.begin(), dir.end(), 0.0);
    double dir_b = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i) resid[i] = -grad[i];
    double resid_b = -grad_b;
    std::copy(resid.begin(), resid.end(), conj.begin());
    double conj_b = resid_b;
    double rs = gnorm_sq;
    const double cg_target = 0.1 * std::sqrt(gnorm_sq);
    z.resize(active.size());
    const int cg_max = 30;
    for (int cg = 0; cg < cg_max; ++cg) {
      column_scores(features, &active, conj.data(), conj_b, z.data());
      std::copy(conj.begin(), conj.end(), hconj.begin());
      double hconj_b = 0.0;
      if (!active.empty()) {
        std::vector<double> zc(z.size());
        for (std::size_t t = 0; t < z.size(); ++t) zc[t] = 2.0 * C * z[t];
        accumulate_columns(features, active, zc, hconj.data());
        for (double v : zc) hconj_b += v;
      }
      double php = conj_b * hconj_b;
      for (std::size_t i = 0; i < conj.size(); ++i) php += conj[i] * hconj[i];
      if (php <= 0.0) break;
      const double alpha = rs / php;
      for (std::size_t i = 0; i < dir.size(); ++i) dir[i] += alpha * conj[i];
      dir_b += alpha * conj_b;
      for (std::size_t i = 0; i < resid.size(); ++i) resid[i] -= alpha * hconj[i];
      resid_b -= alpha * hconj_b;
      double rs_new = resid_b * resid_b;
      for (double r : resid) rs_new += r * r;
      if (std::sqrt(rs_new) <= cg_target) break;
      const double beta = rs_new / rs;
      for (std::size_t i = 0; i < conj.size(); ++i) conj[i] = resid[i] + beta * conj[i];
      conj_b = resid_b + beta * conj_b;
      rs = rs_new;
    }

    // Armijo backtracking on J along dir, reusing delta = X^t dir + dir_b.
    column_scores(features, nullptr, dir.data(), dir_b, delta.data());
    double gd = grad_b * dir_b;
    for (std::size_t i = 0; i < grad.size(); ++i) gd += grad[i] * dir[i];
    if (gd >= 0.0) break;  // not a descent direction; give up cleanly
    // The bias is unregularised, so only the w-part enters the quadratic.
    double wd = 0.0, dd = 0.0;
    for (std::size_t i = 0; i < model.weights.size(); ++i) wd += model.weights[i] * dir[i];
    for (double v : dir) dd += v * v;
    double wsq = 0.0;
    for (double v : model.weights) wsq += v * v;

    double eta = 1.0;
    double new_objective = objective;
    bool accepted = false;
    for (int half = 0; half < 60; ++half) {
      double loss = 0.0;
      for (int j = 0; j < N; ++j) {
        const double s = scores[static_cast<std::size_t>(j)] + eta * delta[static_cast<std::size_t>(j)];
        const double r = 1.0 - labels[static_cast<std::size_t>(j)] * s;
        if (r > 0.0) loss += r * r;
      }
      const double cand = 0.5 * (wsq + 2.0 * eta * wd + eta * eta * dd) + C * loss;
      if (cand <= objective + 1e-2 * eta * gd) {
        new_objective = cand;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;

    for (std::size_t i = 0; i < model.weights.size(); ++i) model.weights[i] += eta * dir[i];
    bias += eta * dir_b;
    for (int j = 0; j < N; ++j) scores[static_cast<std::size_t>(j)] += eta * delta[static_cast<std::size_t>(j)];
    model.objective_trace.push_back(new_objective);

    const double drop = objective - new_objective;
    objective = new_objective;
    if (drop <= opt.tol * std::max(objective, 1e-300)) break;
  }
  return model;
}

double decision_value(const LinearModel& model, const double* x, int n) {
  if (n != static_cast<int>(model.weights.size()))
    throw std::invalid_argument("decision_value: dimension mismatch");
  return dot(model.weights.data(), x, n) + model.bias;
}

int predict_one(const LinearModel& model, const double* x, int n) {
  return decision_value(model, x, n) >= 0.0 ? 1 : -1;
}

std::vector<int> predict(const LinearModel& model, const Matrix& features) {
  std::vector<int> out(static_cast<std::size_t>(features.cols));
  for (int j = 0; j < features.cols; ++j)
    out[static_cast<std::size_t>(j)] = predict_one(model, features.col(j), features.rows);
  return out;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.empty() || predicted.size() != truth.size())
    throw std::invalid_argument("accuracy: empty or mismatched label vectors");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == truth[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

namespace {
constexpr char kModelMagic[4] = {'Q', 'R', 'F', 'M'};
constexpr std::uint32_t kModelVersion = 1;
}  // namespace

void save_model(const LinearModel& model, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(kModelMagic, 4);
  const std::uint32_t version = kModelVersion;
  const std::uint64_t n = model.weights.size(), t = model.objective_trace.size();
  f.write(reinterpret_cast<const char*>(&version), sizeof version);
  f.write(reinterpret_cast<const char*>(&n), sizeof n);
  f.write(reinterpret_cast<const char*>(&model.bias), sizeof model.bias);
  f.write(reinterpret_cast<const char*>(model.weights.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  f.write(reinterpret_cast<const char*>(&t), sizeof t);
  f.write(reinterpret_cast<const char*>(model.objective_trace.data()),
          static_cast<std::streamsize>(t * sizeof(double)));
  if (!f) throw std::runtime_error("write failed for " + path);
}

LinearModel load_model(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, kModelMagic, 4) != 0)
    throw std::runtime_error(path + ": not a model file (bad magic)");
  std::uint32_t version = 0;
  f.read(reinterpret_cast<char*>(&version), sizeof version);
  if (!f || version != kModelVersion)
    throw std::runtime_error(path + ": unsupported model file version");
  std::uint64_t n = 0;
  f.read(reinterpret_cast<char*>(&n), sizeof n);
  LinearModel m;
  f.read(reinterpret_cast<char*>(&m.bias), sizeof m.bias);
  m.weights.resize(n);
  f.read(reinterpret_cast<char*>(m.weights.data()),
         static_cast<std::streamsize>(n * sizeof(double)));
  std::uint64_t t = 0;
  f.read(reinterpret_cast<char*>(&t), sizeof t);
  m.objective_trace.resize(t);
  f.read(reinterpret_cast<char*>(m.objective_trace.data()),
         static_cast<std::streamsize>(t * sizeof(double)));
  if (!f) throw std::runtime_error(path + ": truncated model file");
  return m;
}

}  // namespace qrf
