// Acceptance gate: every release-blocking requirement pinned as one
// numbered check printing exactly one PASS/FAIL line.  Run without
// arguments for the full gate or pass criterion numbers to run a subset
// (the heavyweight data-dependent checks live at the end of the list).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qrf/ansatz.hpp"
#include "qrf/experiment.hpp"
#include "qrf/featmap.hpp"
#include "qrf/rng.hpp"
#include "qrf/statevector.hpp"

using namespace qrf;

namespace {

constexpr double kPi = std::numbers::pi;

std::string data_dir() {
  if (const char* env = std::getenv("QRF_DATA_DIR")) return env;
  return std::string(QRF_SOURCE_DIR) + "/data/mnist";
}

bool data_present(std::string& missing) {
  namespace fs = std::filesystem;
  for (const char* stem :
       {"train-images-idx3-ubyte", "train-labels-idx1-ubyte", "t10k-images-idx3-ubyte",
        "t10k-labels-idx1-ubyte"}) {
    if (!fs::exists(data_dir() + "/" + stem) && !fs::exists(data_dir() + "/" + stem + ".gz")) {
      missing = data_dir() + "/" + stem + "(.gz)";
      return false;
    }
  }
  return true;
}

struct CheckResult {
  bool pass = false;
  std::string detail;
};

using CheckFn = std::function<CheckResult()>;

// ---------------------------------------------------------------- 1
// Simulator oracle equivalence on 200 random ansatz circuits, k <= 3.
CheckResult check_simulator_oracle() {
  auto eng = make_engine(1001);
  std::uniform_int_distribution<int> pick_k(1, 3), pick_layers(0, 14);
  std::uniform_real_distribution<double> pick_mean(-kPi, kPi), pick_std(0.0, 1.0);
  std::normal_distribution<double> gauss;
  double worst_vec = 0.0, worst_orth = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    AnsatzParams p;
    p.qubits = pick_k(eng);
    p.layers = p.qubits >= 2 ? pick_layers(eng) : 0;
    p.rot_mean = pick_mean(eng);
    p.rot_std = pick_std(eng);
    const Circuit c = sample_circuit(p, eng);

    const std::size_t dim = std::size_t(1) << p.qubits;
    std::vector<double> v(dim);
    double sq = 0.0;
    for (double& x : v) {
      x = gauss(eng);
      sq += x * x;
    }
    for (double& x : v) x /= std::sqrt(sq);

    const Matrix u = dense_unitary(c);
    const StateVector got = run_circuit(c, StateVector::from_amplitudes(p.qubits, v));
    for (std::size_t r = 0; r < dim; ++r) {
      double want = 0.0;
      for (std::size_t col = 0; col < dim; ++col) want += u.at(int(r), int(col)) * v[col];
      worst_vec = std::max(worst_vec, std::abs(got.amps[r] - want));
    }

    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) {
        double acc = 0.0;
        for (std::size_t l = 0; l < dim; ++l) acc += u.at(int(l), int(i)) * u.at(int(l), int(j));
        worst_orth = std::max(worst_orth, std::abs(acc - (i == j ? 1.0 : 0.0)));
      }
  }
  std::ostringstream os;
  os << "max |run_circuit - dense*v| = " << worst_vec << " (tol 1e-12), max |U^tU - I| = "
     << worst_orth << " (tol 1e-10) over 200 circuits";
  return {worst_vec <= 1e-12 && worst_orth <= 1e-10, os.str()};
}

// ---------------------------------------------------------------- 2
// first_amplitude(C, d) == <first_row_vector(C), d> for 500 pairs, k <= 7.
CheckResult check_inner_product_identity() {
  auto eng = make_engine(2002);
  std::uniform_int_distribution<int> pick_k(1, 7), pick_layers(0, 14);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    AnsatzParams p;
    p.qubits = pick_k(eng);
    p.layers = p.qubits >= 2 ? pick_layers(eng) : 0;
    const Circuit c = sample_circuit(p, eng);

    const std::size_t dim = std::size_t(1) << p.qubits;
    std::vector<double> d(dim);
    double sq = 0.0;
    for (double& x : d) {
      x = gauss(eng);
      sq += x * x;
    }
    for (double& x : d) x /= std::sqrt(sq);

    const std::vector<double> u = first_row_vector(c);
    double want = 0.0;
    for (std::size_t i = 0; i < dim; ++i) want += u[i] * d[i];
    const double got = first_amplitude(c, StateVector::from_amplitudes(p.qubits, d));
    worst = std::max(worst, std::abs(got - want));
  }
  std::ostringstream os;
  os << "max deviation " << worst << " over 500 circuit/state pairs (tol 1e-12)";
  return {worst <= 1e-12, os.str()};
}

// ---------------------------------------------------------------- 3
// Feature-map path equivalence at D=16, N=8, k=7.
CheckResult check_map_paths() {
  AnsatzParams p;
  p.qubits = 7;
  p.layers = 14;
  p.basis_size = 16;
  p.seed = 33;
  const FeatureBasis basis = sample_basis(p);

  auto eng = make_engine(3003);
  std::normal_distribution<double> gauss;
  Matrix points(128, 8);
  for (double& v : points.data) v = gauss(eng);

  const MappedFeatures direct = map_dataset(basis.vectors, points);
  const MappedFeatures via = map_dataset_via_circuits(basis, points, 0, 0);
  const double diff = max_abs_diff(direct.features, via.features);
  std::ostringstream os;
  os << "max path difference " << diff << " at D=16, N=8, k=7 (tol 1e-9)";
  return {diff <= 1e-9, os.str()};
}

// ---------------------------------------------------------------- 4
// Kernel convergence: d=8, gamma=1, 100 pairs in the unit ball.
CheckResult check_kernel_convergence() {
  int improved = 0;
  double worst_at_large = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto rows = kernel_check(8, 1.0, {100, 10000}, 100, seed);
    if (rows[1].max_error < rows[0].max_error) ++improved;
    worst_at_large = std::max(worst_at_large, rows[1].max_error);
  }
  std::ostringstream os;
  os << "max error at D=10^4 over 20 seeds = " << worst_at_large
     << " (tol 0.05); improved over D=10^2 for " << improved << "/20 seeds (need >= 18)";
  return {worst_at_large <= 0.05 && improved >= 18, os.str()};
}

// ---------------------------------------------------------------- 5
// Pool and split sizes on the real data.
CheckResult check_dataset_counts() {
  std::string missing;
  if (!data_present(missing)) return {false, "data file missing: " + missing};
  ExperimentConfig cfg;
  cfg.data_dir = data_dir();
  const PreparedData prep = prepare_data(cfg);
  const std::size_t pool = prep.train_labels.size() + prep.test_labels.size();
  std::ostringstream os;
  os << "pooled 3/5 points = " << pool << " (want 13454), split = "
     << prep.train_labels.size() << "/" << prep.test_labels.size() << " (want 11532/1922)";
  return {pool == 13454 && prep.train_labels.size() == 11532 && prep.test_labels.size() == 1922,
          os.str()};
}

// ---------------------------------------------------------------- 6
// Linear baseline on the selected pixels.
ExperimentConfig baseline_config() {
  ExperimentConfig cfg;
  cfg.data_dir = data_dir();
  cfg.source = BasisSource::Direct;
  return cfg;
}

CheckResult check_linear_baseline() {
  std::string missing;
  if (!data_present(missing)) return {false, "data file missing: " + missing};
  const RunResult r = run_experiment(baseline_config());
  std::ostringstream os;
  os << "direct-features test accuracy " << r.test_accuracy << " (want >= 0.945)";
  return {r.test_accuracy >= 0.945, os.str()};
}

// ---------------------------------------------------------------- 7
// Headline quantum run: best of 5 basis seeds at the default settings.
CheckResult check_headline() {
  std::string missing;
  if (!data_present(missing)) return {false, "data file missing: " + missing};
  ExperimentConfig cfg;
  cfg.data_dir = data_dir();
  const PreparedData prep = prepare_data(cfg);
  double best = 0.0;
  std::uint64_t best_seed = 0;
  std::ostringstream per_seed;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    cfg.ansatz.seed = seed;
    const RunResult r = run_prepared(prep, cfg);
    per_seed << (seed > 1 ? ", " : "") << "seed " << seed << ": " << r.test_accuracy;
    if (r.test_accuracy > best) {
      best = r.test_accuracy;
      best_seed = seed;
    }
  }
  std::ostringstream os;
  os << "best test accuracy " << best << " at basis seed " << best_seed
     << " (want >= 0.985; k=7 L=14 m=pi/2 s=0.1 sw=1 D=8000 C=100 split_seed=2) [" << per_seed.str()
     << "]";
  return {best >= 0.985, os.str()};
}

// ---------------------------------------------------------------- 8
// D-trend over the default grid.
CheckResult check_grid_trend() {
  std::string missing;
  if (!data_present(missing)) return {false, "data file missing: " + missing};
  ExperimentConfig base;
  base.data_dir = data_dir();
  const GridResult grid = grid_search(base, default_grid(), 1);
  double best500 = -1.0, best8000 = -1.0;
  int failed = 0;
  for (const GridSummary& sum : grid.summaries) {
    if (sum.basis_size == 500) best500 = sum.best_test_accuracy;
    if (sum.basis_size == 8000) best8000 = sum.best_test_accuracy;
    failed += sum.failed;
  }
  std::ostringstream os;
  os << "best(D=8000) = " << best8000 << ", best(D=500) = " << best500
     << " (want best(8000) >= best(500) - 0.005); " << failed << " failed cells";
  return {best500 >= 0.0 && best8000 >= best500 - 0.005 && failed == 0, os.str()};
}

// ---------------------------------------------------------------- 9
// Replay: the recorded config snapshot reproduces accuracies exactly.
CheckResult check_replay() {
  std::string missing;
  if (!data_present(missing)) return {false, "data file missing: " + missing};
  const RunResult first = run_experiment(baseline_config());
  const nlohmann::json snapshot = result_to_json(first)["config"];
  const RunResult again = run_experiment(config_from_json(snapshot));
  std::ostringstream os;
  os << "test accuracy " << first.test_accuracy << " vs replay " << again.test_accuracy
     << ", train " << first.train_accuracy << " vs " << again.train_accuracy
     << " (must match exactly)";
  return {first.test_accuracy == again.test_accuracy &&
              first.train_accuracy == again.train_accuracy,
          os.str()};
}

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;
  CheckFn fn;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "simulator oracle equivalence", 10, check_simulator_oracle},
      {2, "inner-product identity", 30, check_inner_product_identity},
      {3, "feature-map path equivalence", 10, check_map_paths},
      {4, "kernel convergence", 120, check_kernel_convergence},
      {5, "dataset counts", 10, check_dataset_counts},
      {6, "linear baseline", 300, check_linear_baseline},
      {7, "headline accuracy", 1800, check_headline},
      {8, "grid D-trend", 7200, check_grid_trend},
      {9, "determinism replay", 600, check_replay},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : criteria()) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.number) == wanted.end())
      continue;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res;
    try {
      res = c.fn();
    } catch (const std::exception& e) {
      res = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = secs <= c.budget_seconds;
    const bool pass = res.pass && in_budget;
    std::cout << "criterion " << c.number << " (" << c.name << "): "
              << (pass ? "PASS" : "FAIL") << " [" << secs << " s"
              << (in_budget ? "" : ", OVER BUDGET") << "] - " << res.detail << '\n'
              << std::flush;
    if (!pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
