#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "qrf/ansatz.hpp"
#include "qrf/dataio.hpp"
#include "qrf/linclf.hpp"

namespace qrf {

// Where the random-feature basis comes from.  Direct skips the feature
// map entirely and trains on the selected pixels themselves.
enum class BasisSource { Quantum, Gaussian, Direct };

std::string to_string(BasisSource s);
BasisSource basis_source_from_string(const std::string& s);

struct ExperimentConfig {
  std::string data_dir = "data/mnist";
  std::string output_dir;  // empty: write no result files
  int digit_a = 3;
  int digit_b = 5;
  int feature_count = 128;        // pixels kept by chi-squared selection
  bool pooled_selection = false;  // score chi2 on all points instead of the training split
  std::uint64_t split_seed = 2;
  BasisSource source = BasisSource::Quantum;
  AnsatzParams ansatz;     // quantum source; ansatz.seed also seeds the Gaussian basis
  double gamma = 1.0;      // Gaussian source bandwidth
  std::int64_t shots = 0;  // quantum source: 0 = exact amplitudes, else per-amplitude shots
  TrainOptions train;
  std::string tag;  // free-form label copied into output rows
};

void validate(const ExperimentConfig& cfg);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
// Strict: unknown keys are an error so config typos cannot pass silently.
ExperimentConfig config_from_json(const nlohmann::json& j);

struct StageSeconds {
  double load = 0, select = 0, basis = 0, map = 0, train = 0, eval = 0, total = 0;
};

struct RunResult {
  ExperimentConfig config;
  int train_count = 0, test_count = 0;
  double train_accuracy = 0, test_accuracy = 0;
  int solver_iterations = 0;
  double final_objective = 0;
  std::uint64_t basis_fingerprint = 0;  // 0 for the Direct source
  StageSeconds seconds;
  std::string timestamp;  // UTC, ISO 8601
};

nlohmann::json result_to_json(const RunResult& r);

// The parts of a run that depend only on data/selection/split settings,
// precomputed once so a grid over ansatz settings can share them.
struct PreparedData {
  Matrix train_features, test_features;  // feature_count x n, pixel scale [0,1]
  std::vector<int> train_labels, test_labels;
  std::vector<int> selected_features;
  Split split;  // indices into the extracted task points, for audit files
  double load_seconds = 0, select_seconds = 0;
};

PreparedData prepare_data(const ExperimentConfig& cfg);
RunResult run_prepared(const PreparedData& prep, const ExperimentConfig& cfg);
RunResult run_experiment(const ExperimentConfig& cfg);  // prepare + run + write outputs

void append_result_jsonl(const RunResult& r, const std::string& path);
void append_result_csv(const RunResult& r, const std::string& path);

// Hyper-parameter grid for the quantum source.
struct GridSpec {
  std::vector<int> layers;
  std::vector<double> rot_means;
  std::vector<double> rot_stds;
  std::vector<double> weight_stds;
  std::vector<int> basis_sizes;
};
GridSpec default_grid();

struct GridCell {
  ExperimentConfig config;
  bool ok = false;
  std::string error;
  RunResult result;
};

// Accuracy histogram: 20 equal bins over [0.9, 1.0]; scores below the
// range are counted separately, 1.0 lands in the last bin.
struct AccuracyHistogram {
  std::array<int, 20> bins{};
  int below_range = 0;
};

struct GridSummary {
  int basis_size = 0;
  int cells = 0, failed = 0;
  double best_test_accuracy = 0, min_test_accuracy = 0, mean_test_accuracy = 0;
  ExperimentConfig best_config;
  AccuracyHistogram histogram;
};

struct GridResult {
  std::vector<GridCell> cells;  // canonical order: (D, L, rot_mean, rot_std, weight_std)
  std::vector<GridSummary> summaries;
};

GridResult grid_search(const ExperimentConfig& base, const GridSpec& spec, int jobs);
std::string format_grid_summary(const GridSummary& sum);
void write_grid_outputs(const GridResult& grid, const std::string& output_dir);

// Monte-Carlo kernel error against the closed-form Gaussian kernel on
// random pairs in the unit ball.
struct KernelCheckRow {
  int basis_size = 0;
  double max_error = 0, mean_error = 0;
};
std::vector<KernelCheckRow> kernel_check(int dim, double gamma,
                                         const std::vector<int>& basis_sizes, int pair_count,
                                         std::uint64_t seed);

}  // namespace qrf
