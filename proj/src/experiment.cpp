#include "qrf/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <thread>

#include "qrf/featmap.hpp"
#include "qrf/rng.hpp"

namespace qrf {

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double lap() {
    const auto t1 = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(t1 - t0).count();
    t0 = t1;
    return s;
  }
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex_u64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string find_data_file(const std::string& dir, const std::string& stem) {
  namespace fs = std::filesystem;
  const std::string gz = dir + "/" + stem + ".gz";
  if (fs::exists(gz)) return gz;
  const std::string raw = dir + "/" + stem;
  if (fs::exists(raw)) return raw;
  throw DataError(stem + "(.gz) not found in " + dir + "; run the fetch command first");
}

RawDataset load_pool(const std::string& dir) {
  RawDataset pool = load_idx(find_data_file(dir, "train-images-idx3-ubyte"),
                             find_data_file(dir, "train-labels-idx1-ubyte"));
  const RawDataset test = load_idx(find_data_file(dir, "t10k-images-idx3-ubyte"),
                                   find_data_file(dir, "t10k-labels-idx1-ubyte"));
  if (test.rows != pool.rows || test.cols != pool.cols)
    throw DataError(dir + ": train and test files disagree on image shape");
  pool.pixels.insert(pool.pixels.end(), test.pixels.begin(), test.pixels.end());
  pool.labels.insert(pool.labels.end(), test.labels.begin(), test.labels.end());
  pool.count += test.count;
  return pool;
}

// Substream families for finite-shot sampling, kept away from the basis
// sampler's substreams (which use small indices of the same master seed).
constexpr std::uint64_t kTrainShotStream = 0x10000000001ULL;
constexpr std::uint64_t kTestShotStream = 0x10000000002ULL;

// Rethrow stage failures with the stage named, preserving the error class
// (DataError keeps its CLI exit code).
template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const DataError& e) {
    throw DataError(std::string(name) + " stage: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string(name) + " stage: " + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(name) + " stage: " + e.what());
  }
}

}  // namespace

std::string to_string(BasisSource s) {
  switch (s) {
    case BasisSource::Quantum: return "quantum";
    case BasisSource::Gaussian: return "gaussian";
    case BasisSource::Direct: return "direct";
  }
  return "?";
}

BasisSource basis_source_from_string(const std::string& s) {
  if (s == "quantum") return BasisSource::Quantum;
  if (s == "gaussian") return BasisSource::Gaussian;
  if (s == "direct") return BasisSource::Direct;
  throw std::invalid_argument("unknown basis source '" + s +
                              "' (expected quantum, gaussian or direct)");
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.digit_a < 0 || cfg.digit_a > 9 || cfg.digit_b < 0 || cfg.digit_b > 9)
    throw std::invalid_argument("config: digits must be in 0..9");
  if (cfg.digit_a == cfg.digit_b) throw std::invalid_argument("config: digits must differ");
  if (cfg.feature_count < 1) throw std::invalid_argument("config: feature_count must be >= 1");
  if (cfg.shots < 0) throw std::invalid_argument("config: shots must be >= 0");
  if (cfg.source == BasisSource::Quantum) {
    validate(cfg.ansatz);
    if (cfg.feature_count > (1 << cfg.ansatz.qubits))
      throw std::invalid_argument("config: feature_count exceeds 2^qubits; points cannot be "
                                  "embedded in the register");
  } else if (cfg.source == BasisSource::Gaussian) {
    if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma))
      throw std::invalid_argument("config: gamma must be finite and > 0");
    if (cfg.ansatz.basis_size < 1)
      throw std::invalid_argument("config: basis_size must be >= 1");
  }
  if (!(cfg.train.reg_c > 0.0)) throw std::invalid_argument("config: reg_c must be > 0");
  if (!(cfg.train.tol > 0.0)) throw std::invalid_argument("config: tol must be > 0");
  if (cfg.train.max_iters < 1) throw std::invalid_argument("config: max_iters must be >= 1");
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  return nlohmann::json{
      {"data_dir", cfg.data_dir},
      {"output_dir", cfg.output_dir},
      {"digit_a", cfg.digit_a},
      {"digit_b", cfg.digit_b},
      {"feature_count", cfg.feature_count},
      {"pooled_selection", cfg.pooled_selection},
      {"split_seed", cfg.split_seed},
      {"source", to_string(cfg.source)},
      {"ansatz",
       {{"qubits", cfg.ansatz.qubits},
        {"layers", cfg.ansatz.layers},
        {"basis_size", cfg.ansatz.basis_size},
        {"rot_mean", cfg.ansatz.rot_mean},
        {"rot_std", cfg.ansatz.rot_std},
        {"weight_std", cfg.ansatz.weight_std},
        {"seed", cfg.ansatz.seed}}},
      {"gamma", cfg.gamma},
      {"shots", cfg.shots},
      {"train",
       {{"reg_c", cfg.train.reg_c}, {"tol", cfg.train.tol}, {"max_iters", cfg.train.max_iters}}},
      {"tag", cfg.tag}};
}

namespace {

[[noreturn]] void unknown_key(const std::string& where, const std::string& key) {
  throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  ExperimentConfig cfg;
  for (const auto& [key, val] : j.items()) {
    if (key == "data_dir") cfg.data_dir = val.get<std::string>();
    else if (key == "output_dir") cfg.output_dir = val.get<std::string>();
    else if (key == "digit_a") cfg.digit_a = val.get<int>();
    else if (key == "digit_b") cfg.digit_b = val.get<int>();
    else if (key == "feature_count") cfg.feature_count = val.get<int>();
    else if (key == "pooled_selection") cfg.pooled_selection = val.get<bool>();
    else if (key == "split_seed") cfg.split_seed = val.get<std::uint64_t>();
    else if (key == "source") cfg.source = basis_source_from_string(val.get<std::string>());
    else if (key == "gamma") cfg.gamma = val.get<double>();
    else if (key == "shots") cfg.shots = val.get<std::int64_t>();
    else if (key == "tag") cfg.tag = val.get<std::string>();
    else if (key == "ansatz") {
      if (!val.is_object()) throw std::invalid_argument("config: ansatz must be an object");
      for (const auto& [ak, av] : val.items()) {
        if (ak == "qubits") cfg.ansatz.qubits = av.get<int>();
        else if (ak == "layers") cfg.ansatz.layers = av.get<int>();
        else if (ak == "basis_size") cfg.ansatz.basis_size = av.get<int>();
        else if (ak == "rot_mean") cfg.ansatz.rot_mean = av.get<double>();
        else if (ak == "rot_std") cfg.ansatz.rot_std = av.get<double>();
        else if (ak == "weight_std") cfg.ansatz.weight_std = av.get<double>();
        else if (ak == "seed") cfg.ansatz.seed = av.get<std::uint64_t>();
        else unknown_key("ansatz", ak);
      }
    } else if (key == "train") {
      if (!val.is_object()) throw std::invalid_argument("config: train must be an object");
      for (const auto& [tk, tv] : val.items()) {
        if (tk == "reg_c") cfg.train.reg_c = tv.get<double>();
        else if (tk == "tol") cfg.train.tol = tv.get<double>();
        else if (tk == "max_iters") cfg.train.max_iters = tv.get<int>();
        else unknown_key("train", tk);
      }
    } else {
      unknown_key("top level", key);
    }
  }
  return cfg;
}

nlohmann::json result_to_json(const RunResult& r) {
  return nlohmann::json{{"config", config_to_json(r.config)},
                        {"train_count", r.train_count},
                        {"test_count", r.test_count},
                        {"train_accuracy", r.train_accuracy},
                        {"test_accuracy", r.test_accuracy},
                        {"solver_iterations", r.solver_iterations},
                        {"final_objective", r.final_objective},
                        {"basis_fingerprint", hex_u64(r.basis_fingerprint)},
                        {"seconds",
                         {{"load", r.seconds.load},
                          {"select", r.seconds.select},
                          {"basis", r.seconds.basis},
                          {"map", r.seconds.map},
                          {"train", r.seconds.train},
                          {"eval", r.seconds.eval},
                          {"total", r.seconds.total}}},
                        {"timestamp", r.timestamp}};
}

PreparedData prepare_data(const ExperimentConfig& cfg) {
  validate(cfg);
  Timer timer;
  const RawDataset task = stage("load", [&] {
    const RawDataset pool = load_pool(cfg.data_dir);
    RawDataset t = extract_digits(pool, cfg.digit_a, cfg.digit_b);
    if (t.count < 2)
      throw DataError("fewer than two points carry digits " + std::to_string(cfg.digit_a) + "/" +
                      std::to_string(cfg.digit_b));
    return t;
  });
  PreparedData prep;
  prep.load_seconds = timer.lap();

  stage("select", [&] {
    prep.split = make_split(task.count, cfg.split_seed);
    if (cfg.pooled_selection) {
      prep.selected_features = chi2_select(task, cfg.feature_count);
    } else {
      prep.selected_features = chi2_select(subset(task, prep.split.train), cfg.feature_count);
    }
    const TaskDataset full = to_features(task, prep.selected_features, cfg.digit_a);

    auto take = [&](const std::vector<int>& idx, Matrix& out_x, std::vector<int>& out_y) {
      out_x = Matrix(full.features.rows, static_cast<int>(idx.size()));
      out_y.resize(idx.size());
      for (std::size_t t = 0; t < idx.size(); ++t) {
        const int j = idx[t];
        const double* src = full.features.col(j);
        std::copy(src, src + full.features.rows, out_x.col(static_cast<int>(t)));
        out_y[t] = full.labels[static_cast<std::size_t>(j)];
      }
    };
    take(prep.split.train, prep.train_features, prep.train_labels);
    take(prep.split.test, prep.test_features, prep.test_labels);
  });
  prep.select_seconds = timer.lap();
  return prep;
}

RunResult run_prepared(const PreparedData& prep, const ExperimentConfig& cfg) {
  validate(cfg);
  RunResult r;
  r.config = cfg;
  r.timestamp = utc_timestamp();
  r.seconds.load = prep.load_seconds;
  r.seconds.select = prep.select_seconds;
  r.train_count = prep.train_features.cols;
  r.test_count = prep.test_features.cols;

  Timer timer;
  const Matrix* train_x = &prep.train_features;
  const Matrix* test_x = &prep.test_features;
  MappedFeatures mapped_train, mapped_test;

  if (cfg.source == BasisSource::Quantum) {
    const FeatureBasis basis = stage("basis", [&] { return sample_basis(cfg.ansatz); });
    r.basis_fingerprint = basis.fingerprint();
    r.seconds.basis = timer.lap();
    stage("map", [&] {
      Matrix padded_train, padded_test;
      const Matrix* in_train = &prep.train_features;
      const Matrix* in_test = &prep.test_features;
      if (basis.dim != prep.train_features.rows) {
        padded_train = pad_rows(prep.train_features, basis.dim);
        padded_test = pad_rows(prep.test_features, basis.dim);
        in_train = &padded_train;
        in_test = &padded_test;
      }
      if (cfg.shots > 0) {
        mapped_train = map_dataset_via_circuits(basis, *in_train, cfg.shots,
                                                substream_seed(cfg.ansatz.seed, kTrainShotStream));
        mapped_test = map_dataset_via_circuits(basis, *in_test, cfg.shots,
                                               substream_seed(cfg.ansatz.seed, kTestShotStream));
      } else {
        mapped_train = map_dataset(basis.vectors, *in_train);
        mapped_test = map_dataset(basis.vectors, *in_test);
      }
    });
    train_x = &mapped_train.features;
    test_x = &mapped_test.features;
    r.seconds.map = timer.lap();
  } else if (cfg.source == BasisSource::Gaussian) {
    const Matrix g = stage("basis", [&] {
      return sample_gaussian_basis(prep.train_features.rows, cfg.ansatz.basis_size, cfg.gamma,
                                   cfg.ansatz.seed);
    });
    FeatureBasis fp;
    fp.dim = g.rows;
    fp.vectors = g;
    r.basis_fingerprint = fp.fingerprint();
    r.seconds.basis = timer.lap();
    stage("map", [&] {
      mapped_train = map_dataset(g, prep.train_features);
      mapped_test = map_dataset(g, prep.test_features);
    });
    train_x = &mapped_train.features;
    test_x = &mapped_test.features;
    r.seconds.map = timer.lap();
  }

  const LinearModel model = stage("train", [&] { return train(*train_x, prep.train_labels, cfg.train); });
  r.solver_iterations = static_cast<int>(model.objective_trace.size()) - 1;
  r.final_objective = model.objective_trace.back();
  r.seconds.train = timer.lap();

  stage("eval", [&] {
    r.train_accuracy = accuracy(predict(model, *train_x), prep.train_labels);
    r.test_accuracy = accuracy(predict(model, *test_x), prep.test_labels);
  });
  r.seconds.eval = timer.lap();
  r.seconds.total = r.seconds.load + r.seconds.select + r.seconds.basis + r.seconds.map +
                    r.seconds.train + r.seconds.eval;
  return r;
}

namespace {

void write_index_file(const std::string& path, const std::vector<int>& indices) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  for (int idx : indices) f << idx << '\n';
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  const PreparedData prep = prepare_data(cfg);
  RunResult r = run_prepared(prep, cfg);
  if (!cfg.output_dir.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    append_result_jsonl(r, cfg.output_dir + "/results.jsonl");
    append_result_csv(r, cfg.output_dir + "/results.csv");
    // Audit trail: which pixels were kept and how the pool was partitioned.
    write_index_file(cfg.output_dir + "/selected_features.txt", prep.selected_features);
    write_index_file(cfg.output_dir + "/split_train.txt", prep.split.train);
    write_index_file(cfg.output_dir + "/split_test.txt", prep.split.test);
  }
  return r;
}

namespace {

std::string csv_header() {
  return "timestamp,tag,source,digit_a,digit_b,feature_count,pooled_selection,split_seed,"
         "qubits,layers,basis_size,rot_mean,rot_std,weight_std,gamma,shots,reg_c,tol,"
         "max_iters,train_count,test_count,train_accuracy,test_accuracy,solver_iterations,"
         "final_objective,basis_fingerprint,load_s,select_s,basis_s,map_s,train_s,eval_s,"
         "total_s";
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_row(const RunResult& r) {
  const ExperimentConfig& c = r.config;
  std::string row;
  row += r.timestamp + "," + c.tag + "," + to_string(c.source) + ",";
  row += std::to_string(c.digit_a) + "," + std::to_string(c.digit_b) + ",";
  row += std::to_string(c.feature_count) + "," + (c.pooled_selection ? "1" : "0") + ",";
  row += std::to_string(c.split_seed) + ",";
  row += std::to_string(c.ansatz.qubits) + "," + std::to_string(c.ansatz.layers) + ",";
  row += std::to_string(c.ansatz.basis_size) + "," + num(c.ansatz.rot_mean) + ",";
  row += num(c.ansatz.rot_std) + "," + num(c.ansatz.weight_std) + "," + num(c.gamma) + ",";
  row += std::to_string(c.shots) + "," + num(c.train.reg_c) + "," + num(c.train.tol) + ",";
  row += std::to_string(c.train.max_iters) + ",";
  row += std::to_string(r.train_count) + "," + std::to_string(r.test_count) + ",";
  row += num(r.train_accuracy) + "," + num(r.test_accuracy) + ",";
  row += std::to_string(r.solver_iterations) + "," + num(r.final_objective) + ",";
  row += hex_u64(r.basis_fingerprint) + ",";
  row += num(r.seconds.load) + "," + num(r.seconds.select) + "," + num(r.seconds.basis) + ",";
  row += num(r.seconds.map) + "," + num(r.seconds.train) + "," + num(r.seconds.eval) + ",";
  row += num(r.seconds.total);
  return row;
}

void append_line(const std::string& path, const std::string& line, const std::string& header) {
  namespace fs = std::filesystem;
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream f(path, std::ios::app);
  if (!f) throw std::runtime_error("cannot open " + path + " for appending");
  if (fresh && !header.empty()) f << header << '\n';
  f << line << '\n';
  if (!f) throw std::runtime_error("write failed for " + path);
}

}  // namespace

void append_result_jsonl(const RunResult& r, const std::string& path) {
  append_line(path, result_to_json(r).dump(), "");
}

void append_result_csv(const RunResult& r, const std::string& path) {
  append_line(path, csv_row(r), csv_header());
}

GridSpec default_grid() {
  const double pi = std::numbers::pi;
  GridSpec spec;
  spec.layers = {7, 14, 21};
  spec.rot_means = {0.25 * pi, 0.5 * pi};
  spec.rot_stds = {0.05, 0.1, 0.2};
  spec.weight_stds = {0.5, 1.0};
  spec.basis_sizes = {500, 8000};
  return spec;
}

namespace {

void add_to_histogram(AccuracyHistogram& h, double acc) {
  if (acc < 0.9) {
    ++h.below_range;
    return;
  }
  int bin = static_cast<int>((acc - 0.9) / 0.005);
  if (bin > 19) bin = 19;  // acc == 1.0 lands in the last bin
  ++h.bins[static_cast<std::size_t>(bin)];
}

}  // namespace

GridResult grid_search(const ExperimentConfig& base, const GridSpec& spec, int jobs) {
  if (base.source != BasisSource::Quantum)
    throw std::invalid_argument("grid_search: the grid sweeps ansatz settings, so the base "
                                "config must use the quantum source");
  if (spec.layers.empty() || spec.rot_means.empty() || spec.rot_stds.empty() ||
      spec.weight_stds.empty() || spec.basis_sizes.empty())
    throw std::invalid_argument("grid_search: every grid axis needs at least one value");
  validate(base);

  ExperimentConfig cell_base = base;
  cell_base.output_dir.clear();  // cells never append to the single-run files

  GridResult grid;
  for (int D : spec.basis_sizes)
    for (int L : spec.layers)
      for (double m : spec.rot_means)
        for (double s : spec.rot_stds)
          for (double w : spec.weight_stds) {
            GridCell cell;
            cell.config = cell_base;
            cell.config.ansatz.basis_size = D;
            cell.config.ansatz.layers = L;
            cell.config.ansatz.rot_mean = m;
            cell.config.ansatz.rot_std = s;
            cell.config.ansatz.weight_std = w;
            grid.cells.push_back(std::move(cell));
          }

  const PreparedData prep = prepare_data(base);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= grid.cells.size()) return;
      GridCell& cell = grid.cells[i];
      try {
        cell.result = run_prepared(prep, cell.config);
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (int D : spec.basis_sizes) {
    GridSummary sum;
    sum.basis_size = D;
    double acc_sum = 0.0;
    int ok_cells = 0;
    for (const GridCell& cell : grid.cells) {
      if (cell.config.ansatz.basis_size != D) continue;
      ++sum.cells;
      if (!cell.ok) {
        ++sum.failed;
        continue;
      }
      ++ok_cells;
      acc_sum += cell.result.test_accuracy;
      add_to_histogram(sum.histogram, cell.result.test_accuracy);
      if (cell.result.test_accuracy > sum.best_test_accuracy) {
        sum.best_test_accuracy = cell.result.test_accuracy;
        sum.best_config = cell.config;
      }
      if (ok_cells == 1 || cell.result.test_accuracy < sum.min_test_accuracy)
        sum.min_test_accuracy = cell.result.test_accuracy;
    }
    if (ok_cells > 0) sum.mean_test_accuracy = acc_sum / ok_cells;
    grid.summaries.push_back(std::move(sum));
  }
  return grid;
}

void write_grid_outputs(const GridResult& grid, const std::string& output_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(output_dir);

  {
    std::ofstream csv(output_dir + "/grid_results.csv", std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write grid_results.csv");
    csv << csv_header() << ",status,error\n";
    for (const GridCell& cell : grid.cells) {
      if (cell.ok) {
        csv << csv_row(cell.result) << ",ok,\n";
      } else {
        RunResult r;
        r.config = cell.config;
        std::string err = cell.error;
        for (char& ch : err)
          if (ch == ',' || ch == '\n') ch = ';';
        csv << csv_row(r) << ",failed," << err << '\n';
      }
    }
  }
  {
    std::ofstream jl(output_dir + "/grid_results.jsonl", std::ios::trunc);
    if (!jl) throw std::runtime_error("cannot write grid_results.jsonl");
    for (const GridCell& cell : grid.cells) {
      nlohmann::json row{{"config", config_to_json(cell.config)}, {"ok", cell.ok}};
      if (cell.ok)
        row["result"] = result_to_json(cell.result);
      else
        row["error"] = cell.error;
      jl << row.dump() << '\n';
    }
  }
  for (const GridSummary& sum : grid.summaries) {
    std::ofstream f(output_dir + "/grid_hist_" + std::to_string(sum.basis_size) + ".txt",
                    std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write grid histogram file");
    f << format_grid_summary(sum);
  }
}

std::string format_grid_summary(const GridSummary& sum) {
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof buf, "basis_size %d: %d cells, %d failed\n", sum.basis_size,
                sum.cells, sum.failed);
  out += buf;
  std::snprintf(buf, sizeof buf, "best test accuracy %.6f  (layers=%d rot_mean=%.6f rot_std=%.6f weight_std=%.6f)\n",
                sum.best_test_accuracy, sum.best_config.ansatz.layers,
                sum.best_config.ansatz.rot_mean, sum.best_config.ansatz.rot_std,
                sum.best_config.ansatz.weight_std);
  out += buf;
  std::snprintf(buf, sizeof buf, "mean test accuracy %.6f, min %.6f\n", sum.mean_test_accuracy,
                sum.min_test_accuracy);
  out += buf;
  std::snprintf(buf, sizeof buf, "test-accuracy histogram, 20 bins over [0.9, 1.0], %d below range\n",
                sum.histogram.below_range);
  out += buf;
  for (int b = 0; b < 20; ++b) {
    const double lo = 0.9 + 0.005 * b, hi = lo + 0.005;
    std::snprintf(buf, sizeof buf, "  [%.3f, %.3f%c %4d  %s\n", lo, hi, b == 19 ? ']' : ')',
                  sum.histogram.bins[static_cast<std::size_t>(b)],
                  std::string(static_cast<std::size_t>(
                                  sum.histogram.bins[static_cast<std::size_t>(b)]),
                              '#')
                      .c_str());
    out += buf;
  }
  return out;
}

std::vector<KernelCheckRow> kernel_check(int dim, double gamma,
                                         const std::vector<int>& basis_sizes, int pair_count,
                                         std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("kernel_check: dim must be >= 1");
  if (pair_count < 1) throw std::invalid_argument("kernel_check: pair_count must be >= 1");
  if (basis_sizes.empty()) throw std::invalid_argument("kernel_check: no basis sizes given");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("kernel_check: gamma must be finite and > 0");

  // Random pairs in the unit ball: gaussian direction, radius u^(1/dim).
  Matrix pts(dim, 2 * pair_count);
  auto eng = make_engine(substream_seed(seed, 0));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int j = 0; j < 2 * pair_count; ++j) {
    double* col = pts.col(j);
    double norm = 0.0;
    do {
      double sq = 0.0;
      for (int i = 0; i < dim; ++i) {
        col[i] = gauss(eng);
        sq += col[i] * col[i];
      }
      norm = std::sqrt(sq);
    } while (norm == 0.0);
    const double radius = std::pow(unif(eng), 1.0 / dim);
    for (int i = 0; i < dim; ++i) col[i] *= radius / norm;
  }

  std::vector<KernelCheckRow> rows;
  for (std::size_t si = 0; si < basis_sizes.size(); ++si) {
    const int D = basis_sizes[si];
    if (D < 1) throw std::invalid_argument("kernel_check: basis sizes must be >= 1");
    const Matrix basis = sample_gaussian_basis(dim, D, gamma, substream_seed(seed, 1 + si));
    KernelCheckRow row;
    row.basis_size = D;
    double err_sum = 0.0;
    for (int p = 0; p < pair_count; ++p) {
      const double* f1 = pts.col(2 * p);
      const double* f2 = pts.col(2 * p + 1);
      const double approx = approx_kernel(std::span<const double>(f1, static_cast<std::size_t>(dim)),
                                          std::span<const double>(f2, static_cast<std::size_t>(dim)),
                                          basis);
      double dist_sq = 0.0;
      for (int i = 0; i < dim; ++i) dist_sq += (f1[i] - f2[i]) * (f1[i] - f2[i]);
      const double exact = std::exp(-gamma * gamma * dist_sq / 2.0);
      const double err = std::abs(approx - exact);
      err_sum += err;
      if (err > row.max_error) row.max_error = err;
    }
    row.mean_error = err_sum / pair_count;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qrf
