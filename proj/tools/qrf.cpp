// Command-line front end: fetch data, run single experiments, sweep the
// hyper-parameter grid, check kernel convergence, inspect bases.
//
// Exit codes: 0 success, 1 usage/config error, 2 data error (missing or
// corrupt data files), 3 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qrf/experiment.hpp"
#include "qrf/featmap.hpp"
#include "qrf/fetch.hpp"

namespace {

// Pre-scan for --config/-c so file values load before flag overrides.
qrf::ExperimentConfig load_base_config(int argc, char** argv) {
  std::string config_path;
  for (int i = 1; i < argc - 1; ++i) {
    const std::string a = argv[i];
    if (a == "--config" || a == "-c") config_path = argv[i + 1];
  }
  if (config_path.empty()) return {};
  std::ifstream f(config_path);
  if (!f) throw qrf::DataError("cannot open config file " + config_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(config_path + ": invalid JSON: " + e.what());
  }
  return qrf::config_from_json(j);
}

void add_experiment_options(CLI::App* cmd, qrf::ExperimentConfig& cfg, std::string& source) {
  std::string ignored;
  cmd->add_option("-c,--config", ignored, "JSON config file; flags below override its values");
  cmd->add_option("--data-dir", cfg.data_dir, "Directory holding the IDX data files")
      ->envname("QRF_DATA_DIR");
  cmd->add_option("--output-dir", cfg.output_dir,
                  "Append results.jsonl/results.csv here (single runs) or write grid files");
  cmd->add_option("--digit-a", cfg.digit_a, "First digit (mapped to label -1)");
  cmd->add_option("--digit-b", cfg.digit_b, "Second digit (mapped to label +1)");
  cmd->add_option("--features", cfg.feature_count, "Pixels kept by chi-squared selection");
  cmd->add_flag("--pooled-selection", cfg.pooled_selection,
                "Score chi2 on all task points instead of the training split only");
  cmd->add_option("--split-seed", cfg.split_seed, "Seed of the 6:1 train/test shuffle");
  cmd->add_option("--source", source, "Basis source: quantum, gaussian or direct");
  cmd->add_option("--qubits", cfg.ansatz.qubits, "Register size k (feature dimension 2^k)");
  cmd->add_option("--layers", cfg.ansatz.layers, "Entangling layers L");
  cmd->add_option("-D,--basis-size", cfg.ansatz.basis_size, "Basis vectors D");
  cmd->add_option("--rot-mean", cfg.ansatz.rot_mean, "Rotation angle mean (radians)");
  cmd->add_option("--rot-std", cfg.ansatz.rot_std, "Rotation angle std dev");
  cmd->add_option("--weight-std", cfg.ansatz.weight_std, "Basis weight std dev");
  cmd->add_option("--seed", cfg.ansatz.seed, "Basis sampling seed");
  cmd->add_option("--gamma", cfg.gamma, "Gaussian basis bandwidth");
  cmd->add_option("--shots", cfg.shots,
                  "Per-amplitude measurement shots (0 = exact simulator amplitudes)");
  cmd->add_option("--reg-c", cfg.train.reg_c, "Squared-hinge loss weight C");
  cmd->add_option("--tol", cfg.train.tol, "Relative objective-decrease stopping tolerance");
  cmd->add_option("--max-iters", cfg.train.max_iters, "Solver iteration cap");
  cmd->add_option("--tag", cfg.tag, "Free-form label copied into result rows");
}

void print_result(const qrf::RunResult& r) {
  std::printf("source=%s D=%d layers=%d rot_mean=%.6g rot_std=%.6g weight_std=%.6g seed=%llu\n",
              qrf::to_string(r.config.source).c_str(), r.config.ansatz.basis_size,
              r.config.ansatz.layers, r.config.ansatz.rot_mean, r.config.ansatz.rot_std,
              r.config.ansatz.weight_std,
              static_cast<unsigned long long>(r.config.ansatz.seed));
  std::printf("train %d points  accuracy %.6f | test %d points  accuracy %.6f\n", r.train_count,
              r.train_accuracy, r.test_count, r.test_accuracy);
  std::printf("solver: %d iterations, final objective %.6f, basis fingerprint %016llx\n",
              r.solver_iterations, r.final_objective,
              static_cast<unsigned long long>(r.basis_fingerprint));
  std::printf("seconds: load %.2f select %.2f basis %.2f map %.2f train %.2f eval %.2f total %.2f\n",
              r.seconds.load, r.seconds.select, r.seconds.basis, r.seconds.map, r.seconds.train,
              r.seconds.eval, r.seconds.total);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized-feature classifier driven by sampled quantum circuits"};
  app.require_subcommand(1);

  qrf::ExperimentConfig cfg;
  try {
    cfg = load_base_config(argc, argv);
  } catch (const qrf::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::string source = qrf::to_string(cfg.source);

  // fetch
  auto* fetch_cmd = app.add_subcommand("fetch", "Download and verify the MNIST data files");
  qrf::FetchOptions fetch_opts;
  fetch_cmd->add_option("--data-dir", fetch_opts.data_dir, "Where the files live")
      ->envname("QRF_DATA_DIR");
  fetch_cmd->add_option("--lockfile", fetch_opts.lockfile,
                        "Checksum lockfile (default <data-dir>/checksums.json)");
  fetch_cmd->add_option("--mirror", fetch_opts.mirror, "Base URL to download from");
  fetch_cmd->add_flag("--offline", fetch_opts.offline, "Verify only; never touch the network");

  // run
  auto* run_cmd = app.add_subcommand("run", "Run one experiment");
  add_experiment_options(run_cmd, cfg, source);

  // grid
  auto* grid_cmd = app.add_subcommand("grid", "Sweep the ansatz hyper-parameter grid");
  add_experiment_options(grid_cmd, cfg, source);
  qrf::GridSpec spec = qrf::default_grid();
  int jobs = 1;
  grid_cmd->add_option("--grid-layers", spec.layers, "Layer counts to sweep")->delimiter(',');
  grid_cmd->add_option("--grid-rot-means", spec.rot_means, "Rotation means to sweep")
      ->delimiter(',');
  grid_cmd->add_option("--grid-rot-stds", spec.rot_stds, "Rotation std devs to sweep")
      ->delimiter(',');
  grid_cmd->add_option("--grid-weight-stds", spec.weight_stds, "Weight std devs to sweep")
      ->delimiter(',');
  grid_cmd->add_option("--grid-basis-sizes", spec.basis_sizes, "Basis sizes to sweep")
      ->delimiter(',');
  grid_cmd->add_option("-j,--jobs", jobs,
                       "Cells to run concurrently (each holds its own mapped features)");

  // kernel-check
  auto* kc_cmd = app.add_subcommand("kernel-check",
                                    "Compare the Monte-Carlo kernel against the Gaussian kernel");
  int kc_dim = 8, kc_pairs = 100;
  double kc_gamma = 1.0;
  std::uint64_t kc_seed = 1;
  std::vector<int> kc_sizes{100, 1000, 10000};
  std::string kc_out;
  kc_cmd->add_option("--dim", kc_dim, "Point dimension");
  kc_cmd->add_option("--gamma", kc_gamma, "Kernel bandwidth");
  kc_cmd->add_option("--sizes", kc_sizes, "Basis sizes to test")->delimiter(',');
  kc_cmd->add_option("--pairs", kc_pairs, "Random point pairs per size");
  kc_cmd->add_option("--seed", kc_seed, "Sampling seed");
  kc_cmd->add_option("--output-dir", kc_out, "Also write kernel_check.csv here");

  // basis
  auto* basis_cmd = app.add_subcommand("basis", "Sample a feature basis, or inspect a saved one");
  std::string basis_out, basis_info;
  basis_cmd->add_option("--out", basis_out, "Sample a basis and save it to this file");
  basis_cmd->add_option("--info", basis_info, "Print a summary of a saved basis file");
  basis_cmd->add_option("--qubits", cfg.ansatz.qubits, "Register size k");
  basis_cmd->add_option("--layers", cfg.ansatz.layers, "Entangling layers L");
  basis_cmd->add_option("-D,--basis-size", cfg.ansatz.basis_size, "Basis vectors D");
  basis_cmd->add_option("--rot-mean", cfg.ansatz.rot_mean, "Rotation angle mean (radians)");
  basis_cmd->add_option("--rot-std", cfg.ansatz.rot_std, "Rotation angle std dev");
  basis_cmd->add_option("--weight-std", cfg.ansatz.weight_std, "Basis weight std dev");
  basis_cmd->add_option("--seed", cfg.ansatz.seed, "Basis sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    cfg.source = qrf::basis_source_from_string(source);
    if (fetch_cmd->parsed()) {
      const qrf::FetchReport rep = qrf::fetch_data(fetch_opts);
      std::printf("%d file(s) already present and verified, %d downloaded\n",
                  rep.already_present, rep.downloaded);
    } else if (run_cmd->parsed()) {
      const qrf::RunResult r = qrf::run_experiment(cfg);
      print_result(r);
    } else if (grid_cmd->parsed()) {
      const qrf::GridResult grid = qrf::grid_search(cfg, spec, jobs);
      for (const auto& sum : grid.summaries) std::printf("%s\n", format_grid_summary(sum).c_str());
      int failed = 0;
      for (const auto& cell : grid.cells)
        if (!cell.ok) {
          std::fprintf(stderr, "cell failed: %s\n", cell.error.c_str());
          ++failed;
        }
      if (!cfg.output_dir.empty()) qrf::write_grid_outputs(grid, cfg.output_dir);
      if (failed == static_cast<int>(grid.cells.size()))
        throw std::runtime_error("every grid cell failed");
    } else if (kc_cmd->parsed()) {
      const auto rows = qrf::kernel_check(kc_dim, kc_gamma, kc_sizes, kc_pairs, kc_seed);
      std::printf("%-10s %-14s %-14s\n", "basis", "max_error", "mean_error");
      for (const auto& row : rows)
        std::printf("%-10d %-14.6g %-14.6g\n", row.basis_size, row.max_error, row.mean_error);
      if (!kc_out.empty()) {
        std::filesystem::create_directories(kc_out);
        std::ofstream f(kc_out + "/kernel_check.csv", std::ios::trunc);
        f << "basis_size,max_error,mean_error\n";
        for (const auto& row : rows)
          f << row.basis_size << ',' << row.max_error << ',' << row.mean_error << '\n';
        if (!f) throw std::runtime_error("cannot write kernel_check.csv");
      }
    } else if (basis_cmd->parsed()) {
      if (basis_out.empty() == basis_info.empty())
        throw std::invalid_argument("basis: give exactly one of --out or --info");
      if (!basis_out.empty()) {
        const qrf::FeatureBasis basis = qrf::sample_basis(cfg.ansatz);
        qrf::save_basis(basis, basis_out);
        std::printf("saved basis: dim=%d D=%d fingerprint=%016llx\n", basis.dim, basis.size(),
                    static_cast<unsigned long long>(basis.fingerprint()));
      } else {
        const qrf::FeatureBasis basis = qrf::load_basis(basis_info);
        double wmin = 0.0, wmax = 0.0;
        if (!basis.weights.empty()) {
          wmin = wmax = basis.weights[0];
          for (double w : basis.weights) {
            wmin = std::min(wmin, w);
            wmax = std::max(wmax, w);
          }
        }
        std::printf("basis: dim=%d D=%d fingerprint=%016llx weights in [%.6g, %.6g]\n", basis.dim,
                    basis.size(), static_cast<unsigned long long>(basis.fingerprint()), wmin,
                    wmax);
      }
    }
  } catch (const qrf::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
