#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <vector>

#include "doctest.h"
#include "qrf/ansatz.hpp"
#include "qrf/rng.hpp"
#include "qrf/statevector.hpp"

using namespace qrf;

namespace {

constexpr double kPi = std::numbers::pi;

AnsatzParams small_params() {
  AnsatzParams p;
  p.qubits = 3;
  p.layers = 3;
  p.basis_size = 8;
  p.seed = 7;
  return p;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("qrf_ansatz_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("layer-free circuits are one rotation per qubit") {
  AnsatzParams p = small_params();
  p.layers = 0;
  auto eng = make_engine(3);
  const Circuit c = sample_circuit(p, eng);
  REQUIRE(c.gates.size() == 3);
  for (int j = 0; j < 3; ++j) {
    CHECK(c.gates[std::size_t(j)].kind == GateKind::RotationY);
    CHECK(c.gates[std::size_t(j)].qubit == j + 1);
  }
}

TEST_CASE("circuit structure is k + 3L gates in rotation-rotation-cnot layers") {
  AnsatzParams p = small_params();
  auto eng = make_engine(5);
  const Circuit c = sample_circuit(p, eng);
  REQUIRE(c.gates.size() == std::size_t(3 + 3 * 3));
  for (int l = 0; l < p.layers; ++l) {
    const std::size_t base = std::size_t(3 + 3 * l);
    const Gate& rot_t = c.gates[base];
    const Gate& rot_c = c.gates[base + 1];
    const Gate& cn = c.gates[base + 2];
    CHECK(rot_t.kind == GateKind::RotationY);
    CHECK(rot_c.kind == GateKind::RotationY);
    REQUIRE(cn.kind == GateKind::Cnot);
    CHECK(cn.control != cn.target);
    CHECK(rot_t.qubit == cn.target);
    CHECK(rot_c.qubit == cn.control);
  }
}

TEST_CASE("zero mean and spread collapse the circuit to the identity on z") {
  AnsatzParams p = small_params();
  p.rot_mean = 0.0;
  p.rot_std = 0.0;
  auto eng = make_engine(1);
  const Circuit c = sample_circuit(p, eng);
  for (const Gate& g : c.gates)
    if (g.kind == GateKind::RotationY) CHECK(g.angle == 0.0);
  const std::vector<double> u = first_row_vector(c);
  CHECK(u[0] == 1.0);
  for (std::size_t i = 1; i < u.size(); ++i) CHECK(u[i] == 0.0);
}

TEST_CASE("degenerate one-vector basis") {
  AnsatzParams p;
  p.qubits = 2;
  p.layers = 0;
  p.basis_size = 1;
  p.rot_mean = 0.0;
  p.rot_std = 0.0;
  p.weight_std = 0.0;
  const FeatureBasis b = sample_basis(p);
  CHECK(b.dim == 4);
  CHECK(b.size() == 1);
  CHECK(b.weights[0] == 1.0);
  CHECK(b.vectors.at(0, 0) == 1.0);
  for (int r = 1; r < 4; ++r) CHECK(b.vectors.at(r, 0) == 0.0);
}

TEST_CASE("basis vectors are weighted unit rows") {
  const FeatureBasis b = sample_basis(small_params());
  for (int i = 0; i < b.size(); ++i) {
    double sq = 0.0;
    for (int r = 0; r < b.dim; ++r) sq += b.vectors.at(r, i) * b.vectors.at(r, i);
    // |g_i| = |w_i| since u_i has unit norm.
    CHECK(std::abs(std::sqrt(sq) - std::abs(b.weights[std::size_t(i)])) <= 1e-9);
  }
}

TEST_CASE("weight sample mean lands near one") {
  AnsatzParams p;
  p.qubits = 3;
  p.layers = 6;
  p.rot_mean = kPi / 2;
  p.rot_std = 0.1;
  p.weight_std = 1.0;
  p.basis_size = 100;
  p.seed = 42;
  const FeatureBasis b = sample_basis(p);
  double mean = 0.0;
  for (double w : b.weights) mean += w;
  mean /= double(b.size());
  CHECK(std::abs(mean - 1.0) <= 3.0 * p.weight_std / std::sqrt(double(p.basis_size)));
}

TEST_CASE("wide-angle bases have centred components") {
  AnsatzParams p;
  p.qubits = 3;
  p.layers = 8;
  p.rot_mean = 0.0;
  p.rot_std = 50.0;
  p.weight_std = 0.0;  // weights fixed at 1 so components are the raw u entries
  p.basis_size = 400;
  p.seed = 9;
  const FeatureBasis b = sample_basis(p);
  double mean = 0.0;
  for (double v : b.vectors.data) mean += v;
  mean /= double(b.vectors.data.size());
  CHECK(std::abs(mean) <= 3.0 / std::sqrt(double(p.basis_size * b.dim)));
}

TEST_CASE("parallel and serial sampling are bit-identical") {
  AnsatzParams p = small_params();
  p.basis_size = 64;
  const FeatureBasis a = sample_basis(p);
  const FeatureBasis b = sample_basis_serial(p);
  CHECK(a.vectors.data == b.vectors.data);
  CHECK(a.weights == b.weights);
  REQUIRE(a.circuits.size() == b.circuits.size());
  for (std::size_t i = 0; i < a.circuits.size(); ++i) {
    REQUIRE(a.circuits[i].gates.size() == b.circuits[i].gates.size());
    for (std::size_t g = 0; g < a.circuits[i].gates.size(); ++g) {
      CHECK(a.circuits[i].gates[g].kind == b.circuits[i].gates[g].kind);
      CHECK(a.circuits[i].gates[g].angle == b.circuits[i].gates[g].angle);
    }
  }
  CHECK(a.fingerprint() == b.fingerprint());

  const FeatureBasis again = sample_basis(p);
  CHECK(again.fingerprint() == a.fingerprint());
}

TEST_CASE("different seeds give different bases") {
  AnsatzParams p = small_params();
  const FeatureBasis a = sample_basis(p);
  p.seed = p.seed + 1;
  const FeatureBasis b = sample_basis(p);
  CHECK(a.fingerprint() != b.fingerprint());
}

TEST_CASE("every ordered qubit pair is eventually picked") {
  AnsatzParams p;
  p.qubits = 3;
  p.layers = 200;
  p.basis_size = 1;
  p.seed = 4;
  auto eng = make_engine(12);
  const Circuit c = sample_circuit(p, eng);
  std::set<std::pair<int, int>> seen;
  for (const Gate& g : c.gates)
    if (g.kind == GateKind::Cnot) seen.insert({g.control, g.target});
  CHECK(seen.size() == 6);  // all 3*2 ordered pairs
}

TEST_CASE("basis snapshots round-trip") {
  TempDir tmp;
  const std::string path = (tmp.path / "basis.bin").string();
  AnsatzParams p = small_params();
  const FeatureBasis a = sample_basis(p);
  save_basis(a, path);
  const FeatureBasis b = load_basis(path);
  CHECK(a.vectors.data == b.vectors.data);
  CHECK(a.weights == b.weights);
  CHECK(a.dim == b.dim);
  CHECK(a.fingerprint() == b.fingerprint());
  REQUIRE(a.circuits.size() == b.circuits.size());
  for (std::size_t i = 0; i < a.circuits.size(); ++i) {
    const auto& ga = a.circuits[i].gates;
    const auto& gb = b.circuits[i].gates;
    REQUIRE(ga.size() == gb.size());
    for (std::size_t g = 0; g < ga.size(); ++g) {
      CHECK(ga[g].kind == gb[g].kind);
      CHECK(ga[g].qubit == gb[g].qubit);
      CHECK(ga[g].angle == gb[g].angle);
      CHECK(ga[g].control == gb[g].control);
      CHECK(ga[g].target == gb[g].target);
    }
  }

  SUBCASE("corrupted magic is rejected") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXX", 4);
    f.close();
    CHECK_THROWS(load_basis(path));
  }
  SUBCASE("truncated file is rejected") {
    const auto full = std::filesystem::file_size(path);
    std::filesystem::resize_file(path, full / 2);
    CHECK_THROWS(load_basis(path));
  }
  SUBCASE("missing file is rejected") {
    CHECK_THROWS(load_basis((tmp.path / "nope.bin").string()));
  }
}

TEST_CASE("parameter validation") {
  AnsatzParams p = small_params();

  p.qubits = 0;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  p = small_params();
  p.qubits = 21;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  p = small_params();
  p.layers = -1;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  p = small_params();
  p.qubits = 1;
  p.layers = 1;  // no valid control/target pair exists
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  p = small_params();
  p.basis_size = 0;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  p = small_params();
  p.rot_std = -0.5;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  p = small_params();
  p.weight_std = -1.0;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);

  CHECK_NOTHROW(validate(small_params()));
}
