#include "qrf/ansatz.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "qrf/rng.hpp"
#include "qrf/statevector.hpp"

namespace qrf {

void validate(const AnsatzParams& p) {
  if (p.qubits < 1 || p.qubits > 20)
    throw std::invalid_argument("ansatz: qubits must be in 1..20");
  if (p.layers < 0) throw std::invalid_argument("ansatz: layers must be >= 0");
  if (p.layers > 0 && p.qubits < 2)
    throw std::invalid_argument("ansatz: entangling layers need at least 2 qubits");
  if (p.basis_size < 1) throw std::invalid_argument("ansatz: basis_size must be >= 1");
  if (!(p.rot_std >= 0.0) || !std::isfinite(p.rot_std))
    throw std::invalid_argument("ansatz: rot_std must be finite and >= 0");
  if (!(p.weight_std >= 0.0) || !std::isfinite(p.weight_std))
    throw std::invalid_argument("ansatz: weight_std must be finite and >= 0");
  if (!std::isfinite(p.rot_mean)) throw std::invalid_argument("ansatz: rot_mean must be finite");
}

Circuit sample_circuit(const AnsatzParams& p, std::mt19937_64& eng) {
  validate(p);
  std::normal_distribution<double> angle(p.rot_mean, p.rot_std);
  Circuit c(p.qubits);
  c.gates.reserve(static_cast<std::size_t>(p.qubits) + 3 * static_cast<std::size_t>(p.layers));
  for (int j = 1; j <= p.qubits; ++j) c.gates.push_back(Gate::rotation_y(j, angle(eng)));
  const std::uint64_t k = static_cast<std::uint64_t>(p.qubits);
  for (int l = 0; l < p.layers; ++l) {
    // Ordered pair (control, target), uniform over the k*(k-1) choices.
    const std::uint64_t pick = bounded_uniform(eng, k * (k - 1));
    const int control0 = static_cast<int>(pick / (k - 1));
    int target0 = static_cast<int>(pick % (k - 1));
    if (target0 >= control0) ++target0;
    const int control = control0 + 1, target = target0 + 1;
    const double beta_target = angle(eng);
    const double beta_control = angle(eng);
    c.gates.push_back(Gate::rotation_y(target, beta_target));
    c.gates.push_back(Gate::rotation_y(control, beta_control));
    c.gates.push_back(Gate::cnot(control, target));
  }
  return c;
}

namespace {

// Fill column i of the basis from substream i.  Used by both the
// parallel and the serial sampler so their outputs match bit for bit.
void sample_basis_column(const AnsatzParams& p, int i, FeatureBasis& basis) {
  auto eng = make_engine(substream_seed(p.seed, static_cast<std::uint64_t>(i)));
  Circuit circuit = sample_circuit(p, eng);
  std::vector<double> u = first_row_vector(circuit);
  double sq = 0.0;
  for (double v : u) sq += v * v;
  if (std::abs(std::sqrt(sq) - 1.0) > 1e-9)
    throw std::runtime_error("sample_basis: first-row vector lost unit norm");
  std::normal_distribution<double> wdist(1.0, p.weight_std);
  const double w = wdist(eng);
  basis.weights[static_cast<std::size_t>(i)] = w;
  double* out = basis.vectors.col(i);
  for (int r = 0; r < basis.dim; ++r) out[r] = w * u[static_cast<std::size_t>(r)];
  basis.circuits[static_cast<std::size_t>(i)] = std::move(circuit);
}

FeatureBasis make_empty_basis(const AnsatzParams& p) {
  FeatureBasis basis;
  basis.dim = 1 << p.qubits;
  basis.vectors = Matrix(basis.dim, p.basis_size);
  basis.weights.assign(static_cast<std::size_t>(p.basis_size), 0.0);
  basis.circuits.assign(static_cast<std::size_t>(p.basis_size), Circuit(p.qubits));
  return basis;
}

}  // namespace

FeatureBasis sample_basis(const AnsatzParams& p) {
  validate(p);
  FeatureBasis basis = make_empty_basis(p);
  std::atomic<bool> failed{false};
#pragma omp parallel for schedule(static)
  for (int i = 0; i < p.basis_size; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      sample_basis_column(p, i, basis);
    } catch (...) {
      failed.store(true, std::memory_order_relaxed);
    }
  }
  if (failed) throw std::runtime_error("sample_basis: a column failed to sample");
  return basis;
}

FeatureBasis sample_basis_serial(const AnsatzParams& p) {
  validate(p);
  FeatureBasis basis = make_empty_basis(p);
  for (int i = 0; i < p.basis_size; ++i) sample_basis_column(p, i, basis);
  return basis;
}

std::uint64_t FeatureBasis::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64
  auto mix = [&h](const void* p, std::size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  };
  mix(vectors.data.data(), vectors.data.size() * sizeof(double));
  mix(weights.data(), weights.size() * sizeof(double));
  return h;
}

namespace {

constexpr char kBasisMagic[4] = {'Q', 'R', 'F', 'B'};
constexpr std::uint32_t kBasisVersion = 1;

template <typename T>
void put(std::ofstream& f, T v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::ifstream& f) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!f) throw std::runtime_error("basis file truncated");
  return v;
}

}  // namespace

void save_basis(const FeatureBasis& basis, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(kBasisMagic, 4);
  put<std::uint32_t>(f, kBasisVersion);
  int qubits = 0;
  for (int d = basis.dim; d > 1; d >>= 1) ++qubits;
  put<std::uint32_t>(f, static_cast<std::uint32_t>(qubits));
  put<std::uint32_t>(f, static_cast<std::uint32_t>(basis.size()));
  f.write(reinterpret_cast<const char*>(basis.weights.data()),
          static_cast<std::streamsize>(basis.weights.size() * sizeof(double)));
  f.write(reinterpret_cast<const char*>(basis.vectors.data.data()),
          static_cast<std::streamsize>(basis.vectors.data.size() * sizeof(double)));
  for (const Circuit& c : basis.circuits) {
    put<std::uint32_t>(f, static_cast<std::uint32_t>(c.gates.size()));
    for (const Gate& g : c.gates) {
      put<std::uint8_t>(f, g.kind == GateKind::RotationY ? 0 : 1);
      if (g.kind == GateKind::RotationY) {
        put<std::int32_t>(f, g.qubit);
        put<std::int32_t>(f, 0);
        put<double>(f, g.angle);
      } else {
        put<std::int32_t>(f, g.control);
        put<std::int32_t>(f, g.target);
        put<double>(f, 0.0);
      }
    }
  }
  if (!f) throw std::runtime_error("write failed for " + path);
}

FeatureBasis load_basis(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, kBasisMagic, 4) != 0)
    throw std::runtime_error(path + ": not a basis file (bad magic)");
  const auto version = get<std::uint32_t>(f);
  if (version != kBasisVersion)
    throw std::runtime_error(path + ": unsupported basis file version " + std::to_string(version));
  const auto qubits = get<std::uint32_t>(f);
  const auto count = get<std::uint32_t>(f);
  if (qubits < 1 || qubits > 20 || count < 1)
    throw std::runtime_error(path + ": implausible basis header");
  FeatureBasis basis;
  basis.dim = 1 << qubits;
  basis.weights.resize(count);
  f.read(reinterpret_cast<char*>(basis.weights.data()),
         static_cast<std::streamsize>(count * sizeof(double)));
  basis.vectors = Matrix(basis.dim, static_cast<int>(count));
  f.read(reinterpret_cast<char*>(basis.vectors.data.data()),
         static_cast<std::streamsize>(basis.vectors.data.size() * sizeof(double)));
  if (!f) throw std::runtime_error(path + ": truncated basis payload");
  basis.circuits.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Circuit c(static_cast<int>(qubits));
    const auto gates = get<std::uint32_t>(f);
    c.gates.reserve(gates);
    for (std::uint32_t gi = 0; gi < gates; ++gi) {
      const auto kind = get<std::uint8_t>(f);
      const auto a = get<std::int32_t>(f);
      const auto b = get<std::int32_t>(f);
      const auto angle = get<double>(f);
      if (kind == 0)
        c.gates.push_back(Gate::rotation_y(a, angle));
      else if (kind == 1)
        c.gates.push_back(Gate::cnot(a, b));
      else
        throw std::runtime_error(path + ": unknown gate kind in basis file");
    }
    validate_circuit(c);
    basis.circuits.push_back(std::move(c));
  }
  return basis;
}

}  // namespace qrf
