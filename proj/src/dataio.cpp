#include "qrf/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "qrf/rng.hpp"

namespace qrf {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;  // uint8 data, 3 dimensions
constexpr std::uint32_t kLabelsMagic = 0x00000801;  // uint8 data, 1 dimension

std::uint32_t read_u32_be(const std::vector<std::uint8_t>& b, std::size_t off,
                          const std::string& path) {
  if (off + 4 > b.size())
    throw DataError(path + ": truncated at offset " + std::to_string(off));
  return (std::uint32_t(b[off]) << 24) | (std::uint32_t(b[off + 1]) << 16) |
         (std::uint32_t(b[off + 2]) << 8) | std::uint32_t(b[off + 3]);
}

void put_u32_be(std::vector<std::uint8_t>& b, std::uint32_t v) {
  b.push_back(static_cast<std::uint8_t>(v >> 24));
  b.push_back(static_cast<std::uint8_t>(v >> 16));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
  b.push_back(static_cast<std::uint8_t>(v));
}

}  // namespace

RawDataset load_idx(const std::string& images_path, const std::string& labels_path) {
  const auto img = gunzip_if_needed(read_file(images_path));
  const auto lab = gunzip_if_needed(read_file(labels_path));

  const std::uint32_t img_magic = read_u32_be(img, 0, images_path);
  if (img_magic != kImagesMagic)
    throw DataError(images_path + ": bad magic 0x" + [&] {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%08x", img_magic);
      return std::string(buf);
    }() + " at offset 0 (expected 0x00000803)");
  const std::uint32_t n = read_u32_be(img, 4, images_path);
  const std::uint32_t rows = read_u32_be(img, 8, images_path);
  const std::uint32_t cols = read_u32_be(img, 12, images_path);
  if (rows == 0 || cols == 0 || rows > 4096 || cols > 4096)
    throw DataError(images_path + ": implausible image shape " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  const std::size_t expect_img = 16 + std::size_t(n) * rows * cols;
  if (img.size() != expect_img)
    throw DataError(images_path + ": payload is " + std::to_string(img.size()) +
                    " bytes, header implies " + std::to_string(expect_img));

  const std::uint32_t lab_magic = read_u32_be(lab, 0, labels_path);
  if (lab_magic != kLabelsMagic)
    throw DataError(labels_path + ": bad magic at offset 0 (expected 0x00000801)");
  const std::uint32_t ln = read_u32_be(lab, 4, labels_path);
  if (lab.size() != 8 + std::size_t(ln))
    throw DataError(labels_path + ": payload is " + std::to_string(lab.size()) +
                    " bytes, header implies " + std::to_string(8 + std::size_t(ln)));
  if (ln != n)
    throw DataError(labels_path + ": " + std::to_string(ln) + " labels for " +
                    std::to_string(n) + " images");

  RawDataset d;
  d.count = static_cast<int>(n);
  d.rows = static_cast<int>(rows);
  d.cols = static_cast<int>(cols);
  d.pixels.assign(img.begin() + 16, img.end());
  d.labels.assign(lab.begin() + 8, lab.end());
  return d;
}

void write_idx(const RawDataset& data, const std::string& images_path,
               const std::string& labels_path) {
  std::vector<std::uint8_t> img;
  img.reserve(16 + data.pixels.size());
  put_u32_be(img, kImagesMagic);
  put_u32_be(img, static_cast<std::uint32_t>(data.count));
  put_u32_be(img, static_cast<std::uint32_t>(data.rows));
  put_u32_be(img, static_cast<std::uint32_t>(data.cols));
  img.insert(img.end(), data.pixels.begin(), data.pixels.end());
  write_file(images_path, img);

  std::vector<std::uint8_t> lab;
  lab.reserve(8 + data.labels.size());
  put_u32_be(lab, kLabelsMagic);
  put_u32_be(lab, static_cast<std::uint32_t>(data.count));
  lab.insert(lab.end(), data.labels.begin(), data.labels.end());
  write_file(labels_path, lab);
}

RawDataset extract_digits(const RawDataset& data, int digit_a, int digit_b) {
  if (digit_a == digit_b) throw std::invalid_argument("extract_digits: digits must differ");
  std::vector<int> idx;
  for (int i = 0; i < data.count; ++i) {
    const int l = data.labels[static_cast<std::size_t>(i)];
    if (l == digit_a || l == digit_b) idx.push_back(i);
  }
  return subset(data, idx);
}

RawDataset subset(const RawDataset& data, const std::vector<int>& indices) {
  RawDataset out;
  out.count = static_cast<int>(indices.size());
  out.rows = data.rows;
  out.cols = data.cols;
  const int px = data.pixel_count();
  out.pixels.resize(static_cast<std::size_t>(out.count) * px);
  out.labels.resize(static_cast<std::size_t>(out.count));
  for (int t = 0; t < out.count; ++t) {
    const int i = indices[static_cast<std::size_t>(t)];
    if (i < 0 || i >= data.count) throw std::out_of_range("subset: index out of range");
    std::copy_n(data.image(i), px, out.pixels.begin() + static_cast<std::size_t>(t) * px);
    out.labels[static_cast<std::size_t>(t)] = data.labels[static_cast<std::size_t>(i)];
  }
  return out;
}

std::vector<double> chi2_scores(const RawDataset& data) {
  if (data.count < 1) throw std::invalid_argument("chi2_scores: empty dataset");
  // Identify the two classes present.
  int la = -1, lb = -1;
  for (int i = 0; i < data.count; ++i) {
    const int l = data.labels[static_cast<std::size_t>(i)];
    if (la < 0)
      la = l;
    else if (l != la && lb < 0)
      lb = l;
    else if (l != la && l != lb)
      throw std::invalid_argument("chi2_scores: more than two classes present");
  }
  if (lb < 0) throw std::invalid_argument("chi2_scores: only one class present");

  const int px = data.pixel_count();
  std::vector<double> sum_a(static_cast<std::size_t>(px), 0.0);
  std::vector<double> sum_b(static_cast<std::size_t>(px), 0.0);
  std::int64_t n_a = 0, n_b = 0;
  for (int i = 0; i < data.count; ++i) {
    const bool is_a = data.labels[static_cast<std::size_t>(i)] == la;
    auto& acc = is_a ? sum_a : sum_b;
    (is_a ? n_a : n_b)++;
    const std::uint8_t* im = data.image(i);
    for (int f = 0; f < px; ++f) acc[static_cast<std::size_t>(f)] += im[f];
  }
  const double fa = static_cast<double>(n_a) / data.count;
  const double fb = static_cast<double>(n_b) / data.count;
  std::vector<double> scores(static_cast<std::size_t>(px), 0.0);
  for (int f = 0; f < px; ++f) {
    const double total = sum_a[static_cast<std::size_t>(f)] + sum_b[static_cast<std::size_t>(f)];
    if (total <= 0.0) continue;  // feature never fires: score 0
    const double ea = fa * total, eb = fb * total;
    const double da = sum_a[static_cast<std::size_t>(f)] - ea;
    const double db = sum_b[static_cast<std::size_t>(f)] - eb;
    scores[static_cast<std::size_t>(f)] = da * da / ea + db * db / eb;
  }
  return scores;
}

std::vector<int> chi2_select(const RawDataset& data, int count) {
  const std::vector<double> scores = chi2_scores(data);
  if (count < 1 || count > static_cast<int>(scores.size()))
    throw std::invalid_argument("chi2_select: count must be in 1.." +
                                std::to_string(scores.size()));
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    const double sx = scores[static_cast<std::size_t>(x)], sy = scores[static_cast<std::size_t>(y)];
    if (sx != sy) return sx > sy;
    return x < y;  // ties break toward the lower feature index
  });
  order.resize(static_cast<std::size_t>(count));
  std::sort(order.begin(), order.end());
  return order;
}

Split make_split(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("make_split: need at least one point");
  const std::vector<int> perm = random_permutation(n, seed);
  const int n_train = static_cast<int>((6LL * n + 6) / 7);  // ceil(6n/7)
  Split s;
  s.train.assign(perm.begin(), perm.begin() + n_train);
  s.test.assign(perm.begin() + n_train, perm.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

TaskDataset to_features(const RawDataset& data, const std::vector<int>& keep, int digit_a) {
  const int px = data.pixel_count();
  for (int f : keep)
    if (f < 0 || f >= px) throw std::out_of_range("to_features: feature index out of range");
  TaskDataset t;
  t.features = Matrix(static_cast<int>(keep.size()), data.count);
  t.labels.resize(static_cast<std::size_t>(data.count));
  for (int j = 0; j < data.count; ++j) {
    const std::uint8_t* im = data.image(j);
    double* col = t.features.col(j);
    for (std::size_t r = 0; r < keep.size(); ++r)
      col[r] = static_cast<double>(im[keep[r]]) / 255.0;
    t.labels[static_cast<std::size_t>(j)] =
        data.labels[static_cast<std::size_t>(j)] == digit_a ? -1 : 1;
  }
  return t;
}

}  // namespace qrf
