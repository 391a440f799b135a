#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrf/io_util.hpp"
#include "qrf/matrix.hpp"

namespace qrf {

// Raw image dataset as stored in IDX files: row-major uint8 images plus
// one uint8 label per image.
struct RawDataset {
  int count = 0;
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols
  std::vector<std::uint8_t> labels;  // count

  int pixel_count() const { return rows * cols; }
  const std::uint8_t* image(int i) const {
    return pixels.data() + static_cast<std::size_t>(i) * pixel_count();
  }
};

// Parse an IDX image/label file pair.  Gzip-compressed files are
// accepted and inflated on the fly.  Throws DataError with the offending
// file and offset on any structural problem.
RawDataset load_idx(const std::string& images_path, const std::string& labels_path);

// Write an uncompressed IDX pair (used to build test fixtures).
void write_idx(const RawDataset& data, const std::string& images_path,
               const std::string& labels_path);

// Keep only the points whose label is digit_a or digit_b, in order.
RawDataset extract_digits(const RawDataset& data, int digit_a, int digit_b);

RawDataset subset(const RawDataset& data, const std::vector<int>& indices);

// Chi-squared feature scores for a two-class dataset: per feature,
// sum over classes of (observed - expected)^2 / expected, where
// "observed" is the class-wise sum of the feature and "expected" splits
// the feature's total mass by class frequency.  Returns the indices of
// the `count` highest-scoring features in ascending index order; ties
// are broken toward the lower index.
std::vector<int> chi2_select(const RawDataset& data, int count);
std::vector<double> chi2_scores(const RawDataset& data);

// Seeded 6:1 split: shuffle 0..n-1 (Fisher-Yates), take the first
// ceil(6n/7) as the training set.  Both index lists are returned sorted.
struct Split {
  std::vector<int> train, test;
};
Split make_split(int n, std::uint64_t seed);

// Pixel columns scaled to [0, 1], restricted to the `keep` features.
// Labels map digit_a to -1 and the other digit to +1.
struct TaskDataset {
  Matrix features;          // keep.size() x count
  std::vector<int> labels;  // +-1
};
TaskDataset to_features(const RawDataset& data, const std::vector<int>& keep, int digit_a);

}  // namespace qrf
