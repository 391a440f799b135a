#pragma once

#include <string>

#include "qrf/io_util.hpp"

namespace qrf {

// Data files are pinned by a JSON lockfile listing, per file, the SHA-256
// and byte count of the *decompressed* payload, so the check is
// independent of gzip metadata and of which mirror served the bytes.
struct FetchOptions {
  std::string data_dir = "data/mnist";
  std::string lockfile;  // defaults to <data_dir>/checksums.json
  std::string mirror = "https://ossci-datasets.s3.amazonaws.com/mnist/";
  bool offline = false;  // never touch the network; missing files become errors
};

struct FetchReport {
  int already_present = 0;
  int downloaded = 0;
};

// Ensure every file in the lockfile exists in data_dir with a matching
// payload checksum.  Existing files are verified (a mismatch is a hard
// DataError, the file is left in place for inspection); missing files
// are downloaded from the mirror and verified before being written.
FetchReport fetch_data(const FetchOptions& options);

}  // namespace qrf
