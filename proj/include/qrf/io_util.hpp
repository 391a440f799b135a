#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrf {

// Error class for missing or corrupt data files; the command-line tool
// maps it to its own exit code.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

// Transparently inflate gzip/zlib streams; pass through anything else.
std::vector<std::uint8_t> gunzip_if_needed(const std::vector<std::uint8_t>& bytes);

std::string sha256_hex(const std::vector<std::uint8_t>& bytes);

}  // namespace qrf
