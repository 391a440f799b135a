#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "qrf/fetch.hpp"

#include <filesystem>
#include <memory>

#include "httplib.h"
#include "json.hpp"

namespace qrf {

namespace {

struct LockEntry {
  std::string name;
  std::string payload_sha256;
  std::uint64_t payload_bytes = 0;
};

std::vector<LockEntry> read_lockfile(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": invalid lockfile: " + e.what());
  }
  if (!j.is_object() || j.value("version", 0) != 1 || !j.contains("files"))
    throw DataError(path + ": expected {version: 1, files: [...]}");
  std::vector<LockEntry> entries;
  for (const auto& f : j.at("files")) {
    LockEntry e;
    e.name = f.at("name").get<std::string>();
    e.payload_sha256 = f.at("payload_sha256").get<std::string>();
    e.payload_bytes = f.at("payload_bytes").get<std::uint64_t>();
    if (e.name.empty() || e.name.find('/') != std::string::npos)
      throw DataError(path + ": lockfile names must be bare file names");
    entries.push_back(std::move(e));
  }
  if (entries.empty()) throw DataError(path + ": lockfile lists no files");
  return entries;
}

void verify_payload(const std::string& what, const std::vector<std::uint8_t>& raw,
                    const LockEntry& e) {
  const auto payload = gunzip_if_needed(raw);
  if (payload.size() != e.payload_bytes)
    throw DataError(what + ": payload is " + std::to_string(payload.size()) +
                    " bytes, lockfile expects " + std::to_string(e.payload_bytes));
  const std::string got = sha256_hex(payload);
  if (got != e.payload_sha256)
    throw DataError(what + ": payload sha256 " + got + " does not match lockfile " +
                    e.payload_sha256);
}

std::vector<std::uint8_t> download(const std::string& mirror, const std::string& name) {
  // Split the mirror URL into scheme://host and path prefix.
  const auto scheme_end = mirror.find("://");
  if (scheme_end == std::string::npos) throw DataError("mirror URL lacks a scheme: " + mirror);
  const std::string scheme = mirror.substr(0, scheme_end);
  const auto host_start = scheme_end + 3;
  const auto path_start = mirror.find('/', host_start);
  const std::string host = mirror.substr(host_start, path_start == std::string::npos
                                                        ? std::string::npos
                                                        : path_start - host_start);
  std::string prefix = path_start == std::string::npos ? "/" : mirror.substr(path_start);
  if (prefix.empty() || prefix.back() != '/') prefix += '/';

  std::unique_ptr<httplib::Client> client;
  if (scheme == "https") {
    client = std::make_unique<httplib::Client>(("https://" + host).c_str());
  } else if (scheme == "http") {
    client = std::make_unique<httplib::Client>(("http://" + host).c_str());
  } else {
    throw DataError("unsupported mirror scheme: " + scheme);
  }
  client->set_follow_location(true);
  client->set_connection_timeout(30);
  client->set_read_timeout(120);

  const std::string url_path = prefix + name;
  auto res = client->Get(url_path.c_str());
  if (!res)
    throw DataError("download failed for " + mirror + name + " (" +
                    httplib::to_string(res.error()) + ")");
  if (res->status != 200)
    throw DataError("download failed for " + mirror + name + " (HTTP " +
                    std::to_string(res->status) + ")");
  return std::vector<std::uint8_t>(res->body.begin(), res->body.end());
}

}  // namespace

FetchReport fetch_data(const FetchOptions& options) {
  namespace fs = std::filesystem;
  const std::string lockfile =
      options.lockfile.empty() ? options.data_dir + "/checksums.json" : options.lockfile;
  const auto entries = read_lockfile(lockfile);
  fs::create_directories(options.data_dir);

  FetchReport report;
  for (const auto& e : entries) {
    const std::string path = options.data_dir + "/" + e.name;
    if (fs::exists(path)) {
      verify_payload(path, read_file(path), e);
      ++report.already_present;
      continue;
    }
    if (options.offline)
      throw DataError(path + " is missing and offline mode is on; run a fetch with network "
                             "access or place the file there yourself");
    auto raw = download(options.mirror, e.name);
    verify_payload(options.mirror + e.name, raw, e);
    write_file(path, raw);
    ++report.downloaded;
  }
  return report;
}

}  // namespace qrf
