#ifndef WISER_MANIFEST_H_
#define WISER_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace wiser {

inline constexpr std::string_view kToolVersion = "1.0.0";

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

// Everything needed to reproduce a run. No timestamps or host details, so
// equal manifests are byte-identical.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> inputs;  // path -> sha256
  uint64_t seed = 0;

  void add_input(const std::filesystem::path& path);
  std::string to_json() const;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace wiser

#endif  // WISER_MANIFEST_H_
