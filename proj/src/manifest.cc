#include "wiser/manifest.h"

#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "json.hpp"
#include "wiser/corpus.h"

namespace wiser {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* kHex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 15]);
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  return sha256_hex(read_text_file(path));
}

void RunManifest::add_input(const std::filesystem::path& path) {
  inputs[path.string()] = sha256_file(path);
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config"] = config;
  j["inputs"] = inputs;
  j["version"] = kToolVersion;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << manifest.to_json();
}

}  // namespace wiser
