#include "repump/manifest.hpp"

#include <fstream>

#include "json.hpp"
#include "repump/version.hpp"

namespace repump {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::string hash_hex(std::string_view data) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(data);
  std::string out = "fnv1a64:";
  for (int shift = 60; shift >= 0; shift -= 4) out += digits[(h >> shift) & 0xF];
  return out;
}

void write_manifest(const std::filesystem::path& artifact, std::string_view config_dump,
                    std::uint64_t seed) {
  nlohmann::json doc;
  doc["artifact"] = artifact.filename().string();
  doc["config_hash"] = hash_hex(config_dump);
  doc["seed"] = seed;
  doc["tool_version"] = kToolVersion;
  std::filesystem::path file = artifact;
  file += ".manifest.json";
  std::ofstream out(file);
  if (!out) throw std::runtime_error("write_manifest: cannot open " + file.string());
  out << doc.dump(2) << '\n';
}

}  // namespace repump
