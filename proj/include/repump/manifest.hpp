#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace repump {

std::uint64_t fnv1a64(std::string_view data);
std::string hash_hex(std::string_view data);

// Writes <artifact>.manifest.json next to the artifact, recording the config
// hash, the effective master seed, and the tool version. No timestamps, so
// reruns stay byte-identical.
void write_manifest(const std::filesystem::path& artifact, std::string_view config_dump,
                    std::uint64_t seed);

}  // namespace repump
