#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace panic_lab::cli {

inline constexpr const char* kToolVersion = "0.1.0";

std::string sha256_hex(const std::string& bytes);

// Digest of the canonical (sorted-key, compact) JSON dump.
std::string config_digest(const nlohmann::json& resolved);

std::string utc_now_iso();

struct RunManifest {
  std::string command;
  nlohmann::json resolved_config;
  std::uint64_t seed = 0;
  std::vector<std::filesystem::path> output_files;
  std::string started;
  std::string finished;

  [[nodiscard]] nlohmann::json to_json() const;
  void write(const std::filesystem::path& dir) const;
};

}  // namespace panic_lab::cli
