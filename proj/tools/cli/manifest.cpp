#include "manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <fstream>

#include "panic_lab/error.hpp"
#include "panic_lab/panel.hpp"

namespace panic_lab::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string config_digest(const nlohmann::json& resolved) {
  return sha256_hex(resolved.dump());
}

std::string utc_now_iso() {
  using namespace std::chrono;
  const auto now = floor<seconds>(system_clock::now());
  return format_iso(now.time_since_epoch().count()) + "Z";
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : output_files) files.push_back(f.filename().string());
  return {
      {"command", command},
      {"config", resolved_config},
      {"config_digest", config_digest(resolved_config)},
      {"seed", seed},
      {"tool_version", kToolVersion},
      {"output_files", files},
      {"started", started},
      {"finished", finished},
  };
}

void RunManifest::write(const std::filesystem::path& dir) const {
  const auto path = dir / "manifest.json";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json().dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace panic_lab::cli
