#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace magtb {

inline constexpr const char* kVersion = "0.1.0";

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

// Metadata embedded in every artifact. The wall-clock timestamp is recorded
// only in the run manifest.
struct ArtifactMeta {
  std::string command;
  std::string config_hash;
  std::string version = kVersion;
};

nlohmann::json to_json(const ArtifactMeta& m);

// ISO-8601 UTC, second resolution.
std::string utc_timestamp();

// Prefixes `body` (which must start with its header row) with one
// '#'-comment line holding the metadata JSON.
std::string with_csv_meta(const ArtifactMeta& meta, const std::string& body);
// Object payloads gain a top-level "meta" key; anything else is wrapped as
// {"data": ..., "meta": ...}. Pretty-printed with a trailing newline.
std::string with_json_meta(const ArtifactMeta& meta, const nlohmann::json& data);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

struct CsvTable {
  nlohmann::json meta = nlohmann::json::object();  // merged '#' lines that parse as JSON objects
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
  std::vector<double> numeric(const std::string& name) const;
};

// Comma-separated, first non-comment line is the header. Throws
// ArgumentError on ragged rows.
CsvTable parse_csv(const std::string& text);

}  // namespace magtb
