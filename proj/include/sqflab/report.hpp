// Report tables, CSV/JSON emission, and run manifests.
//
// Emission is deterministic: fixed column order, rationals as "num/den",
// reals with 17 significant digits, LF line endings. Identical config and
// tool version must produce byte-identical files.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sqflab/rational.hpp"

namespace sqf {

std::string format_real(double value);          // 17 significant digits
std::string format_rat(const Rat& value);       // "num/den" (or "num" when integral)

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

std::string to_csv(const Table& table);
std::string to_json(const Table& table);  // array of records, keys in column order

std::uint64_t fnv1a(const std::string& bytes);

struct ManifestEntry {
  std::string path;
  std::uint64_t digest = 0;  // FNV-1a of the file bytes
};

struct RunManifest {
  std::string tool_version;
  std::uint64_t config_hash = 0;
  std::string started;
  std::string finished;
  std::uint64_t master_seed = 0;
  std::vector<ManifestEntry> outputs;
};

std::string manifest_json(const RunManifest& manifest);

void write_file(const std::string& path, const std::string& content);

}  // namespace sqf
