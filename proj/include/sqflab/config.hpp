// Calibrated-constant file and experiment config parsing.
//
// Both are the same TOML-style key = value format: one assignment per line,
// '#' comments, strings optionally double-quoted. The calibration file is
// versioned in configs/ and regenerated by `sqflab calibrate`.
#pragma once

#include <map>
#include <optional>
#include <string>

namespace sqf {

struct KeyValueFile {
  std::map<std::string, std::string> entries;

  static KeyValueFile parse(const std::string& text);
  static KeyValueFile load(const std::string& path);

  bool has(const std::string& key) const { return entries.count(key) != 0; }
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  std::optional<std::string> maybe(const std::string& key) const;

  void set(const std::string& key, const std::string& value) { entries[key] = value; }
  void set_double(const std::string& key, double value);
  void set_int(const std::string& key, long long value);

  // Deterministic rendering: sorted keys, 17 significant digits for reals.
  std::string render(const std::string& header_comment) const;
  void store(const std::string& path, const std::string& header_comment) const;
};

// Default location of the calibration file (set at build time).
std::string default_calibration_path();

}  // namespace sqf
