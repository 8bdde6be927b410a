#include "sqflab/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sqf {

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_rat(const Rat& value) { return rat_string(value); }

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("Table: row width mismatch");
  rows.push_back(std::move(row));
}

static bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n") != std::string::npos;
}

std::string to_csv(const Table& table) {
  std::ostringstream out;
  auto emit_cell = [&](const std::string& cell) {
    if (!needs_quoting(cell)) { out << cell; return; }
    out << '"';
    for (char c : cell) {
      if (c == '"') out << '"';
      out << c;
    }
    out << '"';
  };
  for (size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    emit_cell(table.columns[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      emit_cell(row[i]);
    }
    out << '\n';
  }
  return out.str();
}

std::string to_json(const Table& table) {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec;
    for (size_t i = 0; i < table.columns.size(); ++i) rec[table.columns[i]] = row[i];
    records.push_back(std::move(rec));
  }
  return records.dump(2) + "\n";
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool_version"] = m.tool_version;
  j["config_hash"] = m.config_hash;
  j["started"] = m.started;
  j["finished"] = m.finished;
  j["master_seed"] = m.master_seed;
  nlohmann::ordered_json outs = nlohmann::ordered_json::array();
  for (const auto& e : m.outputs) {
    nlohmann::ordered_json rec;
    rec["path"] = e.path;
    rec["digest"] = e.digest;
    outs.push_back(std::move(rec));
  }
  j["outputs"] = std::move(outs);
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace sqf
