#include "sqflab/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sqf {

static std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

KeyValueFile KeyValueFile::parse(const std::string& text) {
  KeyValueFile kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: line " + std::to_string(lineno) + " is not key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (key.empty()) throw std::runtime_error("config: empty key at line " + std::to_string(lineno));
    kv.entries[key] = value;
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string KeyValueFile::get_string(const std::string& key) const {
  auto it = entries.find(key);
  if (it == entries.end()) throw std::runtime_error("config: missing key '" + key + "'");
  return it->second;
}

double KeyValueFile::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  size_t used = 0;
  double out = std::stod(v, &used);
  if (used != v.size()) throw std::runtime_error("config: key '" + key + "' is not a real number");
  return out;
}

long long KeyValueFile::get_int(const std::string& key) const {
  const std::string v = get_string(key);
  size_t used = 0;
  long long out = std::stoll(v, &used);
  if (used != v.size()) throw std::runtime_error("config: key '" + key + "' is not an integer");
  return out;
}

std::optional<std::string> KeyValueFile::maybe(const std::string& key) const {
  auto it = entries.find(key);
  if (it == entries.end()) return std::nullopt;
  return it->second;
}

void KeyValueFile::set_double(const std::string& key, double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  entries[key] = buf;
}

void KeyValueFile::set_int(const std::string& key, long long value) {
  entries[key] = std::to_string(value);
}

std::string KeyValueFile::render(const std::string& header_comment) const {
  std::ostringstream out;
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  for (const auto& [key, value] : entries) {
    bool quoted = value.find_first_not_of("0123456789+-.eE") != std::string::npos;
    out << key << " = ";
    if (quoted) out << '"' << value << '"';
    else out << value;
    out << "\n";
  }
  return out.str();
}

void KeyValueFile::store(const std::string& path, const std::string& header_comment) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("config: cannot write " + path);
  out << render(header_comment);
}

std::string default_calibration_path() {
#ifdef SQFLAB_SOURCE_DIR
  return std::string(SQFLAB_SOURCE_DIR) + "/configs/calibration.toml";
#else
  return "configs/calibration.toml";
#endif
}

}  // namespace sqf
