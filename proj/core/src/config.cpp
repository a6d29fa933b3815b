#include "mor/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mor {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

void ConfigSection::set(const std::string& key, std::string value, int line) {
  if (values_.count(key)) {
    fail(line, "duplicate key '" + key + "' in section [" + name_ + "]");
  }
  values_[key] = {std::move(value), line};
}

std::string ConfigSection::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    fail(line_, "section [" + name_ + "] is missing required key '" + key + "'");
  }
  return it->second.first;
}

std::string ConfigSection::get_string(const std::string& key,
                                      const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second.first;
}

double ConfigSection::get_double(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    fail(line_, "section [" + name_ + "] is missing required key '" + key + "'");
  }
  const std::string& text = it->second.first;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    fail(it->second.second, "expected a number for '" + key + "', got '" + text + "'");
  }
  return v;
}

double ConfigSection::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int ConfigSection::get_int(const std::string& key) const {
  const double v = get_double(key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    fail(values_.at(key).second, "expected an integer for '" + key + "'");
  }
  return i;
}

int ConfigSection::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t ConfigSection::get_uint64(const std::string& key,
                                        std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string& text = values_.at(key).first;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0') {
    fail(values_.at(key).second, "expected an unsigned integer for '" + key + "'");
  }
  return v;
}

bool ConfigSection::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = values_.at(key).first;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(values_.at(key).second, "expected a boolean for '" + key + "'");
}

std::vector<double> ConfigSection::get_doubles(const std::string& key) const {
  const std::string text = get_string(key);
  std::istringstream in(text);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') {
      fail(values_.at(key).second,
           "expected a list of numbers for '" + key + "', got '" + tok + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    fail(values_.at(key).second, "expected a nonempty list for '" + key + "'");
  }
  return out;
}

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile file;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) fail(line_no, "empty section name");
      file.sections_.emplace_back(name, line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(line_no, "expected 'key = value', got '" + line + "'");
    }
    if (file.sections_.empty()) {
      fail(line_no, "key outside of any [section]");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    file.sections_.back().set(key, value, line_no);
  }
  return file;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

const ConfigSection* ConfigFile::find(const std::string& name) const {
  for (const auto& s : sections_) {
    if (s.name() == name) return &s;
  }
  return nullptr;
}

std::vector<const ConfigSection*> ConfigFile::all(const std::string& name) const {
  std::vector<const ConfigSection*> out;
  for (const auto& s : sections_) {
    if (s.name() == name) out.push_back(&s);
  }
  return out;
}

std::string ConfigFile::canonical() const {
  std::ostringstream out;
  for (const auto& s : sections_) {
    out << '[' << s.name() << "]\n";
    for (const auto& [key, value] : s.values()) {
      out << key << '=' << value.first << '\n';
    }
  }
  return out.str();
}

std::uint64_t config_hash(const ConfigFile& file) {
  const std::string text = file.canonical();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace mor
