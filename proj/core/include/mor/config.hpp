#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mor {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat structured text: [section] headers followed by key = value pairs,
/// '#' comments, no nesting. Line numbers are kept for error messages.
class ConfigSection {
 public:
  ConfigSection(std::string name, int line) : name_(std::move(name)), line_(line) {}

  const std::string& name() const { return name_; }
  int line() const { return line_; }

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, std::string value, int line);

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;

  const std::map<std::string, std::pair<std::string, int>>& values() const {
    return values_;
  }

 private:
  std::string name_;
  int line_;
  std::map<std::string, std::pair<std::string, int>> values_;
};

class ConfigFile {
 public:
  static ConfigFile parse(const std::string& text);
  static ConfigFile load(const std::filesystem::path& path);

  const std::vector<ConfigSection>& sections() const { return sections_; }
  const ConfigSection* find(const std::string& name) const;
  std::vector<const ConfigSection*> all(const std::string& name) const;

  /// Sections and keys in a normalized order, for hashing.
  std::string canonical() const;

 private:
  std::vector<ConfigSection> sections_;
};

/// FNV-1a over the canonical text.
std::uint64_t config_hash(const ConfigFile& file);

}  // namespace mor
