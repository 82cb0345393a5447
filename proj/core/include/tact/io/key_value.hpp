#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tact {

/// Plain-text `key = value` file. Blank lines and lines starting with '#'
/// are ignored; later keys override earlier ones.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in);
  static KeyValueConfig load(const std::filesystem::path& path);

  bool contains(const std::string& key) const { return entries_.contains(key); }
  std::optional<std::string> raw(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }
  void set(const std::string& key, double value);
  void set(const std::string& key, std::int64_t value) { entries_[key] = std::to_string(value); }
  void set(const std::string& key, std::uint64_t value) { entries_[key] = std::to_string(value); }
  void set(const std::string& key, int value) { entries_[key] = std::to_string(value); }
  void set(const std::string& key, bool value) { entries_[key] = value ? "true" : "false"; }
  void set(const std::string& key, const char* value) { entries_[key] = value; }

  /// Keys not in `known`, for typo detection.
  std::vector<std::string> unknown_keys(const std::vector<std::string>& known) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

  void write(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;

 private:
  std::map<std::string, std::string> entries_;
};

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace tact
