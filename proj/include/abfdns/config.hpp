#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace abfdns {

/// Error in configuration contents (missing key, bad value, unknown key).
/// Maps to exit code 2 in the CLI.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Flat "section.key = value" text configuration. '#' starts a comment,
/// blank lines are ignored, later assignments win. Values are whitespace-
/// separated tokens.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, std::size_t count) const;
  std::vector<double> get_doubles(const std::string& key, std::size_t count,
                                  const std::vector<double>& fallback) const;
  std::vector<int> get_ints(const std::string& key, const std::vector<int>& fallback) const;

  /// Keys in deterministic (sorted) order with their raw values.
  const std::map<std::string, std::string>& entries() const { return values_; }

  /// Reject keys outside the given set (catches typos early).
  void require_known_keys(const std::vector<std::string>& known) const;

  /// FNV-1a hash of the canonical "key=value\n" listing; stamped into CSV
  /// metadata for provenance.
  std::uint64_t hash() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace abfdns
