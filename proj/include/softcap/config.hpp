#pragma once

// Minimal TOML-style key-value files:
//
//   # comment
//   [section]
//   key = 1.5
//   vec = [0.0, 0.0, 2.7]
//   name = "text"
//   flag = true
//
// Keys are addressed as "section.key". Errors carry the source line.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace softcap {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message, const std::string& source = "");
  int line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  int line_;
  std::string message_;
};

class KeyValueFile {
 public:
  static KeyValueFile parse(std::string_view text);
  static KeyValueFile load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::vector<std::string> keys() const;

  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_array(const std::string& key) const;
  std::vector<double> get_array(const std::string& key, std::size_t expected_size) const;
  int line_of(const std::string& key) const;

  // Unknown keys are typos in practice; callers pass the keys they accept.
  void reject_unknown(const std::vector<std::string>& known) const;

 private:
  struct Entry {
    std::string raw;
    int line = 0;
  };
  const Entry& entry(const std::string& key) const;
  std::map<std::string, Entry> entries_;
};

}  // namespace softcap
