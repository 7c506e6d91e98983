#include "softcap/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace softcap {

namespace {

std::string locate(int line, const std::string& message, const std::string& source) {
  std::string where = source;
  if (line > 0) where += (where.empty() ? "line " : ":") + std::to_string(line);
  return where.empty() ? message : where + ": " + message;
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& message, const std::string& source)
    : std::runtime_error(locate(line, message, source)), line_(line), message_(message) {}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  return std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

double to_double(const std::string& s, int line, const std::string& key) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError(line, "key '" + key + "': expected a number, got '" + s + "'");
  }
  return v;
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::string_view text) {
  KeyValueFile f;
  std::string section;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    // Strip comments outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(line_no, "unterminated section header");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      if (!valid_key(section)) throw ConfigError(line_no, "invalid section name '" + section + "'");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (!valid_key(key)) throw ConfigError(line_no, "invalid key '" + key + "'");
    if (value.empty()) throw ConfigError(line_no, "missing value for '" + key + "'");
    const std::string full = section.empty() ? key : section + "." + key;
    if (f.entries_.count(full)) {
      throw ConfigError(line_no, "duplicate key '" + full + "' (first on line " +
                                     std::to_string(f.entries_[full].line) + ")");
    }
    f.entries_[full] = Entry{value, line_no};
  }
  return f;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(e.line(), e.message(), path);
  }
}

std::vector<std::string> KeyValueFile::keys() const {
  std::vector<std::string> k;
  for (const auto& [key, _] : entries_) k.push_back(key);
  return k;
}

const KeyValueFile::Entry& KeyValueFile::entry(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(0, "missing required key '" + key + "'");
  return it->second;
}

int KeyValueFile::line_of(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

double KeyValueFile::get_double(const std::string& key) const {
  const Entry& e = entry(key);
  return to_double(e.raw, e.line, key);
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long KeyValueFile::get_int(const std::string& key) const {
  const Entry& e = entry(key);
  char* end = nullptr;
  const long long v = std::strtoll(e.raw.c_str(), &end, 10);
  if (end != e.raw.c_str() + e.raw.size()) {
    throw ConfigError(e.line, "key '" + key + "': expected an integer, got '" + e.raw + "'");
  }
  return v;
}

long long KeyValueFile::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const Entry& e = entry(key);
  if (e.raw == "true") return true;
  if (e.raw == "false") return false;
  throw ConfigError(e.line, "key '" + key + "': expected true or false");
}

std::string KeyValueFile::get_string(const std::string& key) const {
  const Entry& e = entry(key);
  if (e.raw.size() >= 2 && e.raw.front() == '"' && e.raw.back() == '"') {
    return e.raw.substr(1, e.raw.size() - 2);
  }
  return e.raw;
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

std::vector<double> KeyValueFile::get_array(const std::string& key) const {
  const Entry& e = entry(key);
  if (e.raw.size() < 2 || e.raw.front() != '[' || e.raw.back() != ']') {
    throw ConfigError(e.line, "key '" + key + "': expected an array [a, b, ...]");
  }
  std::vector<double> out;
  const std::string body = e.raw.substr(1, e.raw.size() - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) throw ConfigError(e.line, "key '" + key + "': empty array element");
    out.push_back(to_double(t, e.line, key));
  }
  return out;
}

std::vector<double> KeyValueFile::get_array(const std::string& key, std::size_t expected) const {
  std::vector<double> v = get_array(key);
  if (v.size() != expected) {
    throw ConfigError(line_of(key), "key '" + key + "': expected " + std::to_string(expected) +
                                        " elements, got " + std::to_string(v.size()));
  }
  return v;
}

void KeyValueFile::reject_unknown(const std::vector<std::string>& known) const {
  for (const auto& [key, e] : entries_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(e.line, "unknown key '" + key + "'");
    }
  }
}

}  // namespace softcap
