#include "json_doc.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

namespace twinex::detail {
namespace {

struct KeyPos {
  std::string key;
  int line;
};

// Object keys in document order with their line numbers.
std::vector<KeyPos> scan_keys(const std::string& t) {
  std::vector<KeyPos> keys;
  int line = 1;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == '\n') ++line;
    if (t[i] != '"') continue;
    const int start_line = line;
    std::string s;
    std::size_t j = i + 1;
    for (; j < t.size() && t[j] != '"'; ++j) {
      if (t[j] == '\\' && j + 1 < t.size()) s += t[j++];
      if (t[j] == '\n') ++line;
      s += t[j];
    }
    std::size_t k = j + 1;
    while (k < t.size() && std::isspace(static_cast<unsigned char>(t[k]))) {
      if (t[k] == '\n') ++line;
      ++k;
    }
    if (k < t.size() && t[k] == ':') keys.push_back({s, start_line});
    i = k - 1;
  }
  return keys;
}

}  // namespace

JsonDoc JsonDoc::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

JsonDoc JsonDoc::parse(const std::string& text, const std::string& origin) {
  JsonDoc d;
  d.origin_ = origin;
  d.text_ = text;
  try {
    d.root_ = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw ConfigError(origin + ":" + std::to_string(line) + ": malformed JSON");
  }
  if (!d.root_.is_object()) throw ConfigError(origin + ":1: top level must be an object");
  const auto keys = scan_keys(text);
  std::size_t next = 0;
  std::function<void(const ojson&, const std::string&)> walk = [&](const ojson& j, const std::string& p) {
    if (j.is_object()) {
      for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string child = p.empty() ? it.key() : p + "." + it.key();
        // advance to the matching key in document order
        while (next < keys.size() && keys[next].key != it.key()) ++next;
        if (next < keys.size()) d.lines_[child] = keys[next++].line;
        walk(it.value(), child);
      }
    } else if (j.is_array()) {
      for (std::size_t i = 0; i < j.size(); ++i) walk(j[i], p + "[" + std::to_string(i) + "]");
    }
  };
  walk(d.root_, "");
  return d;
}

int JsonDoc::line_of(const std::string& field) const {
  // fall back to the closest enclosing field that has a line
  std::string f = field;
  while (!f.empty()) {
    if (auto it = lines_.find(f); it != lines_.end()) return it->second;
    const auto cut = f.find_last_of(".[");
    if (cut == std::string::npos) break;
    f.resize(cut);
  }
  return 1;
}

void JsonDoc::fail(const std::string& field, const std::string& what) const {
  throw ConfigError(origin_ + ":" + std::to_string(line_of(field)) + ": field '" + field + "': " + what);
}

Fields::Fields(const JsonDoc& doc, const ojson& obj, std::string prefix)
    : doc_(doc), obj_(obj), prefix_(std::move(prefix)) {
  if (!obj_.is_object()) doc_.fail(prefix_, "must be an object");
}

const ojson& Fields::node(const std::string& key) const {
  if (!obj_.contains(key)) fail(key, "missing required field");
  return obj_.at(key);
}

double Fields::number(const std::string& key) const {
  const ojson& n = node(key);
  if (!n.is_number()) fail(key, "must be a number");
  return n.get<double>();
}

double Fields::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

bool Fields::boolean_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const ojson& n = node(key);
  if (!n.is_boolean()) fail(key, "must be true or false");
  return n.get<bool>();
}

std::string Fields::string(const std::string& key) const {
  const ojson& n = node(key);
  if (!n.is_string()) fail(key, "must be a string");
  return n.get<std::string>();
}

std::string Fields::string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? string(key) : fallback;
}

std::vector<double> Fields::numbers(const std::string& key, std::size_t expected_size) const {
  const ojson& n = node(key);
  if (!n.is_array()) fail(key, "must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : n) {
    if (!v.is_number()) fail(key, "must be an array of numbers");
    out.push_back(v.get<double>());
  }
  if (expected_size && out.size() != expected_size)
    fail(key, "must have " + std::to_string(expected_size) + " entries");
  return out;
}

void Fields::only(const std::vector<std::string>& allowed) const {
  static const std::vector<std::string> suffixes{"_cm1", "_fs", "_debye", "_angstrom"};
  for (auto it = obj_.begin(); it != obj_.end(); ++it) {
    const std::string& k = it.key();
    if (std::find(allowed.begin(), allowed.end(), k) != allowed.end()) continue;
    for (const auto& a : allowed)
      for (const auto& s : suffixes)
        if (a == k + s) fail(k, "missing unit suffix, expected '" + a + "'");
    for (const auto& a : allowed) {
      const auto us = a.rfind('_');
      if (us != std::string::npos && k.rfind(a.substr(0, us) + "_", 0) == 0)
        fail(k, "wrong unit tag, expected '" + a + "'");
    }
    fail(k, "unknown field");
  }
}

}  // namespace twinex::detail
