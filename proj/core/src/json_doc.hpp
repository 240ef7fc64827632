#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "twinex/errors.hpp"

namespace twinex::detail {

using ojson = nlohmann::ordered_json;

// A parsed JSON file that remembers on which line every object key sits, so
// schema errors can point at the offending field.
class JsonDoc {
 public:
  static JsonDoc load(const std::string& path);
  static JsonDoc parse(const std::string& text, const std::string& origin);

  const ojson& root() const { return root_; }
  const std::string& text() const { return text_; }

  [[noreturn]] void fail(const std::string& field, const std::string& what) const;
  int line_of(const std::string& field) const;

 private:
  std::string origin_;
  std::string text_;
  ojson root_;
  std::map<std::string, int> lines_;
};

// Typed accessors over one object. `prefix` is the path of the object itself.
class Fields {
 public:
  Fields(const JsonDoc& doc, const ojson& obj, std::string prefix);

  bool has(const std::string& key) const { return obj_.contains(key); }
  std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  bool boolean_or(const std::string& key, bool fallback) const;
  std::string string(const std::string& key) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key, std::size_t expected_size = 0) const;
  const ojson& node(const std::string& key) const;

  // Rejects keys outside `allowed`; a key that is a unit-less spelling of an
  // allowed suffixed key gets a dedicated message.
  void only(const std::vector<std::string>& allowed) const;

  [[noreturn]] void fail(const std::string& key, const std::string& what) const { doc_.fail(path(key), what); }

 private:
  const JsonDoc& doc_;
  const ojson& obj_;
  std::string prefix_;
};

}  // namespace twinex::detail
