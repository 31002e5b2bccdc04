#pragma once

// Strict-schema helpers shared by the config readers. Every key read from an
// object is recorded; `finish()` rejects whatever was not consumed.

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "dram3d/error.hpp"

namespace dram3d::detail {

using Json = nlohmann::ordered_json;

inline Json parse_document(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

inline std::string join_path(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

class StrictObject {
 public:
  StrictObject(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      throw ValidationError(path_.empty() ? "<root>" : path_, "expected an object");
    }
  }

  const std::string& path() const { return path_; }
  std::string field(std::string_view key) const { return join_path(path_, key); }

  bool has(std::string_view key) const {
    auto it = j_.find(std::string(key));
    return it != j_.end() && !it->is_null();
  }

  const Json& child(std::string_view key) {
    const Json* c = opt_child(key);
    if (c == nullptr) throw ValidationError(field(key), "missing required field");
    return *c;
  }

  const Json* opt_child(std::string_view key) {
    std::string k(key);
    used_.insert(k);
    auto it = j_.find(k);
    if (it == j_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  double number(std::string_view key) { return as_number(child(key), key); }

  std::optional<double> opt_number(std::string_view key) {
    const Json* c = opt_child(key);
    if (c == nullptr) return std::nullopt;
    return as_number(*c, key);
  }

  double number_or(std::string_view key, double fallback) {
    return opt_number(key).value_or(fallback);
  }

  int integer(std::string_view key) { return as_integer(child(key), key); }

  std::optional<int> opt_integer(std::string_view key) {
    const Json* c = opt_child(key);
    if (c == nullptr) return std::nullopt;
    return as_integer(*c, key);
  }

  std::string string(std::string_view key) { return as_string(child(key), key); }

  std::optional<std::string> opt_string(std::string_view key) {
    const Json* c = opt_child(key);
    if (c == nullptr) return std::nullopt;
    return as_string(*c, key);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.contains(it.key())) {
        throw ValidationError(field(it.key()), "unknown key");
      }
    }
  }

 private:
  double as_number(const Json& v, std::string_view key) const {
    if (!v.is_number()) throw ValidationError(field(key), "expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError(field(key), "must be finite");
    return d;
  }

  int as_integer(const Json& v, std::string_view key) const {
    if (!v.is_number_integer()) throw ValidationError(field(key), "expected an integer");
    return v.get<int>();
  }

  std::string as_string(const Json& v, std::string_view key) const {
    if (!v.is_string()) throw ValidationError(field(key), "expected a string");
    return v.get<std::string>();
  }

  const Json& j_;
  std::string path_;
  std::set<std::string> used_;
};

inline const Json& expect_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path, "expected an array");
  return j;
}

}  // namespace dram3d::detail
