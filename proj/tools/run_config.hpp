#pragma once

// `key = value` configuration files: UTF-8 text, one pair per line, `#` starts
// a comment, keys restricted to a fixed per-command schema.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "barotherm/vec3.hpp"

namespace barotherm::cli {

class RunConfig {
 public:
  /// Throws DomainError on malformed lines, duplicate keys or keys outside `schema`.
  static RunConfig parse(std::string_view text, const std::set<std::string>& schema);
  static RunConfig load(const std::string& path, const std::set<std::string>& schema);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::optional<double> number(const std::string& key) const;
  std::optional<long> integer(const std::string& key) const;
  std::optional<Vec3> vector3(const std::string& key) const;
  std::optional<std::string> text(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace barotherm::cli
