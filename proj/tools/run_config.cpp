#include "run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "barotherm/errors.hpp"

namespace barotherm::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw DomainError("config key '" + key + "': expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

RunConfig RunConfig::parse(std::string_view text, const std::set<std::string>& schema) {
  RunConfig cfg;
  int line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw DomainError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      throw DomainError("config line " + std::to_string(line_no) + ": empty key or value");
    }
    if (!schema.count(key)) {
      throw DomainError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!cfg.values_.emplace(key, value).second) {
      throw DomainError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path, const std::set<std::string>& schema) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), schema);
}

std::optional<double> RunConfig::number(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return parse_double(key, it->second);
}

std::optional<long> RunConfig::integer(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  const std::string_view s = trim(it->second);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DomainError("config key '" + key + "': expected an integer, got '" + it->second + "'");
  }
  return v;
}

std::optional<Vec3> RunConfig::vector3(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  std::string s = it->second;
  for (char& ch : s) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream in(s);
  Vec3 v{};
  std::string token;
  int n = 0;
  while (in >> token) {
    if (n == 3) throw DomainError("config key '" + key + "': expected three components");
    v[static_cast<std::size_t>(n++)] = parse_double(key, token);
  }
  if (n != 3) throw DomainError("config key '" + key + "': expected three components");
  return v;
}

std::optional<std::string> RunConfig::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

}  // namespace barotherm::cli
