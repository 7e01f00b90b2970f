#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace irsa {

/// Malformed or out-of-domain configuration.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Flat "key = value" parameters. '#' starts a comment. Keys outside
/// `allowed` are rejected on parse.
class RunConfig
{
public:
  static RunConfig parse(std::istream& in, const std::set<std::string>& allowed);
  static RunConfig load(const std::string& path, const std::set<std::string>& allowed);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

  std::string text(const std::string& key, const std::string& fallback) const;
  double real(const std::string& key, double fallback) const;
  std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  std::vector<double> grid(const std::string& key) const;
  std::vector<std::string> list(const std::string& key) const;

private:
  std::map<std::string, std::string> values_;
};

/// "a,b,c" or "start:stop:step" (stop inclusive). Empty text gives an empty grid.
std::vector<double> parse_grid(std::string_view text);

/// Splits on commas and trims whitespace; empty items are dropped.
std::vector<std::string> split_list(std::string_view text);

/// A CSV file as written by the tools: '#' lines are skipped, the first
/// remaining line is the header.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);

}  // namespace irsa
