#include "irsa/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace irsa {

namespace {

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double to_real(std::string_view text, std::string_view what)
{
  const std::string s(trim(text));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || !std::isfinite(v)) {
    throw ConfigError("'" + std::string(what) + "': not a number: '" + s + "'");
  }
  return v;
}

}  // namespace

RunConfig RunConfig::parse(std::istream& in, const std::set<std::string>& allowed)
{
  RunConfig cfg;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) {
      continue;
    }
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key(trim(view.substr(0, eq)));
    if (allowed.count(key) == 0) {
      throw ConfigError("line " + std::to_string(number) + ": unknown key '" + key + "'");
    }
    if (cfg.has(key)) {
      throw ConfigError("line " + std::to_string(number) + ": duplicate key '" + key + "'");
    }
    cfg.values_[key] = std::string(trim(view.substr(eq + 1)));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path, const std::set<std::string>& allowed)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  return parse(in, allowed);
}

std::string RunConfig::text(const std::string& key, const std::string& fallback) const
{
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double RunConfig::real(const std::string& key, double fallback) const
{
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : to_real(it->second, key);
}

std::int64_t RunConfig::integer(const std::string& key, std::int64_t fallback) const
{
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return fallback;
  }
  const auto s = trim(it->second);
  std::int64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
    // Allow integral values in scientific notation such as 1e9.
    const double d = to_real(s, key);
    if (d != std::floor(d) || std::fabs(d) > 9.2e18) {
      throw ConfigError("'" + key + "': not an integer: '" + std::string(s) + "'");
    }
    return static_cast<std::int64_t>(d);
  }
  return v;
}

std::vector<double> RunConfig::grid(const std::string& key) const
{
  try {
    return parse_grid(text(key, ""));
  } catch (const ConfigError& e) {
    throw ConfigError("'" + key + "': " + e.what());
  }
}

std::vector<std::string> RunConfig::list(const std::string& key) const
{
  return split_list(text(key, ""));
}

std::vector<double> parse_grid(std::string_view text)
{
  text = trim(text);
  std::vector<double> out;
  if (text.empty()) {
    return out;
  }
  if (text.find(':') != std::string_view::npos) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
      const auto colon = text.find(':', start);
      parts.push_back(to_real(text.substr(start, colon - start), "grid"));
      if (colon == std::string_view::npos) {
        break;
      }
      start = colon + 1;
    }
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
      throw ConfigError("range must be start:stop:step with step > 0 and stop >= start");
    }
    const auto steps = static_cast<long long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    if (steps > 10000000) {
      throw ConfigError("range has too many points");
    }
    for (long long i = 0; i <= steps; ++i) {
      out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
    }
    return out;
  }
  for (const auto& item : split_list(text)) {
    out.push_back(to_real(item, "grid"));
  }
  return out;
}

std::vector<std::string> split_list(std::string_view text)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) {
      out.emplace_back(item);
    }
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line)
{
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  cells.push_back(cell);
  return cells;
}

}  // namespace

std::size_t CsvTable::column(std::string_view name) const
{
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw ConfigError("missing CSV column '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(std::istream& in)
{
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      table.comments.push_back(line);
      continue;
    }
    if (line.empty()) {
      continue;
    }
    auto cells = split_csv_line(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
    } else {
      if (cells.size() != table.header.size()) {
        throw ConfigError("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                          std::to_string(table.header.size()));
      }
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

}  // namespace irsa
