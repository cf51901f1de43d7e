#include "heis/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace heis {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ConfigError("expected a number for " + what + ", got '" + s + "'");
  return v;
}

}  // namespace

Config Config::parse_string(const std::string& text) {
  Config cfg;
  cfg.sections_.emplace_back("", Section{});
  std::size_t current = 0;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", lineno);
      std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError("empty section name", lineno);
      current = cfg.sections_.size();
      for (std::size_t i = 0; i < cfg.sections_.size(); ++i)
        if (cfg.sections_[i].first == name) current = i;
      if (current == cfg.sections_.size()) cfg.sections_.emplace_back(name, Section{});
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", lineno);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", lineno);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    cfg.sections_[current].second.emplace_back(key, value);
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

const std::string* Config::find(const std::string& section, const std::string& key) const {
  for (const auto& [name, entries] : sections_) {
    if (name != section) continue;
    for (const auto& [k, v] : entries)
      if (k == key) return &v;
  }
  return nullptr;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  for (auto& [name, entries] : sections_) {
    if (name != section) continue;
    for (auto& [k, v] : entries) {
      if (k == key) {
        v = value;
        return;
      }
    }
    entries.emplace_back(key, value);
    return;
  }
  sections_.emplace_back(section, Section{{key, value}});
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  const std::string* v = find(section, key);
  if (!v)
    throw ConfigError("missing required key '" + key + "'" +
                      (section.empty() ? "" : " in section [" + section + "]"));
  return *v;
}

std::string Config::get_string_or(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
  const std::string* v = find(section, key);
  return v ? *v : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  return to_double(get_string(section, key), key);
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  const std::string* v = find(section, key);
  return v ? to_double(*v, key) : fallback;
}

long long Config::get_int(const std::string& section, const std::string& key) const {
  double v = get_double(section, key);
  auto r = static_cast<long long>(v);
  if (static_cast<double>(r) != v) throw ConfigError("expected an integer for '" + key + "'");
  return r;
}

long long Config::get_int_or(const std::string& section, const std::string& key,
                             long long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::uint64_t Config::get_uint64_or(const std::string& section, const std::string& key,
                                    std::uint64_t fallback) const {
  const std::string* v = find(section, key);
  if (!v) return fallback;
  char* end = nullptr;
  unsigned long long r = std::strtoull(v->c_str(), &end, 10);
  if (end == v->c_str() || *end != '\0')
    throw ConfigError("expected an unsigned integer for '" + key + "'");
  return static_cast<std::uint64_t>(r);
}

std::vector<std::string> Config::get_list(const std::string& section, const std::string& key) const {
  std::vector<std::string> items = split(get_string(section, key), ';');
  while (!items.empty() && items.back().empty()) items.pop_back();
  for (const auto& it : items)
    if (it.empty()) throw ConfigError("empty item in list '" + key + "'");
  return items;
}

std::vector<double> Config::get_numbers(const std::string& section, const std::string& key) const {
  std::istringstream in(get_string(section, key));
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(to_double(tok, key));
  if (out.empty()) throw ConfigError("expected numbers for '" + key + "'");
  return out;
}

std::vector<std::vector<double>> Config::get_rows(const std::string& section,
                                                  const std::string& key) const {
  std::vector<std::vector<double>> rows;
  for (const auto& item : get_list(section, key)) {
    std::istringstream in(item);
    std::vector<double> row;
    std::string tok;
    while (in >> tok) row.push_back(to_double(tok, key));
    if (row.empty()) throw ConfigError("empty row in '" + key + "'");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("expected rows for '" + key + "'");
  return rows;
}

Box Config::get_box(const std::string& section, const std::string& key) const {
  std::vector<double> lo, hi;
  for (const auto& row : get_rows(section, key)) {
    if (row.size() != 2)
      throw ConfigError("box '" + key + "' needs 'lo hi' pairs separated by ';'");
    lo.push_back(row[0]);
    hi.push_back(row[1]);
  }
  try {
    return Box(std::move(lo), std::move(hi));
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid box '") + key + "': " + e.what());
  }
}

}  // namespace heis
