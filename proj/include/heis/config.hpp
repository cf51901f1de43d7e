#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heis/common.hpp"

namespace heis {

struct ConfigError : Error {
  ConfigError(const std::string& msg, int line = 0)
      : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg) {}
};

// Key/value job configuration with nested tables:
//   task = measure
//   [surface]
//   phi = u1 ; u2 ; (u1^2+u2^2)/2
// Lists use ';' as separator; '#' starts a comment. Order is preserved for
// the report's inputs echo.
class Config {
 public:
  static Config parse_string(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key, const std::string& value);

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key) const;
  long long get_int_or(const std::string& section, const std::string& key, long long fallback) const;
  std::uint64_t get_uint64_or(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const;

  // ';'-separated list of trimmed items.
  std::vector<std::string> get_list(const std::string& section, const std::string& key) const;
  // whitespace-separated numbers inside a single item.
  std::vector<double> get_numbers(const std::string& section, const std::string& key) const;
  // "a b ; c d ; ..." -> Box with one [a, b] interval per item.
  Box get_box(const std::string& section, const std::string& key) const;
  // rows of whitespace-separated numbers, one row per ';' item.
  std::vector<std::vector<double>> get_rows(const std::string& section,
                                            const std::string& key) const;

  using Section = std::vector<std::pair<std::string, std::string>>;
  const std::vector<std::pair<std::string, Section>>& sections() const { return sections_; }

 private:
  const std::string* find(const std::string& section, const std::string& key) const;
  std::vector<std::pair<std::string, Section>> sections_;  // first entry is the top level ""
};

}  // namespace heis
