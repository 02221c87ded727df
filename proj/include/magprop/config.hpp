#pragma once

#include <map>
#include <string>
#include <vector>

#include "magprop/common.hpp"
#include "magprop/scheme.hpp"

namespace magprop {
namespace harness {

/// Human-readable `key = value` configuration. Repeated keys accumulate;
/// '#' starts a comment. All CLI flags have a config twin and flags win.
class Config {
 public:
  static Config load(const std::string& path);
  static Config parse(const std::string& text);

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback = "") const;
  const std::vector<std::string>& get_all(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;

  void set(const std::string& key, const std::string& value);

  /// Keys in first-seen order (for diagnostics and round trips).
  const std::vector<std::string>& keys() const { return order_; }

  /// Collects user coefficient tables declared as
  ///   table.<NAME>.order = 6
  ///   table.<NAME>.symmetric = true
  ///   table.<NAME>.stage = T 0.5
  ///   table.<NAME>.stage = W 1.0 [u-coefficient]
  std::vector<splitting::SplitScheme> scheme_tables() const;

 private:
  std::map<std::string, std::vector<std::string>> values_;
  std::vector<std::string> order_;
};

}  // namespace harness
}  // namespace magprop
