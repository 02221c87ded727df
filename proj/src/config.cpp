#include "magprop/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace magprop {
namespace harness {

namespace {
std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
}  // namespace

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SpecError("config line " + std::to_string(lineno) +
                      " is not 'key = value': " + line);
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) {
    order_.push_back(key);
    values_[key] = {value};
  } else {
    it->second.push_back(value);
  }
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second.back();
}

const std::vector<std::string>& Config::get_all(const std::string& key) const {
  static const std::vector<std::string> empty;
  auto it = values_.find(key);
  return it == values_.end() ? empty : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  try {
    return std::stod(get(key));
  } catch (const std::exception&) {
    throw SpecError("config key '" + key + "' is not a number: " + get(key));
  }
}

long Config::get_long(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  try {
    return std::stol(get(key));
  } catch (const std::exception&) {
    throw SpecError("config key '" + key + "' is not an integer: " + get(key));
  }
}

std::vector<splitting::SplitScheme> Config::scheme_tables() const {
  std::set<std::string> names;
  for (const std::string& key : order_) {
    if (key.rfind("table.", 0) != 0) continue;
    const auto second_dot = key.find('.', 6);
    if (second_dot == std::string::npos)
      throw SpecError("table keys look like table.<NAME>.stage, got: " + key);
    names.insert(key.substr(6, second_dot - 6));
  }

  std::vector<splitting::SplitScheme> tables;
  for (const std::string& name : names) {
    splitting::SplitScheme s;
    s.name = name;
    s.order = static_cast<int>(get_long("table." + name + ".order", 0));
    s.symmetric = get("table." + name + ".symmetric", "false") == "true";
    for (const std::string& stage : get_all("table." + name + ".stage")) {
      std::istringstream row(stage);
      std::string kind;
      double coeff = 0.0, ucoeff = 0.0;
      if (!(row >> kind >> coeff))
        throw SpecError("bad stage line for table " + name + ": " + stage);
      row >> ucoeff;
      splitting::Stage st;
      if (kind == "T")
        st.kind = splitting::StageKind::T;
      else if (kind == "W")
        st.kind = splitting::StageKind::W;
      else if (kind == "WU")
        st.kind = splitting::StageKind::WU;
      else
        throw SpecError("stage kind must be T, W or WU, got: " + kind);
      st.coeff = coeff;
      st.u_coeff = ucoeff;
      s.stages.push_back(st);
    }
    s.validate();
    tables.push_back(std::move(s));
  }
  return tables;
}

}  // namespace harness
}  // namespace magprop
