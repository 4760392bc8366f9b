#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "tlab/error.hpp"

namespace tlab::harness {

enum class ParamType { real, integer, text, real_list, int_list, boolean };

inline const char* type_name(ParamType t) {
  switch (t) {
    case ParamType::real: return "real";
    case ParamType::integer: return "integer";
    case ParamType::text: return "string";
    case ParamType::real_list: return "real-list";
    case ParamType::int_list: return "integer-list";
    case ParamType::boolean: return "bool";
  }
  return "?";
}

struct ParamSpec {
  std::string name;
  ParamType type = ParamType::real;
  std::string default_value;  ///< empty: required
  std::string description;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = false;  ///< lo excluded
  std::vector<std::string> choices;
  bool optional = false;  ///< may be absent; no default is substituted

  bool required() const { return default_value.empty() && !optional; }
};

inline ParamSpec make_param(std::string name, ParamType type, std::string def, std::string desc) {
  ParamSpec p;
  p.name = std::move(name);
  p.type = type;
  p.default_value = std::move(def);
  p.description = std::move(desc);
  return p;
}
inline ParamSpec real_param(std::string name, std::string def, std::string desc, double lo = -INFINITY,
                            double hi = INFINITY, bool lo_open = false) {
  auto p = make_param(std::move(name), ParamType::real, std::move(def), std::move(desc));
  p.lo = lo;
  p.hi = hi;
  p.lo_open = lo_open;
  return p;
}
inline ParamSpec positive(std::string name, std::string def, std::string desc) {
  return real_param(std::move(name), std::move(def), std::move(desc), 0, INFINITY, true);
}
inline ParamSpec int_param(std::string name, std::string def, std::string desc, double lo, double hi = INFINITY) {
  auto p = make_param(std::move(name), ParamType::integer, std::move(def), std::move(desc));
  p.lo = lo;
  p.hi = hi;
  return p;
}
inline ParamSpec choice_param(std::string name, std::string def, std::string desc, std::vector<std::string> choices) {
  auto p = make_param(std::move(name), ParamType::text, std::move(def), std::move(desc));
  p.choices = std::move(choices);
  return p;
}
inline ParamSpec list_param(std::string name, ParamType t, std::string def, std::string desc, double lo = -INFINITY,
                            bool lo_open = false) {
  auto p = make_param(std::move(name), t, std::move(def), std::move(desc));
  p.lo = lo;
  p.lo_open = lo_open;
  return p;
}
inline ParamSpec optional_real(std::string name, std::string desc) {
  auto p = make_param(std::move(name), ParamType::real, "", std::move(desc));
  p.optional = true;
  return p;
}
inline ParamSpec bool_param(std::string name, std::string def, std::string desc) {
  return make_param(std::move(name), ParamType::boolean, std::move(def), std::move(desc));
}

/// Raw experiment configuration before validation.
struct ExperimentConfig {
  std::string experiment;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
  std::map<std::string, std::string> params;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

inline double parse_real(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  double v = 0;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  require(r.ec == std::errc{} && r.ptr == t.data() + t.size() && !t.empty(), ErrorKind::validation,
          "parameter '" + key + "': not a number: '" + s + "'");
  require(std::isfinite(v), ErrorKind::validation, "parameter '" + key + "': non-finite");
  return v;
}

inline long long parse_int(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  long long v = 0;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (r.ec == std::errc{} && r.ptr == t.data() + t.size() && !t.empty()) return v;
  // allow 1e5-style integers
  const double d = parse_real(key, s);
  require(d == std::floor(d) && std::abs(d) < 9e18, ErrorKind::validation, "parameter '" + key + "': not an integer");
  return static_cast<long long>(d);
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  std::uint64_t v = 0;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  require(r.ec == std::errc{} && r.ptr == t.data() + t.size() && !t.empty(), ErrorKind::validation,
          "'" + key + "': not an unsigned 64-bit integer");
  return v;
}

inline std::string json_scalar(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) {
    std::ostringstream o;
    o.precision(17);
    o << v.get<double>();
    return o.str();
  }
  fail(ErrorKind::validation, "parameter '" + key + "': unsupported JSON value");
}

inline void set_common(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "experiment")
    c.experiment = trim(value);
  else if (key == "seed")
    c.seed = parse_u64(key, value);
  else if (key == "workers") {
    const auto w = parse_int(key, value);
    require(w >= 1 && w <= 1024, ErrorKind::validation, "'workers' must be in [1, 1024]");
    c.workers = static_cast<unsigned>(w);
  } else if (key == "out")
    c.out = trim(value);
  else
    fail(ErrorKind::validation, "unknown top-level key '" + key + "'");
}

}  // namespace detail

/// INI form: top-level experiment/seed/workers/out, experiment parameters in [params].
inline ExperimentConfig parse_ini(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::validation, std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      detail::set_common(c, key, node.data());
      continue;
    }
    require(key == "params", ErrorKind::validation, "config: unknown section [" + key + "]");
    for (const auto& [k, v] : node) {
      require(v.empty(), ErrorKind::validation, "config: nested key '" + k + "'");
      c.params[k] = detail::trim(v.data());
    }
  }
  return c;
}

/// JSON mirror: {"experiment": ..., "seed": ..., "params": {...}}; arrays become lists.
inline ExperimentConfig parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::validation, std::string("config: ") + e.what());
  }
  require(j.is_object(), ErrorKind::validation, "config: top level must be an object");
  ExperimentConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key != "params") {
      detail::set_common(c, key, detail::json_scalar(v, key));
      continue;
    }
    require(v.is_object(), ErrorKind::validation, "config: 'params' must be an object");
    for (const auto& [k, pv] : v.items()) {
      if (pv.is_array()) {
        std::string s;
        for (const auto& e : pv) s += (s.empty() ? "" : ",") + detail::json_scalar(e, k);
        c.params[k] = s;
      } else {
        c.params[k] = detail::json_scalar(pv, k);
      }
    }
  }
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  require(static_cast<bool>(f), ErrorKind::validation, "config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_json(text);
  return parse_ini(text);
}

/// Typed, schema-checked parameter values.
class Params {
 public:
  Params() = default;

  static Params validate(const std::vector<ParamSpec>& schema, const std::map<std::string, std::string>& raw) {
    Params p;
    for (const auto& [k, v] : raw) {
      bool known = false;
      for (const auto& s : schema) known = known || s.name == k;
      require(known, ErrorKind::validation, "unknown parameter '" + k + "'");
    }
    for (const auto& s : schema) {
      auto it = raw.find(s.name);
      require(it != raw.end() || !s.required(), ErrorKind::validation, "missing required parameter '" + s.name + "'");
      if (it == raw.end() && s.optional) continue;
      const std::string value = it != raw.end() ? it->second : s.default_value;
      p.check(s, value);
      p.values_[s.name] = value;
      p.types_[s.name] = s.type;
    }
    return p;
  }

  bool has(const std::string& k) const { return values_.count(k) > 0; }
  double real(const std::string& k) const { return detail::parse_real(k, at(k)); }
  long long integer(const std::string& k) const { return detail::parse_int(k, at(k)); }
  const std::string& text(const std::string& k) const { return at(k); }
  bool boolean(const std::string& k) const { return at(k) == "true"; }
  std::vector<double> reals(const std::string& k) const {
    std::vector<double> v;
    for (const auto& s : detail::split_list(at(k))) v.push_back(detail::parse_real(k, s));
    return v;
  }
  std::vector<long long> integers(const std::string& k) const {
    std::vector<long long> v;
    for (const auto& s : detail::split_list(at(k))) v.push_back(detail::parse_int(k, s));
    return v;
  }
  const std::map<std::string, std::string>& values() const { return values_; }

  /// Parameters as typed JSON, for the manifest echo.
  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, t] : types_) {
      switch (t) {
        case ParamType::real: j[k] = real(k); break;
        case ParamType::integer: j[k] = integer(k); break;
        case ParamType::text: j[k] = text(k); break;
        case ParamType::boolean: j[k] = boolean(k); break;
        case ParamType::real_list: j[k] = reals(k); break;
        case ParamType::int_list: j[k] = integers(k); break;
      }
    }
    return j;
  }

 private:
  const std::string& at(const std::string& k) const {
    auto it = values_.find(k);
    require(it != values_.end(), ErrorKind::validation, "parameter '" + k + "' not in schema");
    return it->second;
  }

  static void check_range(const ParamSpec& s, double v) {
    const bool lo_ok = s.lo_open ? v > s.lo : v >= s.lo;
    require(lo_ok && v <= s.hi, ErrorKind::validation,
            "parameter '" + s.name + "' out of range: " + std::to_string(v));
  }

  void check(const ParamSpec& s, const std::string& v) const {
    switch (s.type) {
      case ParamType::real: check_range(s, detail::parse_real(s.name, v)); break;
      case ParamType::integer: check_range(s, static_cast<double>(detail::parse_int(s.name, v))); break;
      case ParamType::text:
        if (!s.choices.empty()) {
          bool ok = false;
          for (const auto& c : s.choices) ok = ok || c == v;
          require(ok, ErrorKind::validation, "parameter '" + s.name + "': '" + v + "' is not an allowed value");
        }
        break;
      case ParamType::boolean:
        require(v == "true" || v == "false", ErrorKind::validation, "parameter '" + s.name + "' must be true/false");
        break;
      case ParamType::real_list:
      case ParamType::int_list: {
        const auto items = detail::split_list(v);
        require(!items.empty() && !v.empty(), ErrorKind::validation, "parameter '" + s.name + "': empty list");
        for (const auto& it : items) {
          const double d = s.type == ParamType::real_list ? detail::parse_real(s.name, it)
                                                           : static_cast<double>(detail::parse_int(s.name, it));
          check_range(s, d);
        }
        break;
      }
    }
  }

  std::map<std::string, std::string> values_;
  std::map<std::string, ParamType> types_;
};

}  // namespace tlab::harness
