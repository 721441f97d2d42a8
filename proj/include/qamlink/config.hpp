#ifndef QAMLINK_CONFIG_HPP
#define QAMLINK_CONFIG_HPP

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qamlink/channel.hpp"
#include "qamlink/energy.hpp"
#include "qamlink/network.hpp"
#include "qamlink/sweep.hpp"

namespace qamlink {

/// Configuration problem, tagged with the offending key and 1-based line
/// (0 when not tied to a line).
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, int line, const std::string& what)
      : std::runtime_error(format(key, line, what)), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

private:
  static std::string format(const std::string& key, int line, const std::string& what) {
    std::string s;
    if (line > 0)
      s += "line " + std::to_string(line) + ": ";
    if (!key.empty())
      s += "'" + key + "': ";
    return s + what;
  }

  std::string key_;
  int line_;
};

/// Everything a CLI run needs. Powers are mW and times are microseconds in
/// the text format; this struct holds them in the same units.
struct RunConfig {
  // propagation
  double beta = 3.12;
  double sigma_psi_db = 3.8;
  double d0_m = 1.0;
  double carrier_hz = 2.5e9;
  std::optional<double> k_db; // derived from carrier_hz and d0_m when unset

  // circuit
  double pct_mw = 98.2;
  double pcr_mw = 112.5;
  double ptr_mw = 100.0;
  double ttr_us = 5.0;
  double eta = 0.35;
  std::optional<double> t_r_us; // delay overhead per attempt, ttr_us when unset

  // radio
  double n0_w_per_hz = 4e-21;
  double bandwidth_hz = 1e4;
  double packet_bits = 20000;

  // network
  double total_distance_m = 100.0;
  int relay_count = 9;

  // sweeps
  std::string policy = "fixed";
  double pt_mw = 100.0;
  std::string objective = "energy";
  double ber_target = 1e-4;
  std::vector<double> ber_grid{1e-4, 3e-4, 5e-4, 8e-4, 1e-3};
  std::vector<int> b_grid{2, 4, 6, 8, 10};
  std::vector<double> d_grid_m{5, 25, 50, 75, 100};
  std::vector<double> pt_grid_mw{5,  10, 15, 20, 25, 30, 35, 40, 45, 50,
                                 55, 60, 65, 70, 75, 80, 85, 90, 95, 100};
  int threads = 0;

  // runs
  std::uint64_t seed = 1;
  std::uint64_t trials = 1000000;
  std::string output_path;

  PropagationParams propagation() const {
    PropagationParams p;
    p.d0 = d0_m;
    p.beta = beta;
    p.sigma_psi_db = sigma_psi_db;
    p.k_db = k_db ? *k_db : k_db_from_carrier(carrier_hz, d0_m);
    return p;
  }

  CircuitProfile circuit() const {
    CircuitProfile c;
    c.pct = pct_mw * 1e-3;
    c.pcr = pcr_mw * 1e-3;
    c.ptr = ptr_mw * 1e-3;
    c.ttr = ttr_us * 1e-6;
    c.eta = eta;
    if (t_r_us)
      c.retry_overhead_s = *t_r_us * 1e-6;
    return c;
  }

  RadioConfig radio() const { return {n0_w_per_hz, bandwidth_hz, packet_bits}; }

  LinearNetwork network() const { return {total_distance_m, relay_count}; }

  PowerPolicy power_policy() const {
    if (policy == "variable")
      return VariablePower{};
    return FixedPower{pt_mw * 1e-3};
  }

  Objective route_objective() const {
    return objective == "delay" ? Objective::delay : Objective::energy;
  }
};

namespace config_detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& key, int line, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
    throw ConfigError(key, line, "expected a finite number, got '" + t + "'");
  return v;
}

inline long long parse_integer(const std::string& key, int line, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
    throw ConfigError(key, line, "expected an integer, got '" + t + "'");
  return v;
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    items.push_back(trim(item));
  return items;
}

struct Field {
  std::function<void(RunConfig&, const std::string&, int)> parse;
  std::function<std::optional<std::string>(const RunConfig&)> print; // nullopt: omit
};

inline void require(bool ok, const std::string& key, int line, const std::string& what) {
  if (!ok)
    throw ConfigError(key, line, what);
}

inline Field real(const std::string& key, double RunConfig::*member,
                  std::function<bool(double)> valid, std::string rule) {
  return {[=](RunConfig& c, const std::string& v, int line) {
            const double x = parse_double(key, line, v);
            require(valid(x), key, line, rule + ", got " + trim(v));
            c.*member = x;
          },
          [=](const RunConfig& c) { return std::optional{number(c.*member)}; }};
}

inline Field optional_real(const std::string& key, std::optional<double> RunConfig::*member,
                           std::function<bool(double)> valid, std::string rule) {
  return {[=](RunConfig& c, const std::string& v, int line) {
            const double x = parse_double(key, line, v);
            require(valid(x), key, line, rule + ", got " + trim(v));
            c.*member = x;
          },
          [=](const RunConfig& c) -> std::optional<std::string> {
            if (!(c.*member))
              return std::nullopt;
            return number(*(c.*member));
          }};
}

inline Field real_list(const std::string& key, std::vector<double> RunConfig::*member,
                       std::function<bool(double)> valid, std::string rule) {
  return {[=](RunConfig& c, const std::string& v, int line) {
            std::vector<double> out;
            for (const auto& item : split_list(v)) {
              const double x = parse_double(key, line, item);
              require(valid(x), key, line, rule + ", got " + item);
              out.push_back(x);
            }
            require(!out.empty(), key, line, "list must be nonempty");
            c.*member = std::move(out);
          },
          [=](const RunConfig& c) {
            std::string s;
            for (double x : c.*member)
              s += (s.empty() ? "" : ",") + number(x);
            return std::optional{s};
          }};
}

inline bool positive(double x) { return x > 0.0; }

inline const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = [] {
    std::vector<std::pair<std::string, Field>> t;
    const auto add = [&t](std::string key, Field f) { t.emplace_back(std::move(key), std::move(f)); };
    const std::string must_be_positive = "must be positive";

    add("beta", real("beta", &RunConfig::beta, positive, must_be_positive));
    add("sigma_psi_db", real("sigma_psi_db", &RunConfig::sigma_psi_db, positive, must_be_positive));
    add("d0_m", real("d0_m", &RunConfig::d0_m, positive, must_be_positive));
    add("carrier_hz", real("carrier_hz", &RunConfig::carrier_hz, positive, must_be_positive));
    add("k_db", optional_real("k_db", &RunConfig::k_db, [](double) { return true; }, ""));

    add("pct_mw", real("pct_mw", &RunConfig::pct_mw, positive, must_be_positive));
    add("pcr_mw", real("pcr_mw", &RunConfig::pcr_mw, positive, must_be_positive));
    add("ptr_mw", real("ptr_mw", &RunConfig::ptr_mw, positive, must_be_positive));
    add("ttr_us", real("ttr_us", &RunConfig::ttr_us, positive, must_be_positive));
    add("eta", real("eta", &RunConfig::eta, [](double x) { return x > 0.0 && x <= 1.0; },
                    "must lie in (0, 1]"));
    add("t_r_us", optional_real("t_r_us", &RunConfig::t_r_us,
                                [](double x) { return x >= 0.0; }, "must be non-negative"));

    add("n0_w_per_hz", real("n0_w_per_hz", &RunConfig::n0_w_per_hz, positive, must_be_positive));
    add("bandwidth_hz", real("bandwidth_hz", &RunConfig::bandwidth_hz, positive, must_be_positive));
    add("packet_bits", real("packet_bits", &RunConfig::packet_bits, positive, must_be_positive));

    add("total_distance_m",
        real("total_distance_m", &RunConfig::total_distance_m, positive, must_be_positive));
    add("relay_count",
        {[](RunConfig& c, const std::string& v, int line) {
           const auto n = parse_integer("relay_count", line, v);
           require(n >= 0 && n <= LinearNetwork::kMaxExhaustiveRelays, "relay_count", line,
                   "must lie in [0, 30], got " + trim(v));
           c.relay_count = static_cast<int>(n);
         },
         [](const RunConfig& c) { return std::optional{std::to_string(c.relay_count)}; }});

    add("policy", {[](RunConfig& c, const std::string& v, int line) {
                     const auto s = trim(v);
                     require(s == "fixed" || s == "variable", "policy", line,
                             "must be 'fixed' or 'variable', got '" + s + "'");
                     c.policy = s;
                   },
                   [](const RunConfig& c) { return std::optional{c.policy}; }});
    add("pt_mw", real("pt_mw", &RunConfig::pt_mw, positive, must_be_positive));
    add("objective", {[](RunConfig& c, const std::string& v, int line) {
                        const auto s = trim(v);
                        require(s == "energy" || s == "delay", "objective", line,
                                "must be 'energy' or 'delay', got '" + s + "'");
                        c.objective = s;
                      },
                      [](const RunConfig& c) { return std::optional{c.objective}; }});
    const auto ber_ok = [](double x) { return x > 0.0 && x <= BerTarget::kCeiling; };
    const std::string ber_rule = "must lie in (0, 0.375]";
    add("ber_target", real("ber_target", &RunConfig::ber_target, ber_ok, ber_rule));
    add("ber_grid", real_list("ber_grid", &RunConfig::ber_grid, ber_ok, ber_rule));
    add("b_grid",
        {[](RunConfig& c, const std::string& v, int line) {
           std::vector<int> out;
           for (const auto& item : split_list(v)) {
             const auto b = parse_integer("b_grid", line, item);
             require(b == 2 || b == 4 || b == 6 || b == 8 || b == 10, "b_grid", line,
                     "entries must be one of 2,4,6,8,10, got " + item);
             out.push_back(static_cast<int>(b));
           }
           require(!out.empty(), "b_grid", line, "list must be nonempty");
           c.b_grid = std::move(out);
         },
         [](const RunConfig& c) {
           std::string s;
           for (int b : c.b_grid)
             s += (s.empty() ? "" : ",") + std::to_string(b);
           return std::optional{s};
         }});
    add("d_grid_m", real_list("d_grid_m", &RunConfig::d_grid_m, positive, must_be_positive));
    add("pt_grid_mw", real_list("pt_grid_mw", &RunConfig::pt_grid_mw, positive, must_be_positive));
    add("threads",
        {[](RunConfig& c, const std::string& v, int line) {
           const auto n = parse_integer("threads", line, v);
           require(n >= 0 && n <= 4096, "threads", line, "must lie in [0, 4096]");
           c.threads = static_cast<int>(n);
         },
         [](const RunConfig& c) { return std::optional{std::to_string(c.threads)}; }});

    add("seed", {[](RunConfig& c, const std::string& v, int line) {
                   const auto n = parse_integer("seed", line, v);
                   require(n >= 0, "seed", line, "must be non-negative");
                   c.seed = static_cast<std::uint64_t>(n);
                 },
                 [](const RunConfig& c) { return std::optional{std::to_string(c.seed)}; }});
    add("trials", {[](RunConfig& c, const std::string& v, int line) {
                     const auto n = parse_integer("trials", line, v);
                     require(n >= 1, "trials", line, "must be >= 1");
                     c.trials = static_cast<std::uint64_t>(n);
                   },
                   [](const RunConfig& c) { return std::optional{std::to_string(c.trials)}; }});
    add("output_path", {[](RunConfig& c, const std::string& v, int) { c.output_path = trim(v); },
                        [](const RunConfig& c) { return std::optional{c.output_path}; }});
    return t;
  }();
  return table;
}

} // namespace config_detail

/// Checks relations between keys that single-key parsing cannot see.
inline void validate_config(const RunConfig& c) {
  for (double d : c.d_grid_m)
    if (d < c.d0_m)
      throw ConfigError("d_grid_m", 0,
                        "distance " + config_detail::number(d) + " is below d0_m");
  if (c.total_distance_m / (c.relay_count + 1) < c.d0_m)
    throw ConfigError("relay_count", 0, "relay spacing falls below d0_m");
}

/// Parses flat `key = value` text with `#` comments. Missing keys keep
/// their defaults; unknown keys are reported together.
inline RunConfig parse_config(std::string_view text) {
  using namespace config_detail;
  std::map<std::string, const Field*> by_key;
  for (const auto& [k, f] : fields())
    by_key.emplace(k, &f);

  RunConfig cfg;
  std::map<std::string, int> seen;
  std::vector<std::string> unknown;
  int first_unknown_line = 0;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    const std::string content = trim(raw);
    if (content.empty())
      continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", line, "expected 'key = value', got '" + content + "'");
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty())
      throw ConfigError("", line, "missing key before '='");
    const auto it = by_key.find(key);
    if (it == by_key.end()) {
      if (unknown.empty())
        first_unknown_line = line;
      unknown.push_back(key);
      continue;
    }
    if (const auto prev = seen.find(key); prev != seen.end())
      throw ConfigError(key, line,
                        "duplicate key (first set on line " + std::to_string(prev->second) + ")");
    seen.emplace(key, line);
    it->second->parse(cfg, value, line);
  }

  if (!unknown.empty()) {
    std::string list;
    for (const auto& k : unknown)
      list += (list.empty() ? "" : ", ") + k;
    throw ConfigError(unknown.front(), first_unknown_line, "unknown key(s): " + list);
  }
  validate_config(cfg);
  return cfg;
}

/// Canonical text form: every key, fixed order, 17 significant digits.
inline std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& [key, field] : config_detail::fields())
    if (const auto v = field.print(cfg))
      out += key + " = " + *v + "\n";
  return out;
}

} // namespace qamlink

#endif
