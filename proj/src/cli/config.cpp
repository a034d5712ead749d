#include "tcomb/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "tcomb/csv.hpp"
#include "tcomb/errors.hpp"

namespace tcomb::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double to_double(std::string_view key, std::string_view value) {
  try {
    return parse_double(lower(value));
  } catch (const std::invalid_argument&) {
    throw ConfigError("key '" + std::string(key) + "': expected a number, got '" + std::string(value) + "'");
  }
}

template <class Int>
Int to_integer(std::string_view key, std::string_view value) {
  Int result{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [end, ec] = std::from_chars(first, last, result);
  if (ec != std::errc{} || end != last || first == last) {
    // Allow integral values in exponent form such as 1e6.
    const double d = to_double(key, value);
    if (std::floor(d) != d || std::abs(d) > 9.0e18) {
      throw ConfigError("key '" + std::string(key) + "': expected an integer, got '" + std::string(value) + "'");
    }
    return static_cast<Int>(d);
  }
  return result;
}

std::vector<int> parse_n_list(std::string_view key, std::string_view value) {
  if (lower(value) == "default") return {};
  std::vector<int> values;
  for (auto item : split(value, ',')) {
    if (item.find(':') != std::string_view::npos) {
      const auto bounds = split(item, ':');
      if (bounds.size() != 3) {
        throw ConfigError("key '" + std::string(key) + "': ranges are lo:hi:step, got '" + std::string(item) + "'");
      }
      const int lo = to_integer<int>(key, bounds[0]);
      const int hi = to_integer<int>(key, bounds[1]);
      const int step = to_integer<int>(key, bounds[2]);
      if (step <= 0) throw ConfigError("key '" + std::string(key) + "': range step must be positive");
      for (int n = lo; n <= hi; n += step) values.push_back(n);
    } else {
      values.push_back(to_integer<int>(key, item));
    }
  }
  return values;
}

Mechanisms parse_mechanisms(std::string_view value) {
  const std::string v = lower(value);
  if (v == "none" || v.empty()) return Mechanisms::none();
  if (v == "all") return Mechanisms::all();
  Mechanisms m;
  for (auto item : split(v, ',')) {
    if (item == "t1") m.t1 = true;
    else if (item == "t2") m.t2 = true;
    else if (item == "q") m.q = true;
    else throw ConfigError("key 'mechanisms': unknown mechanism '" + std::string(item) + "' (use t1, t2, q, all, none)");
  }
  return m;
}

std::string mechanisms_text(Mechanisms m) {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(m.t1, "t1");
  add(m.t2, "t2");
  add(m.q, "q");
  return out.empty() ? "none" : out;
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += format_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

struct Key {
  const char* name;
  std::function<void(RunConfig&, std::string_view, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define TCOMB_DOUBLE_KEY(NAME, FIELD)                                                        \
  Key{NAME, [](RunConfig& c, std::string_view k, std::string_view v) { c.FIELD = to_double(k, v); }, \
      [](const RunConfig& c) { return format_double(c.FIELD); }}

#define TCOMB_INT_KEY(NAME, FIELD)                                                       \
  Key{NAME,                                                                              \
      [](RunConfig& c, std::string_view k, std::string_view v) {                         \
        c.FIELD = to_integer<decltype(c.FIELD)>(k, v);                                   \
      },                                                                                 \
      [](const RunConfig& c) { return std::to_string(c.FIELD); }}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      TCOMB_DOUBLE_KEY("f0_hz", system.f0_hz),
      TCOMB_DOUBLE_KEY("quality_factor", system.quality_factor),
      TCOMB_DOUBLE_KEY("mass_g", system.mass_g),
      TCOMB_DOUBLE_KEY("temperature_k", system.temperature_k),
      TCOMB_DOUBLE_KEY("coupling_hz", system.coupling_hz),
      TCOMB_DOUBLE_KEY("qubit_t1_s", system.qubit_t1_s),
      TCOMB_DOUBLE_KEY("qubit_t2_s", system.qubit_t2_s),
      TCOMB_DOUBLE_KEY("t2_scaling_exponent", system.t2_scaling_exponent),
      TCOMB_DOUBLE_KEY("readout_contrast", system.readout_contrast),
      TCOMB_DOUBLE_KEY("qubit_frequency_hz", system.qubit_frequency_hz),
      Key{"temperatures_k",
          [](RunConfig& c, std::string_view k, std::string_view v) {
            c.temperatures_k.clear();
            if (trim(v).empty()) return;
            for (auto item : split(v, ',')) c.temperatures_k.push_back(to_double(k, item));
          },
          [](const RunConfig& c) { return join(c.temperatures_k); }},
      TCOMB_INT_KEY("pulses", pulses),
      TCOMB_DOUBLE_KEY("t_min_s", t_min_s),
      TCOMB_DOUBLE_KEY("t_max_s", t_max_s),
      TCOMB_INT_KEY("n_points", n_points),
      Key{"spectrum",
          [](RunConfig& c, std::string_view, std::string_view v) {
            const std::string s = lower(v);
            if (s == "delta") c.spectrum = SpectrumKind::delta;
            else if (s == "lorentzian") c.spectrum = SpectrumKind::lorentzian;
            else throw ConfigError("key 'spectrum': expected delta or lorentzian, got '" + s + "'");
          },
          [](const RunConfig& c) {
            return std::string(c.spectrum == SpectrumKind::delta ? "delta" : "lorentzian");
          }},
      Key{"chi_route",
          [](RunConfig& c, std::string_view, std::string_view v) {
            const std::string s = lower(v);
            if (s == "closed") c.chi_route = ChiRoute::closed;
            else if (s == "piecewise") c.chi_route = ChiRoute::piecewise;
            else if (s == "quadrature") c.chi_route = ChiRoute::quadrature;
            else throw ConfigError("key 'chi_route': expected closed, piecewise or quadrature, got '" + s + "'");
          },
          [](const RunConfig& c) {
            switch (c.chi_route) {
              case ChiRoute::closed: return std::string("closed");
              case ChiRoute::piecewise: return std::string("piecewise");
              case ChiRoute::quadrature: break;
            }
            return std::string("quadrature");
          }},
      Key{"mechanisms",
          [](RunConfig& c, std::string_view, std::string_view v) { c.mechanisms = parse_mechanisms(v); },
          [](const RunConfig& c) { return mechanisms_text(c.mechanisms); }},
      Key{"penalty_route",
          [](RunConfig& c, std::string_view, std::string_view v) {
            const std::string s = lower(v);
            if (s == "closed") c.penalty_route = PenaltyRoute::closed;
            else if (s == "quadrature") c.penalty_route = PenaltyRoute::quadrature;
            else throw ConfigError("key 'penalty_route': expected closed or quadrature, got '" + s + "'");
          },
          [](const RunConfig& c) {
            return std::string(c.penalty_route == PenaltyRoute::closed ? "closed" : "quadrature");
          }},
      Key{"n_values",
          [](RunConfig& c, std::string_view k, std::string_view v) { c.n_values = parse_n_list(k, v); },
          [](const RunConfig& c) { return c.n_values.empty() ? std::string("default") : join(c.n_values); }},
      TCOMB_INT_KEY("optimize_n_min", optimize_n_min),
      TCOMB_INT_KEY("optimize_n_max", optimize_n_max),
      Key{"optimize_mode",
          [](RunConfig& c, std::string_view, std::string_view v) {
            const std::string s = lower(v);
            if (s == "all") c.optimize_mode = OptimizeMode::all;
            else if (s == "q_only" || s == "q") c.optimize_mode = OptimizeMode::q_only;
            else throw ConfigError("key 'optimize_mode': expected all or q_only, got '" + s + "'");
          },
          [](const RunConfig& c) {
            return std::string(c.optimize_mode == OptimizeMode::all ? "all" : "q_only");
          }},
      TCOMB_INT_KEY("runs", runs),
      TCOMB_DOUBLE_KEY("mass_shift", mass_shift),
      TCOMB_INT_KEY("n_seeds", n_seeds),
      TCOMB_INT_KEY("seed", seed),
      TCOMB_DOUBLE_KEY("flank_offset", flank_offset),
      TCOMB_DOUBLE_KEY("measurement_time_s", measurement_time_s),
      Key{"out", [](RunConfig& c, std::string_view, std::string_view v) { c.out = std::string(v); },
          [](const RunConfig& c) { return c.out; }},
      TCOMB_INT_KEY("workers", workers),
  };
  return table;
}

#undef TCOMB_DOUBLE_KEY
#undef TCOMB_INT_KEY

}  // namespace

std::vector<double> RunConfig::sweep_temperatures() const {
  std::vector<double> temps = temperatures_k.empty() ? std::vector<double>{system.temperature_k}
                                                     : temperatures_k;
  std::sort(temps.begin(), temps.end());
  temps.erase(std::unique(temps.begin(), temps.end()), temps.end());
  return temps;
}

std::vector<int> RunConfig::sweep_n_values() const {
  if (n_values.empty()) return default_n_sweep();
  std::vector<int> values = n_values;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

RunConfig preset(std::string_view name) {
  RunConfig config;
  if (name == "fig2") {
    config.system = fig2_system();
    config.temperatures_k = {10.0};
    config.pulses = 100;
    config.t_min_s = 0.0;
    config.t_max_s = 50.0 * config.system.period();
    config.mechanisms = Mechanisms::none();
    return config;
  }
  if (name == "fig3") {
    config.system = fig3_system();
    config.temperatures_k = {1.0, 300.0};
    config.mechanisms = Mechanisms::all();
    return config;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "' (use fig2 or fig3)");
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
  const std::string_view k = trim(key);
  const std::string_view v = trim(value);
  for (const auto& entry : keys()) {
    if (k == entry.name) {
      entry.set(config, k, v);
      return;
    }
  }
  throw ConfigError("unknown configuration key '" + std::string(k) + "'");
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
      }
      try {
        apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
      } catch (const ConfigError& e) {
        throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), std::move(base));
}

std::string serialize_config(const RunConfig& config) {
  std::string out;
  for (const auto& entry : keys()) {
    out += entry.name;
    out += " = ";
    out += entry.get(config);
    out += '\n';
  }
  return out;
}

void validate_config(const RunConfig& config) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  try {
    for (double temperature : config.sweep_temperatures()) {
      SystemSpec spec = config.system;
      spec.temperature_k = temperature;
      spec.validate();
    }
  } catch (const DomainError& e) {
    fail(e.what());
  }
  if (config.pulses < 1) fail("pulses must be >= 1");
  if (config.n_points < 2) fail("n_points must be >= 2");
  if (!(config.t_min_s >= 0.0) || !std::isfinite(config.t_max_s) || !(config.t_max_s > config.t_min_s)) {
    fail("time grid needs 0 <= t_min_s < t_max_s");
  }
  for (int n : config.n_values) {
    if (n < 2 || n % 2 != 0) fail("n_values must be even integers >= 2, got " + std::to_string(n));
  }
  if (config.optimize_n_min < 2 || config.optimize_n_min % 2 != 0) fail("optimize_n_min must be even and >= 2");
  if (config.optimize_n_max != 0 && config.optimize_n_max < config.optimize_n_min) {
    fail("optimize_n_max must be 0 (automatic) or >= optimize_n_min");
  }
  if (config.runs < 1) fail("runs must be >= 1");
  if (config.n_seeds < 1) fail("n_seeds must be >= 1");
  if (!(config.mass_shift > -1.0) || !std::isfinite(config.mass_shift)) fail("mass_shift must be finite and > -1");
  if (!(config.flank_offset > 0.0)) fail("flank_offset must be positive");
  if (!(config.measurement_time_s >= 0.0)) fail("measurement_time_s must be >= 0");
  if (config.spectrum == SpectrumKind::lorentzian && std::isinf(config.system.quality_factor)) {
    fail("spectrum = lorentzian needs a finite quality_factor");
  }
  if (config.spectrum == SpectrumKind::lorentzian && config.chi_route != ChiRoute::quadrature) {
    fail("spectrum = lorentzian needs chi_route = quadrature");
  }
  if (config.chi_route == ChiRoute::closed && config.spectrum != SpectrumKind::delta) {
    fail("chi_route = closed is only defined for the delta spectrum");
  }
}

}  // namespace tcomb::cli
