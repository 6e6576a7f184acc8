#include "relcoll/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

#include "relcoll/errors.hpp"
#include "relcoll/kinematics.hpp"

namespace relcoll {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  const Entry* find(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  int line_of(const std::string& key) const {
    const Entry* e = find(key);
    return e ? e->line : 0;
  }

  double real(const std::string& key, double fallback) const {
    const Entry* e = find(key);
    return e ? parse_real(key, e->value, e->line) : fallback;
  }

  int integer(const std::string& key, int fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    int out = 0;
    const std::string_view v = e->value;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
      throw ConfigError(key, e->line, "expected an integer, got '" + e->value + "'");
    }
    return out;
  }

  static double parse_real(const std::string& key, std::string_view v, int line) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
      throw ConfigError(key, line, "expected a finite real, got '" + std::string(v) + "'");
    }
    return out;
  }

 private:
  std::map<std::string, Entry> entries_;
};

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "grid.half_width", "grid.n",         "angular.n_mu",  "angular.n_az",
      "kernel.c_phi",    "kernel.c_ang",   "init.kind",     "init.beta",
      "init.shift",      "init.box_half_width", "time.t_end", "time.safety",
      "time.dt_max",     "solver.scheme",  "output.path",    "norms",         "carleman.n_r",
      "carleman.n_psi"};
  return keys;
}

void check(bool ok, const std::string& key, int line, const std::string& what) {
  if (!ok) throw ConfigError(key, line, what);
}

}  // namespace

RunOptions ScenarioConfig::run_options() const {
  RunOptions opts;
  opts.t_end = t_end;
  opts.step.safety = safety;
  opts.step.dt_max = dt_max;
  opts.step.scheme = scheme;
  opts.norms = norms;
  return opts;
}

WeakFormGrid ScenarioConfig::weak_form_grid() const {
  WeakFormGrid g;
  g.half_width = half_width;
  g.n = n;
  g.angular = angular;
  g.n_r = carleman_n_r;
  g.n_psi = carleman_n_psi;
  return g;
}

ScenarioConfig parse_config(const std::string& text) {
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", line_no, "expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("", line_no, "missing key before '='");
    bool known = false;
    for (const auto& k : known_keys()) known = known || k == key;
    if (!known) throw ConfigError(key, line_no, "unknown key");
    if (value.empty()) throw ConfigError(key, line_no, "missing value");
    if (const auto it = entries.find(key); it != entries.end()) {
      throw ConfigError(key, line_no,
                        "duplicate key (first set on line " + std::to_string(it->second.line) + ")");
    }
    entries[key] = Entry{value, line_no};
  }

  const Reader r(std::move(entries));
  ScenarioConfig cfg;
  cfg.half_width = r.real("grid.half_width", cfg.half_width);
  cfg.n = r.integer("grid.n", cfg.n);
  cfg.angular.n_mu = r.integer("angular.n_mu", cfg.angular.n_mu);
  cfg.angular.n_az = r.integer("angular.n_az", cfg.angular.n_az);
  cfg.kernel.c_phi = r.real("kernel.c_phi", cfg.kernel.c_phi);
  cfg.kernel.c_ang = r.real("kernel.c_ang", cfg.kernel.c_ang);
  cfg.beta = r.real("init.beta", cfg.beta);
  cfg.box_half_width = r.real("init.box_half_width", cfg.box_half_width);
  cfg.t_end = r.real("time.t_end", cfg.t_end);
  cfg.safety = r.real("time.safety", cfg.safety);
  cfg.dt_max = r.real("time.dt_max", cfg.dt_max);
  cfg.carleman_n_r = r.integer("carleman.n_r", cfg.carleman_n_r);
  cfg.carleman_n_psi = r.integer("carleman.n_psi", cfg.carleman_n_psi);

  if (const Entry* e = r.find("init.kind")) {
    if (e->value == "juttner") {
      cfg.init_kind = InitKind::juttner;
    } else if (e->value == "two_bump") {
      cfg.init_kind = InitKind::two_bump;
    } else if (e->value == "box") {
      cfg.init_kind = InitKind::box;
    } else {
      throw ConfigError("init.kind", e->line,
                        "expected juttner, two_bump or box, got '" + e->value + "'");
    }
  }
  if (const Entry* e = r.find("init.shift")) {
    const auto parts = split_ws(e->value);
    check(parts.size() == 3, "init.shift", e->line, "expected 3 reals");
    cfg.shift = {Reader::parse_real("init.shift", parts[0], e->line),
                 Reader::parse_real("init.shift", parts[1], e->line),
                 Reader::parse_real("init.shift", parts[2], e->line)};
  }
  if (const Entry* e = r.find("solver.scheme")) {
    if (e->value == "projection") {
      cfg.scheme = GainScheme::projection;
    } else if (e->value == "interpolate") {
      cfg.scheme = GainScheme::interpolate;
    } else {
      throw ConfigError("solver.scheme", e->line,
                        "expected projection or interpolate, got '" + e->value + "'");
    }
  }
  if (const Entry* e = r.find("output.path")) cfg.output_path = e->value;
  if (const Entry* e = r.find("norms")) {
    cfg.norms.clear();
    std::string_view rest = e->value;
    while (true) {
      const auto comma = rest.find(',');
      const auto item = trim(rest.substr(0, comma));
      const auto parts = split_ws(item);
      check(parts.size() == 2, "norms", e->line, "each entry must be 'p k'");
      NormSpec s{Reader::parse_real("norms", parts[0], e->line),
                 Reader::parse_real("norms", parts[1], e->line)};
      check(s.p >= 1.0, "norms", e->line, "p must be >= 1");
      cfg.norms.push_back(s);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }

  const auto at = [&r](const char* key) { return r.line_of(key); };
  check(cfg.half_width > 0.0, "grid.half_width", at("grid.half_width"), "must be > 0");
  check(cfg.n >= 2, "grid.n", at("grid.n"), "must be >= 2");
  check(cfg.angular.n_mu >= 2, "angular.n_mu", at("angular.n_mu"), "must be >= 2");
  check(cfg.angular.n_az >= 4, "angular.n_az", at("angular.n_az"), "must be >= 4");
  check(cfg.kernel.c_phi > 0.0, "kernel.c_phi", at("kernel.c_phi"), "must be > 0");
  check(cfg.kernel.c_ang > 0.0, "kernel.c_ang", at("kernel.c_ang"), "must be > 0");
  check(cfg.beta > 0.0, "init.beta", at("init.beta"), "must be > 0");
  check(cfg.box_half_width > 0.0, "init.box_half_width", at("init.box_half_width"),
        "must be > 0");
  check(cfg.t_end >= 0.0, "time.t_end", at("time.t_end"), "must be >= 0");
  check(cfg.safety > 0.0 && cfg.safety <= 1.0, "time.safety", at("time.safety"),
        "must be in (0, 1]");
  check(cfg.dt_max > 0.0, "time.dt_max", at("time.dt_max"), "must be > 0");
  check(cfg.carleman_n_r >= 1, "carleman.n_r", at("carleman.n_r"), "must be >= 1");
  check(cfg.carleman_n_psi >= 1, "carleman.n_psi", at("carleman.n_psi"), "must be >= 1");
  check(!cfg.output_path.empty(), "output.path", at("output.path"), "must not be empty");
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", 0, "cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

DensityField build_initial(const ScenarioConfig& cfg) {
  const double beta = cfg.beta;
  switch (cfg.init_kind) {
    case InitKind::juttner:
      return DensityField::sample(cfg.half_width, cfg.n,
                                  [beta](const Vec3& v) { return std::exp(-beta * energy(v)); });
    case InitKind::two_bump: {
      const Vec3 a = cfg.shift;
      return DensityField::sample(cfg.half_width, cfg.n, [beta, a](const Vec3& v) {
        return std::exp(-beta * energy(v - a)) + std::exp(-beta * energy(v + a));
      });
    }
    case InitKind::box: {
      const double b = cfg.box_half_width;
      return DensityField::sample(cfg.half_width, cfg.n, [b](const Vec3& v) {
        return std::abs(v.x) <= b && std::abs(v.y) <= b && std::abs(v.z) <= b ? 1.0 : 0.0;
      });
    }
  }
  throw std::logic_error("build_initial: unhandled init kind");
}

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::juttner:
      return "juttner";
    case InitKind::two_bump:
      return "two_bump";
    case InitKind::box:
      return "box";
  }
  return "unknown";
}

}  // namespace relcoll
