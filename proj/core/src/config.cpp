#include "rswave/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "rswave/errors.hpp"

namespace rswave {
namespace {

struct ParsedValue {
  enum class Kind { string, boolean, number, array } kind = Kind::string;
  std::string str;
  bool b = false;
  double num = 0.0;
  std::uint64_t unum = 0;
  bool is_integer = false;
  std::vector<double> arr;
  int line = 0;
};

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool parse_number(const std::string& tok, ParsedValue& v) {
  try {
    std::size_t pos = 0;
    if (tok.find_first_of(".eE") == std::string::npos && !tok.empty() &&
        tok[0] != '-') {
      v.unum = std::stoull(tok, &pos);
      if (pos != tok.size()) return false;
      v.num = static_cast<double>(v.unum);
      v.is_integer = true;
      return true;
    }
    v.num = std::stod(tok, &pos);
    if (pos != tok.size()) return false;
    v.is_integer = std::nearbyint(v.num) == v.num && std::abs(v.num) < 1e18;
    if (v.is_integer && v.num >= 0) v.unum = static_cast<std::uint64_t>(v.num);
    return true;
  } catch (...) {
    return false;
  }
}

using ValueMap = std::map<std::string, ParsedValue>;

ValueMap tokenize(const std::string& text, std::vector<std::string>& errors) {
  ValueMap values;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back("line " + std::to_string(line_no) +
                         ": malformed section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) +
                       ": expected key = value");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (!section.empty()) key = section + "." + key;
    if (key.empty() || val.empty()) {
      errors.push_back("line " + std::to_string(line_no) +
                       ": empty key or value");
      continue;
    }

    ParsedValue v;
    v.line = line_no;
    if (val.front() == '"') {
      if (val.size() < 2 || val.back() != '"') {
        errors.push_back(key + ": unterminated string");
        continue;
      }
      v.kind = ParsedValue::Kind::string;
      v.str = val.substr(1, val.size() - 2);
    } else if (val == "true" || val == "false") {
      v.kind = ParsedValue::Kind::boolean;
      v.b = val == "true";
    } else if (val.front() == '[') {
      if (val.back() != ']') {
        errors.push_back(key + ": unterminated array");
        continue;
      }
      v.kind = ParsedValue::Kind::array;
      std::string body = val.substr(1, val.size() - 2);
      std::istringstream items(body);
      std::string item;
      bool ok = true;
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        ParsedValue num;
        if (!parse_number(item, num)) {
          errors.push_back(key + ": array element '" + item +
                           "' is not a number");
          ok = false;
          break;
        }
        v.arr.push_back(num.num);
      }
      if (!ok) continue;
    } else {
      v.kind = ParsedValue::Kind::number;
      if (!parse_number(val, v)) {
        errors.push_back(key + ": cannot parse value '" + val + "'");
        continue;
      }
    }
    if (values.count(key))
      errors.push_back(key + ": duplicate key");
    else
      values.emplace(key, std::move(v));
  }
  return values;
}

struct Schema {
  std::vector<std::string> errors;

  void type_error(const std::string& key, const char* want) {
    errors.push_back(key + ": expected " + want);
  }

  void apply_string(ValueMap& m, const std::string& key, std::string& field) {
    auto it = m.find(key);
    if (it == m.end()) return;
    if (it->second.kind != ParsedValue::Kind::string)
      type_error(key, "string");
    else
      field = it->second.str;
    m.erase(it);
  }
  void apply_double(ValueMap& m, const std::string& key, double& field) {
    auto it = m.find(key);
    if (it == m.end()) return;
    if (it->second.kind != ParsedValue::Kind::number)
      type_error(key, "number");
    else
      field = it->second.num;
    m.erase(it);
  }
  void apply_int(ValueMap& m, const std::string& key, int& field) {
    auto it = m.find(key);
    if (it == m.end()) return;
    if (it->second.kind != ParsedValue::Kind::number || !it->second.is_integer)
      type_error(key, "integer");
    else
      field = static_cast<int>(it->second.num);
    m.erase(it);
  }
  void apply_u64(ValueMap& m, const std::string& key, std::uint64_t& field) {
    auto it = m.find(key);
    if (it == m.end()) return;
    if (it->second.kind != ParsedValue::Kind::number || !it->second.is_integer)
      type_error(key, "nonnegative integer");
    else
      field = it->second.unum;
    m.erase(it);
  }
  void apply_array(ValueMap& m, const std::string& key,
                   std::vector<double>& field) {
    auto it = m.find(key);
    if (it == m.end()) return;
    if (it->second.kind != ParsedValue::Kind::array)
      type_error(key, "array of numbers");
    else
      field = it->second.arr;
    m.erase(it);
  }

  void constrain(bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  }
};

}  // namespace

RunConfig parse_config(const std::string& text) {
  std::vector<std::string> errors;
  ValueMap values = tokenize(text, errors);
  RunConfig cfg;
  Schema s;
  s.errors = std::move(errors);

  s.apply_int(values, "schema_version", cfg.schema_version);
  s.apply_string(values, "scenario", cfg.scenario);
  s.apply_int(values, "dim", cfg.dim);

  s.apply_string(values, "spectrum.kind", cfg.spectrum_kind);
  s.apply_double(values, "spectrum.amplitude", cfg.spectrum_amplitude);
  s.apply_double(values, "spectrum.sigma", cfg.spectrum_sigma);

  s.apply_string(values, "gap.kind", cfg.gap_kind);
  s.apply_double(values, "gap.gamma0", cfg.gap_gamma0);
  s.apply_double(values, "gap.gamma2", cfg.gap_gamma2);

  // grid.dim is accepted as an alias that must agree with dim.
  int grid_dim = -1;
  s.apply_int(values, "grid.dim", grid_dim);
  s.apply_int(values, "grid.n", cfg.grid_n);
  s.apply_double(values, "grid.L", cfg.grid_L);
  s.apply_double(values, "grid.xi_max_target", cfg.grid_xi_max_target);

  s.apply_double(values, "eps", cfg.eps);
  s.apply_double(values, "alpha", cfg.alpha);
  s.apply_double(values, "beta", cfg.beta);
  s.apply_array(values, "t_macro_list", cfg.t_macro_list);
  s.apply_double(values, "dt", cfg.dt);
  s.apply_double(values, "width_factor", cfg.width_factor);

  s.apply_string(values, "profile.kind", cfg.profile_kind);
  s.apply_double(values, "profile.amplitude", cfg.profile_amplitude);
  s.apply_double(values, "profile.sigma", cfg.profile_sigma);

  s.apply_int(values, "n_realizations", cfg.n_realizations);
  s.apply_u64(values, "master_seed", cfg.master_seed);
  s.apply_int(values, "workers", cfg.workers);
  s.apply_array(values, "probes_xi", cfg.probes_xi);

  s.apply_double(values, "highfreq.cell", cfg.highfreq_cell);

  s.apply_double(values, "kinetic.xi_max", cfg.kinetic_xi_max);
  s.apply_int(values, "kinetic.n_cells", cfg.kinetic_n_cells);
  s.apply_double(values, "kinetic.dt", cfg.kinetic_dt);
  s.apply_double(values, "kinetic.t", cfg.kinetic_t);
  s.apply_int(values, "kinetic.k_max", cfg.kinetic_k_max);
  s.apply_int(values, "kinetic.n_mc", cfg.kinetic_n_mc);
  s.apply_int(values, "kinetic.n_particles", cfg.kinetic_n_particles);
  s.apply_double(values, "kinetic.hist_lo", cfg.kinetic_hist_lo);
  s.apply_double(values, "kinetic.hist_hi", cfg.kinetic_hist_hi);
  s.apply_int(values, "kinetic.hist_cells", cfg.kinetic_hist_cells);

  s.apply_double(values, "wigner.sigma_g", cfg.wigner_sigma_g);
  s.apply_double(values, "wigner.sigma_h", cfg.wigner_sigma_h);
  s.apply_double(values, "wigner.eta1", cfg.wigner_eta1);
  s.apply_double(values, "wigner.mom_cell", cfg.wigner_mom_cell);

  s.apply_int(values, "field_stats.paths", cfg.field_paths);
  s.apply_array(values, "field_stats.lags", cfg.field_lags);

  for (const auto& [key, v] : values)
    s.errors.push_back(key + ": unknown key (line " + std::to_string(v.line) +
                       ")");

  // Range constraints.
  s.constrain(cfg.schema_version == 1, "schema_version: must be 1");
  s.constrain(cfg.dim >= 1 && cfg.dim <= 3, "dim: must be 1..3");
  s.constrain(grid_dim < 0 || grid_dim == cfg.dim,
              "grid.dim: must equal dim when given");
  s.constrain(cfg.spectrum_kind == "gaussian",
              "spectrum.kind: must be \"gaussian\"");
  s.constrain(cfg.spectrum_amplitude >= 0, "spectrum.amplitude: must be >= 0");
  s.constrain(cfg.spectrum_sigma > 0, "spectrum.sigma: must be > 0");
  s.constrain(cfg.gap_kind == "constant" || cfg.gap_kind == "quadratic",
              "gap.kind: must be \"constant\" or \"quadratic\"");
  s.constrain(cfg.gap_gamma0 >= 0, "gap.gamma0: must be >= 0");
  s.constrain(cfg.gap_gamma2 >= 0, "gap.gamma2: must be >= 0");
  s.constrain(cfg.grid_n == 0 ||
                  (cfg.grid_n >= 2 && (cfg.grid_n & (cfg.grid_n - 1)) == 0),
              "grid.n: must be 0 (auto) or a power of two");
  s.constrain(cfg.grid_L >= 0, "grid.L: must be >= 0 (0 = auto)");
  s.constrain(cfg.grid_xi_max_target > 0, "grid.xi_max_target: must be > 0");
  s.constrain(cfg.eps > 0 && cfg.eps < 1, "eps: must be in (0, 1)");
  s.constrain(cfg.alpha > 0, "alpha: must be > 0");
  s.constrain(cfg.beta >= 0, "beta: must be >= 0");
  s.constrain(!cfg.t_macro_list.empty(), "t_macro_list: must not be empty");
  for (double t : cfg.t_macro_list)
    s.constrain(t >= 0, "t_macro_list: entries must be >= 0");
  s.constrain(cfg.dt > 0, "dt: must be > 0");
  s.constrain(cfg.width_factor > 0, "width_factor: must be > 0");
  s.constrain(cfg.profile_kind == "gaussian" ||
                  cfg.profile_kind == "gaussian_hermite",
              "profile.kind: must be \"gaussian\" or \"gaussian_hermite\"");
  s.constrain(cfg.profile_amplitude >= 0, "profile.amplitude: must be >= 0");
  s.constrain(cfg.profile_sigma > 0, "profile.sigma: must be > 0");
  s.constrain(cfg.n_realizations >= 2, "n_realizations: must be >= 2");
  s.constrain(cfg.workers >= 0, "workers: must be >= 0");
  s.constrain(cfg.highfreq_cell > 0, "highfreq.cell: must be > 0");
  s.constrain(cfg.kinetic_xi_max > 0, "kinetic.xi_max: must be > 0");
  s.constrain(cfg.kinetic_n_cells >= 2, "kinetic.n_cells: must be >= 2");
  s.constrain(cfg.kinetic_dt > 0, "kinetic.dt: must be > 0");
  s.constrain(cfg.kinetic_t >= 0, "kinetic.t: must be >= 0");
  s.constrain(cfg.kinetic_k_max >= 1, "kinetic.k_max: must be >= 1");
  s.constrain(cfg.kinetic_n_mc >= 1, "kinetic.n_mc: must be >= 1");
  s.constrain(cfg.kinetic_n_particles >= 1,
              "kinetic.n_particles: must be >= 1");
  s.constrain(cfg.kinetic_hist_hi > cfg.kinetic_hist_lo,
              "kinetic.hist_hi: must exceed kinetic.hist_lo");
  s.constrain(cfg.kinetic_hist_cells >= 1,
              "kinetic.hist_cells: must be >= 1");
  s.constrain(cfg.wigner_sigma_g > 0, "wigner.sigma_g: must be > 0");
  s.constrain(cfg.wigner_sigma_h > 0, "wigner.sigma_h: must be > 0");
  s.constrain(cfg.wigner_eta1 > 0, "wigner.eta1: must be > 0");
  s.constrain(cfg.wigner_mom_cell > 0, "wigner.mom_cell: must be > 0");
  s.constrain(cfg.field_paths >= 2, "field_stats.paths: must be >= 2");

  if (!s.errors.empty()) {
    std::string msg = "config errors:";
    for (const auto& e : s.errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_array(const std::vector<double>& a) {
  std::string out = "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ", ";
    out += fmt_double(a[i]);
  }
  return out + "]";
}

}  // namespace

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "schema_version = " << c.schema_version << "\n";
  os << "scenario = \"" << c.scenario << "\"\n";
  os << "dim = " << c.dim << "\n";
  os << "eps = " << fmt_double(c.eps) << "\n";
  os << "alpha = " << fmt_double(c.alpha) << "\n";
  os << "beta = " << fmt_double(c.beta) << "\n";
  os << "t_macro_list = " << fmt_array(c.t_macro_list) << "\n";
  os << "dt = " << fmt_double(c.dt) << "\n";
  os << "width_factor = " << fmt_double(c.width_factor) << "\n";
  os << "n_realizations = " << c.n_realizations << "\n";
  os << "master_seed = " << c.master_seed << "\n";
  os << "workers = " << c.workers << "\n";
  os << "probes_xi = " << fmt_array(c.probes_xi) << "\n";
  os << "\n[spectrum]\n";
  os << "kind = \"" << c.spectrum_kind << "\"\n";
  os << "amplitude = " << fmt_double(c.spectrum_amplitude) << "\n";
  os << "sigma = " << fmt_double(c.spectrum_sigma) << "\n";
  os << "\n[gap]\n";
  os << "kind = \"" << c.gap_kind << "\"\n";
  os << "gamma0 = " << fmt_double(c.gap_gamma0) << "\n";
  os << "gamma2 = " << fmt_double(c.gap_gamma2) << "\n";
  os << "\n[grid]\n";
  os << "n = " << c.grid_n << "\n";
  os << "L = " << fmt_double(c.grid_L) << "\n";
  os << "xi_max_target = " << fmt_double(c.grid_xi_max_target) << "\n";
  os << "\n[profile]\n";
  os << "kind = \"" << c.profile_kind << "\"\n";
  os << "amplitude = " << fmt_double(c.profile_amplitude) << "\n";
  os << "sigma = " << fmt_double(c.profile_sigma) << "\n";
  os << "\n[highfreq]\n";
  os << "cell = " << fmt_double(c.highfreq_cell) << "\n";
  os << "\n[kinetic]\n";
  os << "xi_max = " << fmt_double(c.kinetic_xi_max) << "\n";
  os << "n_cells = " << c.kinetic_n_cells << "\n";
  os << "dt = " << fmt_double(c.kinetic_dt) << "\n";
  os << "t = " << fmt_double(c.kinetic_t) << "\n";
  os << "k_max = " << c.kinetic_k_max << "\n";
  os << "n_mc = " << c.kinetic_n_mc << "\n";
  os << "n_particles = " << c.kinetic_n_particles << "\n";
  os << "hist_lo = " << fmt_double(c.kinetic_hist_lo) << "\n";
  os << "hist_hi = " << fmt_double(c.kinetic_hist_hi) << "\n";
  os << "hist_cells = " << c.kinetic_hist_cells << "\n";
  os << "\n[wigner]\n";
  os << "sigma_g = " << fmt_double(c.wigner_sigma_g) << "\n";
  os << "sigma_h = " << fmt_double(c.wigner_sigma_h) << "\n";
  os << "eta1 = " << fmt_double(c.wigner_eta1) << "\n";
  os << "mom_cell = " << fmt_double(c.wigner_mom_cell) << "\n";
  os << "\n[field_stats]\n";
  os << "paths = " << c.field_paths << "\n";
  os << "lags = " << fmt_array(c.field_lags) << "\n";
  return os.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
  const std::string text = serialize_config(cfg);
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

void validate_for_command(const RunConfig& cfg, const std::string& command) {
  if (command == "wigner") {
    if (!(cfg.alpha > 0 && cfg.alpha < 1))
      throw ConfigError("alpha: wigner requires alpha in (0, 1)");
    if (std::abs(cfg.alpha + cfg.beta - 2.0) > 1e-12)
      throw ConfigError("beta: wigner requires alpha + beta = 2");
  }
  if (command == "high-freq") {
    for (double xi : cfg.probes_xi)
      if (xi == 0.0)
        throw ConfigError("probes_xi: high-freq probes must be nonzero");
  }
}

}  // namespace rswave
