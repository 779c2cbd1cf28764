#include "filmcascade/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace filmcascade {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  std::ostringstream os;
  os << "config line " << line << ": " << msg;
  throw ConfigError(os.str());
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " = '" + v + "' is not a number");
  }
  if (used != v.size()) throw ConfigError("config: " + key + " = '" + v + "' is not a number");
  return x;
}

long to_long(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long x = 0;
  try {
    x = std::stol(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " = '" + v + "' is not an integer");
  }
  if (used != v.size()) throw ConfigError("config: " + key + " = '" + v + "' is not an integer");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: " + key + " = '" + v + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const std::string& s : split_list(v)) out.push_back(to_double(key, s));
  return out;
}

}  // namespace

IniDocument parse_ini(const std::string& text) {
  IniDocument doc;
  std::istringstream in(text);
  std::string raw, section;
  bool have_section = false;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t c = raw.find_first_of("#;");
    const std::string s = trim(c == std::string::npos ? raw : raw.substr(0, c));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) fail(line, "empty section name");
      doc.sections[section];
      have_section = true;
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    if (!have_section) fail(line, "key outside any section");
    const std::string key = trim(s.substr(0, eq)), val = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    auto& sec = doc.sections[section];
    if (sec.count(key)) fail(line, "duplicate key '" + key + "'");
    sec[key] = val;
  }
  return doc;
}

double ExperimentConfig::epsilon_at(double d) const {
  return epsilon_rule == EpsilonRule::EqualsDelta ? d : epsilon;
}

ScalingParams ExperimentConfig::params_at(double d) const {
  return make_params(d, epsilon_at(d), reynolds, weber, alpha);
}

double ExperimentConfig::horizon_at(double d) const {
  if (!slow_time) return t_end;
  const double e = epsilon_at(d);
  if (!(e > 0.0)) throw ConfigError("config: slow_time needs epsilon > 0");
  return t_end / e;
}

void ExperimentConfig::validate() const {
  if (deltas.empty()) throw ConfigError("config: delta list is empty");
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (!(deltas[i] < deltas[i - 1])) throw ConfigError("config: deltas must strictly decrease");
  for (double d : deltas) params_at(d).validate();
  if (nx < 8 || nx % 2) throw ConfigError("config: nx must be even and >= 8");
  if (ny < 8) throw ConfigError("config: ny must be >= 8");
  if (dt < 0.0) throw ConfigError("config: dt must be >= 0");
  if (!(t_end >= 0.0)) throw ConfigError("config: t_end must be >= 0");
  if (cadence < 1 || samples < 1 || snapshots < 0) throw ConfigError("config: cadence, samples >= 1");
  for (const auto& [n, a] : modes)
    if (n < 0 || n >= nx / 2) throw ConfigError("config: initial mode outside 0..nx/2-1");
  if (random_modes < 0 || random_modes >= nx / 2) throw ConfigError("config: random_modes out of range");
  if (m < 0 || m > 4) throw ConfigError("config: m must be in 0..4");
  if (trials < 1) throw ConfigError("config: trials must be >= 1");
  if (!(transient >= 0.0 && transient < 1.0)) throw ConfigError("config: transient must be in [0, 1)");
}

ExperimentConfig parse_config(const std::string& text) {
  const IniDocument doc = parse_ini(text);
  ExperimentConfig c;
  using Setter = std::function<void(const std::string&)>;
  // Schema: every accepted (section, key) pair and how it is applied.
  const std::map<std::string, std::map<std::string, Setter>> schema = {
      {"experiment",
       {{"kind", [&](const std::string& v) { c.kind = v; }},
        {"out", [&](const std::string& v) { c.out_dir = v; }},
        {"seed", [&](const std::string& v) { c.seed = static_cast<std::uint64_t>(to_long("seed", v)); }}}},
      {"params",
       {{"delta", [&](const std::string& v) { c.delta = to_double("delta", v); }},
        {"deltas", [&](const std::string& v) { c.deltas = to_doubles("deltas", v); }},
        {"epsilon", [&](const std::string& v) { c.epsilon = to_double("epsilon", v); }},
        {"epsilon_rule",
         [&](const std::string& v) {
           if (v == "fixed") c.epsilon_rule = EpsilonRule::Fixed;
           else if (v == "delta") c.epsilon_rule = EpsilonRule::EqualsDelta;
           else throw ConfigError("config: epsilon_rule must be 'fixed' or 'delta'");
         }},
        {"reynolds", [&](const std::string& v) { c.reynolds = to_double("reynolds", v); }},
        {"weber", [&](const std::string& v) { c.weber = to_double("weber", v); }},
        {"alpha", [&](const std::string& v) { c.alpha = to_double("alpha", v); }}}},
      {"resolution",
       {{"nx", [&](const std::string& v) { c.nx = static_cast<int>(to_long("nx", v)); }},
        {"ny", [&](const std::string& v) { c.ny = static_cast<int>(to_long("ny", v)); }},
        {"dt", [&](const std::string& v) { c.dt = to_double("dt", v); }}}},
      {"run",
       {{"t_end", [&](const std::string& v) { c.t_end = to_double("t_end", v); }},
        {"slow_time", [&](const std::string& v) { c.slow_time = to_bool("slow_time", v); }},
        {"cadence", [&](const std::string& v) { c.cadence = static_cast<int>(to_long("cadence", v)); }},
        {"snapshots", [&](const std::string& v) { c.snapshots = static_cast<int>(to_long("snapshots", v)); }},
        {"samples", [&](const std::string& v) { c.samples = static_cast<int>(to_long("samples", v)); }}}},
      {"initial",
       {{"modes",
         [&](const std::string& v) {
           c.modes.clear();
           for (const std::string& item : split_list(v)) {
             const std::size_t col = item.find(':');
             if (col == std::string::npos) throw ConfigError("config: modes entries are 'n:amplitude'");
             c.modes.emplace_back(static_cast<int>(to_long("modes", trim(item.substr(0, col)))),
                                  to_double("modes", trim(item.substr(col + 1))));
           }
         }},
        {"random_modes", [&](const std::string& v) { c.random_modes = static_cast<int>(to_long("random_modes", v)); }},
        {"random_amplitude", [&](const std::string& v) { c.random_amplitude = to_double("random_amplitude", v); }}}},
      {"model", {{"kind", [&](const std::string& v) { c.model = v; }}}},
      {"compare",
       {{"model_a", [&](const std::string& v) { c.model_a = v; }},
        {"model_b", [&](const std::string& v) { c.model_b = v; }}}},
      {"stability",
       {{"k", [&](const std::string& v) { c.k = to_double("k", v); }},
        {"ks", [&](const std::string& v) { c.ks = to_doubles("ks", v); }},
        {"r_min", [&](const std::string& v) { c.r_min = to_double("r_min", v); }},
        {"r_max", [&](const std::string& v) { c.r_max = to_double("r_max", v); }},
        {"ny", [&](const std::string& v) { c.os_ny = static_cast<int>(to_long("ny", v)); }}}},
      {"energy",
       {{"m", [&](const std::string& v) { c.m = static_cast<int>(to_long("m", v)); }},
        {"beta1", [&](const std::string& v) { c.beta1 = to_double("beta1", v); }},
        {"beta2", [&](const std::string& v) { c.beta2 = to_double("beta2", v); }},
        {"beta3", [&](const std::string& v) { c.beta3 = to_double("beta3", v); }},
        {"traj", [&](const std::string& v) { c.traj = v; }}}},
      {"audit",
       {{"trials", [&](const std::string& v) { c.trials = static_cast<int>(to_long("trials", v)); }},
        {"deltas", [&](const std::string& v) { c.audit_deltas = to_doubles("audit.deltas", v); }}}},
      {"gates",
       {{"uniformity_factor", [&](const std::string& v) { c.uniformity_factor = to_double("uniformity_factor", v); }},
        {"decay_factor", [&](const std::string& v) { c.decay_factor = to_double("decay_factor", v); }},
        {"slope_min", [&](const std::string& v) { c.slope_min = to_double("slope_min", v); }},
        {"slope_max", [&](const std::string& v) { c.slope_max = to_double("slope_max", v); }},
        {"korn_bound", [&](const std::string& v) { c.korn_bound = to_double("korn_bound", v); }},
        {"trace_spread", [&](const std::string& v) { c.trace_spread = to_double("trace_spread", v); }},
        {"extension_bound", [&](const std::string& v) { c.extension_bound = to_double("extension_bound", v); }},
        {"dt_refine_tol", [&](const std::string& v) { c.dt_refine_tol = to_double("dt_refine_tol", v); }},
        {"transient", [&](const std::string& v) { c.transient = to_double("transient", v); }}}},
  };
  for (const auto& [sec, kv] : doc.sections) {
    const auto s = schema.find(sec);
    if (s == schema.end()) throw ConfigError("config: unknown section [" + sec + "]");
    for (const auto& [key, val] : kv) {
      const auto k = s->second.find(key);
      if (k == s->second.end()) throw ConfigError("config: unknown key '" + key + "' in [" + sec + "]");
      k->second(val);
    }
  }
  if (c.deltas.empty()) c.deltas = {c.delta};
  if (c.audit_deltas.empty()) c.audit_deltas = {1.0, 0.25, 1.0 / 16.0};
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace filmcascade
