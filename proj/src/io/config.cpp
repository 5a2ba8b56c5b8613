#include "io/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace charids {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0' || !std::isfinite(x))
    throw ConfigError(key + ": malformed number '" + v + "'");
  return x;
}

long parse_int(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError(key + ": malformed integer '" + v + "'");
  return x;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(v);
  while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
  if (out.empty()) out.push_back("");
  return out;
}

// Raw key-value table with consume-as-you-go access; whatever is left at the
// end is an unknown key.
struct Table {
  std::map<std::string, std::string> kv;

  bool take(const std::string& key, std::string& out) {
    auto it = kv.find(key);
    if (it == kv.end()) return false;
    out = it->second;
    kv.erase(it);
    return true;
  }
  double num(const std::string& key, double def) {
    std::string v;
    if (!take(key, v)) return def;
    return parse_double(key, v);
  }
  int integer(const std::string& key, int def, int lo, int hi) {
    std::string v;
    if (!take(key, v)) return def;
    const long x = parse_int(key, v);
    if (x < lo || x > hi)
      throw ConfigError(key + ": value " + std::to_string(x) + " outside [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return int(x);
  }
  std::vector<double> num_list(const std::string& key, std::vector<double> def,
                               std::size_t want) {
    std::string v;
    std::vector<double> out;
    if (!take(key, v)) {
      out = std::move(def);
    } else {
      for (const auto& tok : split_list(v)) out.push_back(parse_double(key, tok));
    }
    if (out.size() == 1 && want > 1) out.assign(want, out[0]);
    if (out.size() != want)
      throw ConfigError(key + ": expected " + std::to_string(want) +
                        " values (or 1 to broadcast), got " + std::to_string(out.size()));
    return out;
  }
  std::vector<int> int_list(const std::string& key, std::vector<int> def, std::size_t want) {
    std::string v;
    std::vector<int> out;
    if (!take(key, v)) {
      out = std::move(def);
    } else {
      for (const auto& tok : split_list(v)) out.push_back(int(parse_int(key, tok)));
    }
    if (out.size() == 1 && want > 1) out.assign(want, out[0]);
    if (out.size() != want)
      throw ConfigError(key + ": expected " + std::to_string(want) +
                        " values (or 1 to broadcast), got " + std::to_string(out.size()));
    return out;
  }
  std::string word(const std::string& key, const std::string& def) {
    std::string v;
    if (!take(key, v)) return def;
    return v;
  }
};

std::string fmt_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T>
std::string fmt_list(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_same_v<T, double>)
      s += fmt_num(v[i]);
    else
      s += std::to_string(v[i]);
  }
  return s;
}

void emit_theta(std::vector<std::pair<std::string, std::string>>& out, const std::string& p,
                const ThetaProfile& t) {
  out.emplace_back(p + ".base", fmt_num(t.base));
  out.emplace_back(p + ".s_amp", fmt_num(t.s_amp));
  out.emplace_back(p + ".s_freq", fmt_num(t.s_freq));
  out.emplace_back(p + ".s_phase", fmt_num(t.s_phase));
  out.emplace_back(p + ".ang_amp", fmt_num(t.ang_amp));
  out.emplace_back(p + ".ang_k", fmt_list(t.ang_k));
  out.emplace_back(p + ".ang_phase", fmt_num(t.ang_phase));
}

void emit_phi(std::vector<std::pair<std::string, std::string>>& out, const std::string& p,
              const PhiProfile& f) {
  out.emplace_back(p + ".mean", fmt_num(f.mean));
  out.emplace_back(p + ".s_amp", fmt_num(f.s_amp));
  out.emplace_back(p + ".s_freq", fmt_num(f.s_freq));
  out.emplace_back(p + ".s_phase", fmt_num(f.s_phase));
  out.emplace_back(p + ".ang_amp", fmt_num(f.ang_amp));
  out.emplace_back(p + ".mix_amp", fmt_num(f.mix_amp));
  out.emplace_back(p + ".ang_k", fmt_list(f.ang_k));
  out.emplace_back(p + ".ang_phase", fmt_num(f.ang_phase));
}

void emit_density(std::vector<std::pair<std::string, std::string>>& out, const std::string& p,
                  const DensityProfile& f) {
  out.emplace_back(p + ".amp", fmt_num(f.amp));
  out.emplace_back(p + ".s_lo", fmt_num(f.s_lo));
  out.emplace_back(p + ".s_hi", fmt_num(f.s_hi));
  out.emplace_back(p + ".ang_amp", fmt_num(f.ang_amp));
  out.emplace_back(p + ".ang_k", fmt_list(f.ang_k));
  out.emplace_back(p + ".ang_phase", fmt_num(f.ang_phase));
  out.emplace_back(p + ".p_lo", fmt_list(f.p_lo));
  out.emplace_back(p + ".p_hi", fmt_list(f.p_hi));
}

void read_theta(Table& t, const std::string& p, ThetaProfile& out, std::size_t d) {
  out.base = t.num(p + ".base", out.base);
  out.s_amp = t.num(p + ".s_amp", out.s_amp);
  out.s_freq = t.num(p + ".s_freq", out.s_freq);
  out.s_phase = t.num(p + ".s_phase", out.s_phase);
  out.ang_amp = t.num(p + ".ang_amp", out.ang_amp);
  out.ang_k = t.int_list(p + ".ang_k", std::vector<int>(d, 0), d);
  out.ang_phase = t.num(p + ".ang_phase", out.ang_phase);
}

void read_phi(Table& t, const std::string& p, PhiProfile& out, std::size_t d) {
  out.mean = t.num(p + ".mean", out.mean);
  out.s_amp = t.num(p + ".s_amp", out.s_amp);
  out.s_freq = t.num(p + ".s_freq", out.s_freq);
  out.s_phase = t.num(p + ".s_phase", out.s_phase);
  out.ang_amp = t.num(p + ".ang_amp", out.ang_amp);
  out.mix_amp = t.num(p + ".mix_amp", out.mix_amp);
  out.ang_k = t.int_list(p + ".ang_k", std::vector<int>(d, 0), d);
  out.ang_phase = t.num(p + ".ang_phase", out.ang_phase);
}

void read_density(Table& t, const std::string& p, DensityProfile& out, std::size_t d,
                  std::size_t n) {
  out.amp = t.num(p + ".amp", out.amp);
  out.s_lo = t.num(p + ".s_lo", out.s_lo);
  out.s_hi = t.num(p + ".s_hi", out.s_hi);
  out.ang_amp = t.num(p + ".ang_amp", out.ang_amp);
  out.ang_k = t.int_list(p + ".ang_k", std::vector<int>(d, 0), d);
  out.ang_phase = t.num(p + ".ang_phase", out.ang_phase);
  out.p_lo = t.num_list(p + ".p_lo", std::vector<double>(n, 0.0), n);
  out.p_hi = t.num_list(p + ".p_hi", std::vector<double>(n, 0.0), n);
}

std::string canonical_text(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("run.n", std::to_string(c.spec.n));
  kv.emplace_back("run.quad_q", std::to_string(c.opt.quad_q));
  kv.emplace_back("run.integrator", c.opt.euler_debug ? "euler" : "rk4");
  kv.emplace_back("run.rk_substeps", std::to_string(c.opt.rk_substeps));
  kv.emplace_back("grid.n_gen", std::to_string(c.n_gen));
  kv.emplace_back("grid.n_ang", std::to_string(c.n_ang));
  kv.emplace_back("grid.length", fmt_num(c.spec.length));
  kv.emplace_back("grid.extent", fmt_list(c.spec.ang_extent));
  kv.emplace_back("matter.mass", fmt_num(c.spec.mass));
  const char* pk = c.spec.potential.kind == Potential::Kind::zero        ? "zero"
                   : c.spec.potential.kind == Potential::Kind::quadratic ? "quadratic"
                                                                         : "quartic";
  kv.emplace_back("matter.potential", pk);
  kv.emplace_back("matter.potential_coef", fmt_num(c.spec.potential.coef));
  kv.emplace_back("gamma.lambda", fmt_num(c.spec.gamma.lambda));
  kv.emplace_back("gamma.pert_amp", fmt_num(c.spec.gamma.pert_amp));
  kv.emplace_back("gamma.pert_k", fmt_list(c.spec.gamma.pert_k));
  kv.emplace_back("gamma.pert_phase", fmt_num(c.spec.gamma.pert_phase));
  kv.emplace_back("gamma.pert_dphase", fmt_num(c.spec.gamma.pert_dphase));
  kv.emplace_back("gamma.gen_freq", fmt_num(c.spec.gamma.gen_freq));
  kv.emplace_back("gamma.gen_phase", fmt_num(c.spec.gamma.gen_phase));
  emit_theta(kv, "theta0", c.spec.theta[0]);
  emit_theta(kv, "theta1", c.spec.theta[1]);
  emit_phi(kv, "phi0", c.spec.phi[0]);
  emit_phi(kv, "phi1", c.spec.phi[1]);
  emit_density(kv, "f0", c.spec.density[0]);
  emit_density(kv, "f1", c.spec.density[1]);
  kv.emplace_back("margins.c0", fmt_num(c.spec.margins.c0));
  kv.emplace_back("margins.c1", fmt_num(c.spec.margins.c1));
  kv.emplace_back("margins.c2", fmt_num(c.spec.margins.c2));
  kv.emplace_back("margins.c2p", fmt_num(c.spec.margins.c2p));
  kv.emplace_back("margins.collar", fmt_num(c.spec.margins.collar));
  kv.emplace_back("margins.eps_exp", fmt_num(c.spec.margins.eps_exp));
  std::sort(kv.begin(), kv.end());
  std::string text;
  for (const auto& [k, v] : kv) {
    text += k;
    text += " = ";
    text += v;
    text += '\n';
  }
  return text;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

RunConfig parse_config_text(const std::string& text) {
  Table t;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    if (t.kv.count(key)) throw ConfigError("duplicate key: " + key);
    t.kv[key] = val;
  }

  RunConfig c;
  c.spec.n = t.integer("run.n", 3, 3, 6);
  const std::size_t d = std::size_t(c.spec.n - 1);
  c.opt.quad_q = t.integer("run.quad_q", 24, 2, 256);
  const std::string integ = t.word("run.integrator", "rk4");
  if (integ == "rk4")
    c.opt.euler_debug = false;
  else if (integ == "euler")
    c.opt.euler_debug = true;
  else
    throw ConfigError("run.integrator: expected rk4 or euler, got '" + integ + "'");
  c.opt.rk_substeps = t.integer("run.rk_substeps", 2, 1, 64);

  c.n_gen = t.integer("grid.n_gen", 65, 5, 100000);
  c.n_ang = t.integer("grid.n_ang", 16, 5, 100000);
  c.spec.length = t.num("grid.length", 1.0);
  if (!(c.spec.length > 0.0)) throw ConfigError("grid.length: must be positive");
  c.spec.ang_extent = t.num_list("grid.extent", std::vector<double>(d, 2.0 * M_PI), d);
  for (double e : c.spec.ang_extent)
    if (!(e > 0.0)) throw ConfigError("grid.extent: entries must be positive");

  c.spec.mass = t.num("matter.mass", 1.0);
  const std::string pot = t.word("matter.potential", "zero");
  if (pot == "zero")
    c.spec.potential.kind = Potential::Kind::zero;
  else if (pot == "quadratic")
    c.spec.potential.kind = Potential::Kind::quadratic;
  else if (pot == "quartic")
    c.spec.potential.kind = Potential::Kind::quartic;
  else
    throw ConfigError("matter.potential: expected zero, quadratic or quartic, got '" + pot +
                      "'");
  c.spec.potential.coef = t.num("matter.potential_coef", 0.0);

  c.spec.gamma.lambda = t.num("gamma.lambda", 1.0);
  c.spec.gamma.pert_amp = t.num("gamma.pert_amp", 0.0);
  c.spec.gamma.pert_k = t.int_list("gamma.pert_k", std::vector<int>(d, 0), d);
  c.spec.gamma.pert_phase = t.num("gamma.pert_phase", 0.0);
  c.spec.gamma.pert_dphase = t.num("gamma.pert_dphase", 0.0);
  c.spec.gamma.gen_freq = t.num("gamma.gen_freq", 0.0);
  c.spec.gamma.gen_phase = t.num("gamma.gen_phase", 0.0);

  read_theta(t, "theta0", c.spec.theta[0], d);
  read_theta(t, "theta1", c.spec.theta[1], d);
  read_phi(t, "phi0", c.spec.phi[0], d);
  read_phi(t, "phi1", c.spec.phi[1], d);
  read_density(t, "f0", c.spec.density[0], d, std::size_t(c.spec.n));
  read_density(t, "f1", c.spec.density[1], d, std::size_t(c.spec.n));

  c.spec.margins.c0 = t.num("margins.c0", c.spec.margins.c0);
  c.spec.margins.c1 = t.num("margins.c1", c.spec.margins.c1);
  c.spec.margins.c2 = t.num("margins.c2", c.spec.margins.c2);
  c.spec.margins.c2p = t.num("margins.c2p", c.spec.margins.c2p);
  c.spec.margins.collar = t.num("margins.collar", c.spec.margins.collar);
  c.spec.margins.eps_exp = t.num("margins.eps_exp", c.spec.margins.eps_exp);

  if (!t.kv.empty()) throw ConfigError("unknown key: " + t.kv.begin()->first);

  c.canonical = canonical_text(c);
  c.hash = fnv1a64(c.canonical);
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace charids
