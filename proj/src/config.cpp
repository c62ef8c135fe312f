#include "liouwave/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "liouwave/error.hpp"

namespace liouwave {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& key, const std::string& msg) {
  throw ConfigError(key + ": " + msg);
}

std::string fmt_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Accepts plain reals and multiples of pi: "12.5", "pi", "4pi", "4*pi", "-2.5*pi".
bool parse_real(const std::string& s, double& out) {
  std::string t = trim(s);
  double factor = 1.0;
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    t = trim(t.substr(0, t.size() - 2));
    if (!t.empty() && t.back() == '*') t = trim(t.substr(0, t.size() - 1));
    if (t.empty() || t == "+") t = "1";
    if (t == "-") t = "-1";
  }
  if (t.empty()) return false;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (errno != 0 || end != t.c_str() + t.size() || !std::isfinite(v)) return false;
  out = v * factor;
  return true;
}

bool parse_int(const std::string& s, long long& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (errno != 0 || end != t.c_str() + t.size()) return false;
  out = v;
  return true;
}

class KeyReader {
 public:
  KeyReader(std::map<std::string, std::string> values, RunConfig& cfg)
      : values_(std::move(values)), cfg_(cfg) {}

  bool has(const std::string& k) const { return values_.count(k) > 0; }

  std::string raw(const std::string& k, const std::string& def) {
    used_.insert(k);
    auto it = values_.find(k);
    const bool is_default = it == values_.end();
    const std::string v = is_default ? def : it->second;
    record(k, v, is_default);
    return v;
  }

  double real(const std::string& k, double def,
              const std::function<bool(double)>& ok = {}, const char* constraint = "") {
    used_.insert(k);
    auto it = values_.find(k);
    if (it == values_.end()) {
      record(k, fmt_real(def), true);
      return def;
    }
    double v = 0.0;
    if (!parse_real(it->second, v)) fail(k, "expected a real number, got '" + it->second + "'");
    if (ok && !ok(v)) fail(k, std::string("constraint violated: ") + constraint);
    record(k, fmt_real(v), false);
    return v;
  }

  long long integer(const std::string& k, long long def,
                    const std::function<bool(long long)>& ok = {}, const char* constraint = "") {
    used_.insert(k);
    auto it = values_.find(k);
    if (it == values_.end()) {
      record(k, std::to_string(def), true);
      return def;
    }
    long long v = 0;
    if (!parse_int(it->second, v)) fail(k, "expected an integer, got '" + it->second + "'");
    if (ok && !ok(v)) fail(k, std::string("constraint violated: ") + constraint);
    record(k, std::to_string(v), false);
    return v;
  }

  bool boolean(const std::string& k, bool def) {
    const std::string v = raw(k, def ? "true" : "false");
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(k, "expected a boolean (true|false), got '" + v + "'");
  }

  std::string choice(const std::string& k, const std::string& def,
                     const std::vector<std::string>& allowed) {
    const std::string v = raw(k, def);
    for (const auto& a : allowed)
      if (v == a) return v;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
    fail(k, "expected one of " + list + ", got '" + v + "'");
  }

  std::vector<double> real_list(const std::string& k, const std::vector<double>& def) {
    used_.insert(k);
    auto it = values_.find(k);
    if (it == values_.end()) {
      std::string s;
      for (double x : def) s += (s.empty() ? "" : ",") + fmt_real(x);
      record(k, s, true);
      return def;
    }
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
      double v = 0.0;
      if (!parse_real(item, v)) fail(k, "expected a comma separated list of reals");
      out.push_back(v);
    }
    if (out.empty()) fail(k, "empty list");
    record(k, it->second, false);
    return out;
  }

  void reject_unused(const std::string& family) const {
    for (const auto& [k, v] : values_)
      if (!used_.count(k)) fail(k, "unknown key for family " + family);
  }

 private:
  void record(const std::string& k, const std::string& v, bool is_default) {
    cfg_.resolved.emplace_back(k, v);
    if (is_default) cfg_.defaulted.push_back(k);
  }

  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
  RunConfig& cfg_;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::map<std::string, std::string>& overrides) {
  std::map<std::string, std::string> values;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (values.count(key)) fail(key, "duplicate key");
    values[key] = val;
  }
  for (const auto& [k, v] : overrides) values[k] = v;

  RunConfig c;
  {
    std::ostringstream eff;
    for (const auto& [k, v] : values) eff << k << " = " << v << "\n";
    c.text = eff.str();
  }
  KeyReader r(values, c);

  c.scenario = r.choice("scenario", "evolve",
                        {"evolve", "picard-verify", "functional-scan", "bubble-probe", "check"});
  const std::string fam =
      r.choice("family", "sinh_gordon", {"mean_field", "sinh_gordon", "asymmetric_sinh", "toda"});
  c.family = family_from_string(fam);

  std::size_t nrho = 1;
  std::size_t nweights = 1;
  if (c.family == Family::SinhGordon || c.family == Family::AsymmetricSinh) nrho = nweights = 2;
  if (c.family == Family::AsymmetricSinh)
    c.a = r.real("a", 1.0, [](double x) { return x > 0.0; }, "a > 0");
  if (c.family == Family::Toda) {
    c.matrix = matrix_kind_from_string(r.choice("matrix", "A", {"A", "B", "C", "G2", "custom"}));
    c.toda_n = static_cast<int>(
        r.integer("matrix.n", 2, [](long long n) { return n >= 2 && n <= 16; }, "2 <= n <= 16"));
    if (c.matrix == MatrixKind::G2 && c.toda_n != 2) fail("matrix.n", "G2 has rank 2");
    if (c.matrix == MatrixKind::Custom) {
      if (!r.has("matrix.entries")) fail("matrix.entries", "required for matrix = custom");
      c.matrix_entries = r.real_list("matrix.entries", {});
      if (c.matrix_entries.size() != static_cast<std::size_t>(c.toda_n) * c.toda_n)
        fail("matrix.entries", "need matrix.n^2 entries");
    }
    nrho = nweights = static_cast<std::size_t>(c.toda_n);
  }
  for (std::size_t i = 1; i <= nrho; ++i) c.rho.push_back(r.real("rho" + std::to_string(i), 0.0));
  for (std::size_t i = 1; i <= nweights; ++i) {
    const std::string base = "weight" + std::to_string(i);
    if (!r.has(base + ".amplitude") && !r.has(base + ".mode")) continue;
    WeightConfig w;
    w.amplitude = r.real(base + ".amplitude", 0.0, [](double x) { return std::abs(x) < 1.0; },
                         "|amplitude| < 1 keeps the weight positive");
    w.mode = static_cast<int>(r.integer(base + ".mode", 1, [](long long m) { return m >= 0; }, "mode >= 0"));
    c.weights[static_cast<int>(i)] = w;
  }

  auto even8 = [](long long n) { return n >= 8 && n % 2 == 0 && n <= 8192; };
  c.n1 = static_cast<int>(r.integer("grid.n1", 64, even8, "n1 must be even >= 8"));
  c.n2 = static_cast<int>(r.integer("grid.n2", 64, even8, "n2 must be even >= 8"));
  auto positive = [](double x) { return x > 0.0; };
  c.L1 = r.real("grid.L1", 2.0 * std::numbers::pi, positive, "L1 > 0");
  c.L2 = r.real("grid.L2", 2.0 * std::numbers::pi, positive, "L2 > 0");

  c.T = r.real("T", 1.0, positive, "T > 0");
  c.stepper.h = r.real("stepper.h", 1e-3, positive, "h > 0");
  c.stepper.scheme = scheme_from_string(r.choice("stepper.scheme", "symmetric", {"frozen", "symmetric"}));
  c.stepper.dealias = r.boolean("stepper.dealias", true);
  c.stepper.sample_every = static_cast<std::size_t>(
      r.integer("stepper.sample_every", 10, [](long long n) { return n >= 1; }, "sample_every >= 1"));
  c.stepper.stop.max_abs_u = r.real("stop.max_abs_u", 200.0, positive, "max_abs_u > 0");
  c.stepper.stop.max_grad_l2 = r.real("stop.max_grad", 1e6, positive, "max_grad > 0");
  c.stepper.stop.max_steps = static_cast<std::size_t>(
      r.integer("stop.max_steps", 10'000'000, [](long long n) { return n >= 1; }, "max_steps >= 1"));

  c.init.u = r.choice("init.u", "zero", {"zero", "random", "eigenmode", "bubble"});
  c.init.v = r.choice("init.v", "zero", {"zero", "random", "eigenmode"});
  c.init.amplitude = r.real("init.amplitude", 0.5);
  c.init.v_amplitude = r.real("init.v_amplitude", 0.0);
  c.init.kmax = static_cast<int>(r.integer("init.kmax", 4, [](long long k) { return k >= 1; }, "kmax >= 1"));
  c.init.mode_k1 = static_cast<int>(r.integer("init.mode_k1", 1));
  c.init.mode_k2 = static_cast<int>(r.integer("init.mode_k2", 0));
  c.init.lambda = r.real("init.lambda", 8.0, [](double x) { return x >= 1.0; }, "lambda >= 1");
  c.init.center1 = r.real("init.center1", std::numbers::pi);
  c.init.center2 = r.real("init.center2", std::numbers::pi);
  c.init.clamp = r.real("init.clamp", 50.0, positive, "clamp > 0");
  c.init.offset = r.real("init.offset", 0.0);
  if (2 * c.init.kmax > std::min(c.n1, c.n2) - 2)
    fail("init.kmax", "must stay below the Nyquist band of the grid");

  c.blowup_enabled = r.boolean("blowup.enabled", true);
  c.blowup.grad_l2 = r.real("blowup.grad_threshold", 1e3, positive, "grad_threshold > 0");
  c.blowup.log_integral = r.real("blowup.log_threshold", 50.0, positive, "log_threshold > 0");
  c.blowup.query.r = r.real("blowup.r", 0.5, positive, "r > 0");
  if (c.blowup.query.r >= 0.5 * std::min(c.L1, c.L2)) fail("blowup.r", "r must be < min(L1,L2)/2");
  c.blowup.query.eps = r.real("blowup.eps", 0.1, [](double x) { return x > 0.0 && x < 1.0; }, "0 < eps < 1");
  c.blowup.query.delta = r.real("blowup.delta", 0.0, [](double x) { return x >= 0.0; }, "delta >= 0");

  c.picard.T = r.real("picard.T", 0.05, positive, "picard.T > 0");
  c.picard.h = r.real("picard.h", 1e-3, positive, "picard.h > 0");
  c.picard.tol = r.real("picard.tol", 1e-10, positive, "picard.tol > 0");
  c.picard.max_iter = static_cast<int>(
      r.integer("picard.max_iter", 50, [](long long n) { return n >= 1; }, "max_iter >= 1"));

  const std::vector<double> def_scan =
      c.scenario == "bubble-probe" ? std::vector<double>{2, 4, 8, 16, 32}
                                   : std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8};
  c.scan_values = r.real_list("scan.values", def_scan);

  c.output_dir = r.raw("output", "liouwave_out");
  c.seed = static_cast<std::uint64_t>(
      r.integer("seed", 0, [](long long s) { return s >= 0; }, "seed >= 0"));
  c.snapshots = r.boolean("output.snapshots", false);
  c.checkpoint_every = static_cast<std::size_t>(
      r.integer("checkpoint.every", 0, [](long long n) { return n >= 0; }, "checkpoint.every >= 0"));

  r.reject_unused(fam);

  // Cross-module preconditions before any compute.
  try {
    c.stepper.validate();
    BlowupThresholds th = c.blowup;
    th.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

GridRef build_grid(const RunConfig& c) { return make_torus_grid(c.n1, c.n2, c.L1, c.L2); }

CouplingConfig build_coupling(const RunConfig& c, const GridRef& grid) {
  CouplingConfig cc;
  cc.family = c.family;
  cc.rho = c.rho;
  cc.a = c.a;
  if (c.family == Family::Toda)
    cc.matrix = c.matrix == MatrixKind::Custom ? custom_matrix(c.toda_n, c.matrix_entries)
                                               : cartan_matrix(c.matrix, c.toda_n);
  if (!c.weights.empty()) {
    const int count = c.weights.rbegin()->first;
    for (int i = 1; i <= count; ++i) {
      WeightConfig w;
      if (auto it = c.weights.find(i); it != c.weights.end()) w = it->second;
      cc.weights.push_back(sample(grid, [&](double x1, double) {
        return 1.0 + w.amplitude * std::cos(w.mode * 2.0 * std::numbers::pi * x1 / grid->L1());
      }));
    }
  }
  cc.validate();
  return cc;
}

WaveState build_initial_state(const RunConfig& c, const GridRef& grid) {
  const std::size_t ncomp = c.family == Family::Toda ? static_cast<std::size_t>(c.toda_n) : 1;
  auto eigenmode = [&](double amp) {
    return sample(grid, [&](double x1, double x2) {
      return amp * std::cos(2.0 * std::numbers::pi *
                            (c.init.mode_k1 * x1 / grid->L1() + c.init.mode_k2 * x2 / grid->L2()));
    });
  };
  std::vector<ScalarField> u, v;
  for (std::size_t i = 0; i < ncomp; ++i) {
    ScalarField ui(grid);
    if (c.init.u == "random")
      ui = random_smooth_field(grid, c.seed * 1000 + 2 * i, c.init.amplitude, c.init.kmax);
    else if (c.init.u == "eigenmode")
      ui = eigenmode(c.init.amplitude);
    else if (c.init.u == "bubble")
      ui = bubble_field(grid, {c.init.center1, c.init.center2}, c.init.lambda, c.init.clamp);
    ui += c.init.offset;
    ScalarField vi(grid);
    if (c.init.v == "random")
      vi = random_smooth_field(grid, c.seed * 1000 + 2 * i + 1, c.init.v_amplitude, c.init.kmax);
    else if (c.init.v == "eigenmode")
      vi = eigenmode(c.init.v_amplitude);
    u.push_back(std::move(ui));
    v.push_back(std::move(vi));
  }
  return wave_state_new(grid, std::move(u), std::move(v), 0.0);
}

}  // namespace liouwave
