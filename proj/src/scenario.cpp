#include "liouwave/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "liouwave/error.hpp"
#include "liouwave/picard.hpp"
#include "liouwave/snapshot.hpp"

namespace fs = std::filesystem;

namespace liouwave {

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string hexnum(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::ios_base::failure("write failed for '" + path.string() + "'");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path prepare_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p))
    throw std::ios_base::failure("cannot create output directory '" + dir + "'");
  return p;
}

// Rows are buffered without their status so the last one can carry the final status.
class CsvWriter {
 public:
  void add(std::string prefix) { rows_.push_back(std::move(prefix)); }
  std::string render(const std::string& final_status) const {
    std::string out = csv_header();
    for (std::size_t i = 0; i < rows_.size(); ++i)
      out += rows_[i] + (i + 1 == rows_.size() ? final_status : std::string("running")) + "\n";
    return out;
  }
  bool empty() const { return rows_.empty(); }

 private:
  std::vector<std::string> rows_;
};

std::string strip_status(std::string row) {
  // csv_row with an empty status ends in ",\n"; keep up to and including the comma.
  if (!row.empty() && row.back() == '\n') row.pop_back();
  return row;
}

std::string describe_coupling(const RunConfig& c) {
  std::ostringstream o;
  o << "family: " << to_string(c.family) << "\n";
  o << "rho:";
  for (double r : c.rho) o << " " << num(r);
  o << "\n";
  if (c.family == Family::AsymmetricSinh) o << "a: " << num(c.a) << "\n";
  if (c.family == Family::Toda) o << "matrix: " << to_string(c.matrix) << " n=" << c.toda_n << "\n";
  o << "grid: " << c.n1 << "x" << c.n2 << " L=(" << num(c.L1) << ", " << num(c.L2) << ")\n";
  return o.str();
}

std::string describe_monitor(const MonitorResult& m) {
  std::ostringstream o;
  o << "alarm reason: " << m.reason << "\n";
  o << "windows:";
  for (int w : m.windows) o << " " << w;
  o << "\n";
  for (std::size_t i = 0; i < m.reports.size(); ++i) {
    const auto& r = m.reports[i];
    o << "measure e^{" << (r.sign > 0 ? "+" : "-") << "u_" << (r.component + 1)
      << "}: covered=" << num(r.covered) << " alarmed=" << (r.alarmed ? "yes" : "no") << "\n";
    for (std::size_t l = 0; l < r.points.size(); ++l)
      o << "  point " << l + 1 << ": (" << num(r.points[l][0]) << ", " << num(r.points[l][1])
        << ") fraction=" << num(r.fractions[l]) << "\n";
  }
  o << "alternative met: "
    << (m.alternative < 0 ? std::string("none") : "report " + std::to_string(m.alternative + 1))
    << "\n";
  return o.str();
}

std::size_t step_index(double t, double origin, double h) {
  return static_cast<std::size_t>(std::llround((t - origin) / h));
}

struct EvolveJob {
  const RunConfig& cfg;
  fs::path out;
  WaveState start;
  double origin = 0.0;
  std::size_t first_step = 0;
  bool record_initial = true;
  std::optional<double> e0;
  std::string header_note;
};

std::string checkpoint_meta(std::size_t k, double origin, double e0, const std::string& snap,
                            const std::string& config_text) {
  std::ostringstream o;
  o << "liouwave-checkpoint 1\n";
  o << "step = " << k << "\n";
  o << "origin = " << hexnum(origin) << "\n";
  o << "e0 = " << hexnum(e0) << "\n";
  o << "snapshot = " << snap << "\n";
  o << "--- config ---\n" << config_text;
  return o.str();
}

RunOutcome run_evolve(EvolveJob job) {
  const RunConfig& c = job.cfg;
  const GridRef grid = job.start.grid();
  const CouplingConfig cc = build_coupling(c, grid);
  const ConcentrationQuery q = c.blowup.query;

  CsvWriter csv;
  std::optional<double> e0 = job.e0;
  double max_drift = 0.0;
  EvolveOptions opts;
  if (c.blowup_enabled) opts.blowup = c.blowup;
  opts.time_origin = job.origin;
  opts.first_step = job.first_step;
  opts.record_initial = job.record_initial;
  opts.on_sample = [&](const WaveState& s, const FunctionalReport& rep) {
    if (!e0) e0 = rep.E;
    max_drift = std::max(max_drift, std::abs((rep.E - *e0) / (1.0 + std::abs(*e0))));
    csv.add(strip_status(csv_row(s, rep, cc, *e0, q, "")));
    if (c.snapshots) {
      const std::size_t k = step_index(s.t, job.origin, c.stepper.h);
      write_snapshot(s, (job.out / ("snapshot_" + std::to_string(k) + ".lwav")).string());
    }
  };
  opts.checkpoint_every = c.checkpoint_every;
  opts.on_checkpoint = [&](const WaveState& s, std::size_t k) {
    const std::string snap = "checkpoint_" + std::to_string(k) + ".lwav";
    write_snapshot(s, (job.out / snap).string());
    const double e_ref = e0.value_or(energy(job.start, cc));
    write_text(job.out / (snap + ".meta"), checkpoint_meta(k, job.origin, e_ref, snap, c.text));
  };

  const Trajectory traj = evolve(job.start, c.T, c.stepper, cc, opts);
  const std::string status = to_string(traj.status);
  write_text(job.out / "timeseries.csv", csv.render(status));

  std::ostringstream rep;
  rep << "scenario: evolve\n" << job.header_note << describe_coupling(c);
  rep << "h: " << num(c.stepper.h) << " scheme: " << to_string(c.stepper.scheme)
      << " dealias: " << (c.stepper.dealias ? "on" : "off") << "\n";
  rep << "T: " << num(c.T) << "\n";
  rep << "status: " << status << "\n";
  if (!traj.status_detail.empty()) rep << "detail: " << traj.status_detail << "\n";
  rep << "steps taken: " << traj.steps << "\n";
  rep << "samples: " << traj.samples.size() << "\n";
  rep << "final t: " << num(traj.final_state.t) << "\n";
  if (e0) rep << "E0: " << num(*e0) << "\n";
  rep << "max energy drift: " << num(max_drift) << "\n";
  double gmax = 0.0;
  for (const auto& s : traj.samples) gmax = std::max(gmax, s.grad_l2);
  rep << "max grad L2: " << num(gmax) << "\n";
  if (traj.alarm) rep << describe_monitor(*traj.alarm);
  write_text(job.out / "report.txt", rep.str());
  return {"evolve", status, job.out.string(), 0};
}

RunOutcome run_picard_verify(const RunConfig& c, const fs::path& out) {
  const GridRef grid = build_grid(c);
  const CouplingConfig cc = build_coupling(c, grid);
  const WaveState s0 = build_initial_state(c, grid);
  const PicardResult pr = picard_solve(s0, cc, c.picard.T, c.picard.h, c.picard.tol,
                                       c.picard.max_iter, c.stepper.dealias);

  StepperConfig sc = c.stepper;
  sc.h = pr.report.h;
  sc.sample_every = 1;
  EvolveOptions eo;
  eo.keep_snapshots = true;
  const Trajectory traj = evolve(s0, s0.t + c.picard.T, sc, cc, eo);
  double dist = std::nan("");
  if (traj.snapshots.size() == pr.path.size()) dist = sup_h1_distance(pr.path, traj.snapshots);
  const int steps = static_cast<int>(pr.path.size()) - 1;
  const double r_full = picard_first_ratio(s0, cc, c.picard.T, std::max(steps, 1), c.stepper.dealias);
  const double r_half =
      picard_first_ratio(s0, cc, 0.5 * c.picard.T, std::max(steps / 2, 1), c.stepper.dealias);

  CsvWriter csv;
  const ConcentrationQuery q = c.blowup.query;
  double e0 = 0.0;
  for (std::size_t n = 0; n < pr.path.size(); ++n) {
    const FunctionalReport rep = functional_report(pr.path[n], cc);
    if (n == 0) e0 = rep.E;
    csv.add(strip_status(csv_row(pr.path[n], rep, cc, e0, q, "")));
  }
  const std::string status = pr.report.converged ? "completed" : "not-converged";
  write_text(out / "timeseries.csv", csv.render(status));

  std::ostringstream o;
  o << "scenario: picard-verify\n" << describe_coupling(c);
  o << "ball radius R: " << num(pr.report.R) << "\n";
  o << "T: " << num(pr.report.T) << " h: " << num(pr.report.h) << "\n";
  o << "iterations: " << pr.report.iterations << "\n";
  o << "converged: " << (pr.report.converged ? "yes" : "no") << "\n";
  if (!pr.report.note.empty()) o << "note: " << pr.report.note << "\n";
  o << "distances:";
  for (double d : pr.report.distances) o << " " << num(d);
  o << "\ncontraction ratios:";
  for (double r : pr.report.contraction_ratios) o << " " << num(r);
  o << "\nfirst ratio at T: " << num(r_full) << "\nfirst ratio at T/2: " << num(r_half) << "\n";
  o << "sup H1xL2 distance to evolve: " << num(dist) << "\n";
  write_text(out / "report.txt", o.str());
  return {"picard-verify", status, out.string(), 0};
}

RunOutcome run_functional_scan(const RunConfig& c, const fs::path& out) {
  const GridRef grid = build_grid(c);
  const CouplingConfig cc = build_coupling(c, grid);
  const WaveState s0 = build_initial_state(c, grid);
  const ConcentrationQuery q = c.blowup.query;

  CsvWriter csv;
  const FunctionalReport r0 = functional_report(s0, cc);
  csv.add(strip_status(csv_row(s0, r0, cc, r0.E, q, "")));
  write_text(out / "timeseries.csv", csv.render("completed"));

  std::ostringstream scan;
  scan << "scale,J,dirichlet,log_plus,log_minus,mt_residual,grad_l2\n";
  std::ostringstream o;
  o << "scenario: functional-scan\n" << describe_coupling(c);
  o << "u scaled by s for s in scan.values\n";
  for (double sc : c.scan_values) {
    WaveState s = s0;
    for (auto& u : s.u) u *= sc;
    const FunctionalReport r = functional_report(s, cc);
    scan << num(sc) << "," << num(r.J) << "," << num(r.dirichlet) << "," << num(r.log_plus) << ","
         << num(r.log_minus) << "," << num(r.mt_residual) << "," << num(r.grad_l2) << "\n";
    o << "s=" << num(sc) << " J=" << num(r.J) << " mt_residual=" << num(r.mt_residual) << "\n";
  }
  write_text(out / "scan.csv", scan.str());
  write_text(out / "report.txt", o.str());
  return {"functional-scan", "completed", out.string(), 0};
}

RunOutcome run_bubble_probe(const RunConfig& c, const fs::path& out) {
  const GridRef grid = build_grid(c);
  const CouplingConfig cc = build_coupling(c, grid);
  const ConcentrationQuery base = c.blowup.query;
  const std::array<double, 2> center{c.init.center1, c.init.center2};

  std::ostringstream table;
  table << "lambda,J,mt_residual,covered,point1,point2,center_error,density_ratio\n";
  std::ostringstream o;
  o << "scenario: bubble-probe\n" << describe_coupling(c);
  o << "windows: m1=" << concentration_window(cc.rho1(), cc.family)
    << " m2=" << concentration_window(cc.rho2(), cc.family) << "\n";

  CsvWriter csv;
  std::vector<double> Js;
  for (double lam : c.scan_values) {
    const ScalarField u = bubble_field(grid, center, lam, c.init.clamp);
    std::vector<ScalarField> comps(cc.components(), u);
    WaveState s = wave_state_new(grid, comps, std::vector<ScalarField>(cc.components(), ScalarField(grid)));
    const FunctionalReport r = functional_report(s, cc);
    ConcentrationQuery q = base;
    q.m = 1;
    const ScalarField d = density(u, Sign::Plus, cc.weight(0));
    const ConcentrationReport cr = detect_concentration(d, q);
    const auto [dmin, dmax] = std::minmax_element(d.values.begin(), d.values.end());
    const double err = cr.points.empty()
                           ? std::nan("")
                           : grid->torus_distance(cr.points[0][0], cr.points[0][1], center[0], center[1]);
    table << num(lam) << "," << num(r.J) << "," << num(r.mt_residual) << "," << num(cr.covered) << ","
          << (cr.points.empty() ? std::string("nan") : num(cr.points[0][0])) << ","
          << (cr.points.empty() ? std::string("nan") : num(cr.points[0][1])) << "," << num(err) << ","
          << num(*dmax / *dmin) << "\n";
    o << "lambda=" << num(lam) << " J=" << num(r.J) << " covered=" << num(cr.covered)
      << " center_error=" << num(err) << "\n";
    Js.push_back(r.J);
    if (Js.size() == 1) csv.add(strip_status(csv_row(s, r, cc, r.E, base, "")));
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < Js.size(); ++i) decreasing = decreasing && Js[i] < Js[i - 1];
  o << "J decreasing in lambda: " << (decreasing ? "yes" : "no") << "\n";
  write_text(out / "bubble.csv", table.str());
  write_text(out / "timeseries.csv", csv.render("completed"));
  write_text(out / "report.txt", o.str());
  return {"bubble-probe", "completed", out.string(), 0};
}

RunOutcome run_check(const fs::path* out) {
  const auto items = run_check_suite();
  std::ostringstream o;
  int failed = 0;
  for (const auto& it : items) {
    o << (it.pass ? "PASS " : "FAIL ") << it.name;
    if (!it.detail.empty()) o << "  (" << it.detail << ")";
    o << "\n";
    failed += it.pass ? 0 : 1;
  }
  o << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed") << "\n";
  std::cout << o.str();
  if (out) write_text(*out / "report.txt", o.str());
  return {"check", failed == 0 ? "pass" : "fail", out ? out->string() : "", failed == 0 ? 0 : 1};
}

}  // namespace

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "t", "mean_u", "kinetic", "dirichlet", "log_plus", "log_minus", "J",
      "E", "energy_drift", "grad_l2", "conc_fraction_plus", "conc_fraction_minus", "status"};
  return cols;
}

std::string csv_header() {
  std::string h;
  for (const auto& c : csv_columns()) h += (h.empty() ? "" : ",") + c;
  return h + "\n";
}

std::pair<double, double> concentration_fractions(const WaveState& s, const CouplingConfig& cfg,
                                                  const ConcentrationQuery& base) {
  auto covered = [&](const ScalarField& u, double scale, double rho) {
    ConcentrationQuery q = base;
    q.m = std::max(1, concentration_window(rho, cfg.family));
    return detect_concentration(normalized_exp(u, scale, nullptr).density, q).covered;
  };
  double plus = 0.0, minus = 0.0;
  if (cfg.family == Family::Toda) {
    for (std::size_t j = 0; j < s.components(); ++j) {
      plus = std::max(plus, covered(s.u[j], 1.0, cfg.rho[j]));
      minus = std::max(minus, covered(s.u[j], -1.0, cfg.rho[j]));
    }
  } else {
    plus = covered(s.u[0], 1.0, cfg.rho1());
    minus = covered(s.u[0], -cfg.effective_a(), cfg.rho2());
  }
  return {plus, minus};
}

std::string csv_row(const WaveState& s, const FunctionalReport& rep, const CouplingConfig& cfg,
                    double e0, const ConcentrationQuery& q, const std::string& status) {
  double cp = std::nan(""), cm = std::nan("");
  try {
    std::tie(cp, cm) = concentration_fractions(s, cfg, q);
  } catch (const DynamicRangeError&) {
  }
  const double drift = (rep.E - e0) / (1.0 + std::abs(e0));
  std::string row;
  for (double x : {rep.t, rep.means.empty() ? 0.0 : rep.means[0], rep.kinetic, rep.dirichlet,
                   rep.log_plus, rep.log_minus, rep.J, rep.E, drift, rep.grad_l2, cp, cm})
    row += num(x) + ",";
  return row + status + "\n";
}

RunOutcome run_scenario(const RunConfig& c, const std::string& out_dir) {
  const std::string dir = out_dir.empty() ? c.output_dir : out_dir;
  const fs::path out = prepare_dir(dir);
  write_text(out / "config.resolved", [&] {
    std::string s;
    for (const auto& [k, v] : c.resolved) {
      const bool def = std::find(c.defaulted.begin(), c.defaulted.end(), k) != c.defaulted.end();
      s += k + " = " + v + (def ? "  # default" : "") + "\n";
    }
    return s;
  }());
  if (c.scenario == "check") return run_check(&out);
  if (c.scenario == "picard-verify") return run_picard_verify(c, out);
  if (c.scenario == "functional-scan") return run_functional_scan(c, out);
  if (c.scenario == "bubble-probe") return run_bubble_probe(c, out);

  const GridRef grid = build_grid(c);
  EvolveJob job{c, out, build_initial_state(c, grid), 0.0, 0, true, std::nullopt, ""};
  job.origin = job.start.t;
  return run_evolve(std::move(job));
}

RunOutcome resume_run(const std::string& checkpoint_path, const std::string& out_dir) {
  const fs::path ckpt(checkpoint_path);
  const std::string meta = read_text(ckpt.string() + ".meta");
  const std::string marker = "--- config ---\n";
  const auto split = meta.find(marker);
  if (meta.rfind("liouwave-checkpoint 1\n", 0) != 0 || split == std::string::npos)
    throw SnapshotError("checkpoint metadata '" + ckpt.string() + ".meta' is malformed");

  std::size_t step = 0;
  double origin = 0.0, e0 = 0.0;
  bool have_step = false, have_origin = false, have_e0 = false;
  std::istringstream head(meta.substr(0, split));
  std::string line;
  while (std::getline(head, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq), val = line.substr(eq + 3);
    if (key == "step") {
      step = static_cast<std::size_t>(std::stoull(val));
      have_step = true;
    } else if (key == "origin") {
      origin = std::strtod(val.c_str(), nullptr);
      have_origin = true;
    } else if (key == "e0") {
      e0 = std::strtod(val.c_str(), nullptr);
      have_e0 = true;
    }
  }
  if (!have_step || !have_origin || !have_e0)
    throw SnapshotError("checkpoint metadata is missing step, origin or e0");
  const RunConfig c = parse_config(meta.substr(split + marker.size()));
  const GridRef grid = build_grid(c);
  WaveState s = read_snapshot(ckpt.string(), grid);
  if (s.components() != (c.family == Family::Toda ? static_cast<std::size_t>(c.toda_n) : 1u))
    throw SnapshotError("checkpoint component count does not match its configuration");

  const fs::path dir =
      out_dir.empty() ? (ckpt.parent_path().empty() ? fs::path(".") : ckpt.parent_path()) / "resumed"
                      : fs::path(out_dir);
  EvolveJob job{c, prepare_dir(dir.string()), std::move(s), 0.0, 0, true, std::nullopt, ""};
  job.origin = origin;
  job.first_step = step;
  job.record_initial = false;
  job.e0 = e0;
  job.header_note = "resumed from: " + ckpt.string() + " (step " + std::to_string(step) + ")\n";
  return run_evolve(std::move(job));
}

}  // namespace liouwave
