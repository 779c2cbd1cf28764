// filmcascade command-line front end. Exit codes: 0 all gates pass,
// 1 a gate failed, 2 runtime or configuration error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "filmcascade/config.hpp"
#include "filmcascade/diagnostics.hpp"
#include "filmcascade/harness.hpp"
#include "filmcascade/models.hpp"
#include "filmcascade/nssolver.hpp"
#include "filmcascade/report.hpp"
#include "filmcascade/snapshot.hpp"
#include "filmcascade/stability.hpp"
#include "filmcascade/transform.hpp"

namespace fs = std::filesystem;
using namespace filmcascade;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? parse_config("") : load_config(c.config);
  if (!c.out.empty()) cfg.out_dir = c.out;
  if (cfg.out_dir.empty()) cfg.out_dir = "out";
  if (c.seed) cfg.seed = *c.seed;
  cfg.validate();
  fs::create_directories(cfg.out_dir);
  return cfg;
}

std::string path_in(const ExperimentConfig& c, const std::string& name) {
  return (fs::path(c.out_dir) / name).string();
}

std::string snapshot_name(int idx) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%05d.tflm", idx);
  return buf;
}

Snapshot to_snapshot(const Fourier1D& fft, const SurfaceField& eta, double t, const ScalingParams& p) {
  Snapshot s;
  s.nx = static_cast<std::uint32_t>(eta.nx);
  s.time = t;
  s.delta = p.delta;
  s.epsilon = p.epsilon;
  s.reynolds = p.reynolds;
  s.weber = p.weber;
  s.alpha = p.alpha;
  s.eta = fft.inverse(eta);
  return s;
}

Snapshot to_snapshot(const Fourier1D& fft, const NSState& st) {
  Snapshot s = to_snapshot(fft, st.eta, st.t, st.params);
  s.ny = static_cast<std::uint32_t>(st.u.ny);
  s.u = st.u.data;
  s.v = st.v.data;
  s.p = st.p.data;
  return s;
}

std::vector<int> snapshot_indices(int samples, int extra) {
  std::vector<int> idx{0};
  for (int k = 1; k <= extra; ++k) idx.push_back(static_cast<int>(std::lround(double(k) * samples / (extra + 1))));
  idx.push_back(samples);
  return idx;
}

void pass_line(const std::string& gate, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << gate << ": " << detail << "\n";
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---- simulate ----------------------------------------------------------------

int cmd_simulate(const Common& com, const std::string& model_override) {
  ExperimentConfig c = load(com);
  if (!model_override.empty()) c.model = model_override;
  ModelState s;
  s.kind = parse_model_kind(c.model);
  s.params = c.params_at(c.delta);
  s.eta = initial_surface(c, c.nx);
  const Fourier1D fft(c.nx);
  const double T = c.horizon_at(c.delta);
  const std::vector<int> snaps = snapshot_indices(c.samples, c.snapshots);
  Table tab;
  tab.columns = {"t", "mean", "L2", "max"};
  auto record = [&](const ModelState& st, int i) {
    const std::vector<double> x = fft.inverse(st.eta);
    double mx = 0.0;
    for (double v : x) mx = std::max(mx, std::abs(v));
    tab.add({st.t, st.eta.coef[0].real(), surface_norm(st.eta, 0.0), mx});
    if (std::find(snaps.begin(), snaps.end(), i) != snaps.end())
      write_snapshot(path_in(c, snapshot_name(i)), to_snapshot(fft, st.eta, st.t, st.params));
  };
  record(s, 0);
  for (int i = 1; i <= c.samples; ++i) {
    s = advance_model(s, T * i / c.samples);
    record(s, i);
  }
  emit_report(tab, ReportFormat::Csv, path_in(c, "simulate.csv"));
  std::cout << "simulate " << c.model << ": t = " << s.t << ", |eta|_0 = " << surface_norm(s.eta, 0.0) << "\n";
  return 0;
}

// ---- simulate-ns ---------------------------------------------------------------

int write_energy_audit(const ExperimentConfig& c, const std::vector<EnergySample>& series) {
  const EnergyAudit a = energy_audit(series);
  Table t;
  t.columns = {"t", "dEdt_plus_F", "N", "implied_C"};
  for (const EnergyAuditRow& r : a.rows) t.add({r.t, r.dEdt_plus_F, r.N, r.implied_C});
  emit_report(t, ReportFormat::Csv, path_in(c, "energy_audit.csv"));
  emit_report(t, ReportFormat::Json, path_in(c, "energy_audit.json"),
              {{"max_C", a.max_C},
               {"fraction_dissipative", a.fraction_dissipative},
               {"fraction_bounded", a.fraction_bounded},
               {"cadence_warning", a.cadence_warning ? 1.0 : 0.0}});
  std::cout << "energy audit: max C = " << a.max_C << ", dissipative fraction = " << a.fraction_dissipative
            << "\n";
  if (a.cadence_warning) std::cout << "warning: " << a.warning << "\n";
  return 0;
}

int cmd_simulate_ns(const Common& com, bool audit, std::optional<int> snapshots) {
  ExperimentConfig c = load(com);
  if (snapshots) c.snapshots = *snapshots;
  const Grid g(c.nx, c.ny);
  const ScalingParams p = c.params_at(c.delta);
  const NSState s0 = compatible_initial_state(g, initial_surface(c, c.nx), p);
  NSRunOptions o;
  o.t_end = c.horizon_at(c.delta);
  o.step.dt = c.dt;
  o.diag_every = c.cadence;
  o.energy_order = c.m;
  o.weights = {c.beta1, c.beta2, c.beta3, 3.0};
  const double dt = c.dt > 0.0 ? c.dt : default_dt(g);
  const long steps = std::max(1L, static_cast<long>(std::ceil(o.t_end / dt - 1e-9)));
  o.snapshot_every = c.snapshots > 0 ? static_cast<int>(std::max(1L, steps / (c.snapshots + 1))) : 0;
  const NSTrajectory tr = run_ns(g, s0, o);
  write_text(path_in(c, "diagnostics.csv"), trajectory_csv(tr));
  const Fourier1D fft(c.nx);
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i)
    write_snapshot(path_in(c, snapshot_name(static_cast<int>(i))), to_snapshot(fft, tr.snapshots[i]));
  if (audit) {
    std::vector<double> times;
    for (const NSDiagRow& r : tr.rows) times.push_back(r.t);
    write_energy_audit(c, energy_series(tr.reports, times));
  }
  if (tr.blew_up) {
    std::cerr << "simulate-ns: run ended early: " << tr.message << "\n";
    return 1;
  }
  std::cout << "simulate-ns: " << tr.rows.size() << " diagnostic rows, " << tr.snapshots.size()
            << " snapshots\n";
  return 0;
}

// ---- stability -------------------------------------------------------------------

std::vector<double> parse_range(const std::string& s) {
  // "a:b:n" -> n evenly spaced points
  double a = 0.0, b = 0.0;
  int n = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d", &a, &b, &n) != 3 || n < 1 || !(b >= a))
    throw ConfigError("--k-range expects a:b:n with a <= b and n >= 1");
  std::vector<double> ks;
  for (int i = 0; i < n; ++i) ks.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return ks;
}

int cmd_stability(const Common& com, std::optional<double> alpha, std::optional<double> delta,
                  std::optional<double> weber, const std::string& krange, bool os) {
  ExperimentConfig c = load(com);
  if (alpha) c.alpha = *alpha;
  if (delta) c.delta = *delta;
  if (weber) c.weber = *weber;
  std::vector<double> ks = krange.empty() ? c.ks : parse_range(krange);
  if (ks.empty()) ks = {c.k};
  ScalingParams p = c.params_at(c.delta);
  p.epsilon = 0.0;
  const ModelKind kind = parse_model_kind(c.model);
  const CriticalReynolds rc = critical_reynolds(c.alpha);

  std::ostringstream csv;
  csv << "k,re_lambda,im_lambda,model,R\n";
  char buf[160];
  for (double k : ks) {
    const cplx l = dispersion(kind, k, p);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%s,%.17g\n", k, l.real(), l.imag(), c.model.c_str(),
                  p.reynolds);
    csv << buf;
    if (os) {
      const cplx lo = leading_os_eigenvalue(OSProblem{k, p, c.os_ny});
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,os,%.17g\n", k, lo.real(), lo.imag(), p.reynolds);
      csv << buf;
    }
  }
  write_text(path_in(c, "stability.csv"), csv.str());

  // R = 0 is outside the OS domain; start the bracket just above it.
  const double r_lo = c.r_min > 0.0 ? c.r_min : 1e-3 * rc.closed_form;
  const double r_hi = c.r_max > 0.0 ? c.r_max : 2.0 * rc.closed_form;
  Plot plot;
  plot.title = "Neutral curve";
  plot.xlabel = "k";
  plot.ylabel = "R";
  PlotSeries ms{c.model, {}, {}};
  for (const NeutralPoint& q : model_neutral_curve(kind, ks, p, r_lo, r_hi))
    if (std::isfinite(q.reynolds)) ms.x.push_back(q.k), ms.y.push_back(q.reynolds);
  plot.series.push_back(ms);
  if (os) {
    PlotSeries oss{"Orr-Sommerfeld", {}, {}};
    for (const NeutralPoint& q : os_neutral_curve(OSProblem{ks.front(), p, c.os_ny}, ks, r_lo, r_hi))
      if (std::isfinite(q.reynolds)) oss.x.push_back(q.k), oss.y.push_back(q.reynolds);
    plot.series.push_back(oss);
  }
  write_text(path_in(c, "neutral_curve.svg"), to_svg(plot));
  std::cout << "critical Reynolds number " << rc.closed_form << " (bisection " << rc.bisection << ")\n";
  return 0;
}

// ---- sweep / compare ---------------------------------------------------------------

int cmd_sweep(const Common& com) {
  const ExperimentConfig c = load(com);
  const SweepResult r = sweep_delta(c);
  emit_report(sweep_table(r), ReportFormat::Csv, path_in(c, "sweep.csv"));
  emit_report(sweep_table(r), ReportFormat::Json, path_in(c, "sweep.json"),
              {{"uniformity_ratio", r.uniformity_ratio}, {"decay_ratio", r.decay_ratio}});
  for (const SweepRow& w : r.rows)
    if (w.blew_up) std::cout << "flagged delta = " << w.delta << ": " << w.message << "\n";
  pass_line("uniformity", r.uniform_pass, "max/min sup E~2 = " + fmt(r.uniformity_ratio));
  pass_line("decay", r.decay_pass, "max/min C2 = " + fmt(r.decay_ratio));
  pass_line("monotone", r.monotone_pass, "E2 non-increasing after transient");
  return r.uniform_pass && r.decay_pass && r.monotone_pass ? 0 : 1;
}

int cmd_compare(const Common& com, bool refine) {
  const ExperimentConfig c = load(com);
  const bool ns = c.model_a == "ns";
  const ComparisonResult r = ns ? compare_ns_model(c, refine) : compare_models(c);
  const Table t = comparison_table(r);
  std::map<std::string, double> summary{{"slope", r.fit.slope}, {"ci_low", r.fit.ci_low},
                                        {"ci_high", r.fit.ci_high}, {"fit_valid", r.fit.valid ? 1.0 : 0.0},
                                        {"monotone", r.monotone ? 1.0 : 0.0}};
  if (r.dt_refine_change >= 0.0) summary["dt_refine_change"] = r.dt_refine_change;
  emit_report(t, ReportFormat::Csv, path_in(c, "compare.csv"));
  emit_report(t, ReportFormat::Json, path_in(c, "compare.json"), summary);
  bool plottable = false;
  for (const ComparisonRow& w : r.rows) plottable = plottable || w.err_l2 > 0.0;
  if (plottable) emit_report(t, ReportFormat::Svg, path_in(c, "compare.svg"), {}, true);
  for (const ComparisonRow& w : r.rows)
    if (w.blew_up) std::cout << "flagged delta = " << w.delta << ": " << w.message << "\n";
  bool ok = true;
  if (ns) {
    pass_line("monotone", r.monotone, c.model_a + " vs " + c.model_b);
    ok = r.monotone;
    if (refine) {
      const bool rok = r.dt_refine_change < c.dt_refine_tol;
      pass_line("dt-refinement", rok, "relative change " + fmt(r.dt_refine_change));
      ok = ok && rok;
    }
  } else {
    const bool sok = r.fit.valid && r.fit.slope >= c.slope_min && r.fit.slope <= c.slope_max;
    pass_line("slope", sok,
              c.model_a + " vs " + c.model_b + " slope " + fmt(r.fit.slope) + " in [" + fmt(c.slope_min) +
                  ", " + fmt(c.slope_max) + "]");
    ok = sok;
  }
  return ok ? 0 : 1;
}

// ---- audits ------------------------------------------------------------------------

int cmd_extension_audit(const Common& com, std::vector<double> deltas, std::optional<int> trials) {
  const ExperimentConfig c = load(com);
  ExtensionAuditOptions o;
  o.deltas = deltas;
  if (o.deltas.empty())
    for (int k = 0; k <= 8; ++k) o.deltas.push_back(std::ldexp(1.0, -k));
  o.trials = trials ? *trials : 50;
  o.nx = c.nx;
  o.ny = c.ny;
  o.seed = c.seed;
  Table t;
  t.columns = {"delta", "i", "j", "ratio_plain", "ratio_half"};
  double worst = 0.0;
  for (const ExtensionAuditRow& r : extension_audit(o)) {
    t.add({r.delta, double(r.i), double(r.j), r.ratio_plain, r.ratio_half});
    worst = std::max({worst, r.ratio_plain, r.ratio_half});
  }
  emit_report(t, ReportFormat::Csv, path_in(c, "extension_audit.csv"));
  const bool ok = worst <= c.extension_bound;
  pass_line("extension", ok, "max ratio " + fmt(worst) + " <= " + fmt(c.extension_bound));
  return ok ? 0 : 1;
}

int cmd_korn_audit(const Common& com) {
  const ExperimentConfig c = load(com);
  AuditOptions o;
  if (!c.audit_deltas.empty()) o.deltas = c.audit_deltas;
  o.trials = c.trials;
  o.seed = c.seed;
  const auto korn = korn_audit(o);
  const auto trace = trace_audit(o);
  Table t;
  t.columns = {"delta", "korn_worst", "trace_worst", "trace_supremum"};
  double kmax = 0.0, tmin = 1e300, tmax = 0.0;
  for (std::size_t i = 0; i < korn.size(); ++i) {
    t.add({korn[i].delta, korn[i].worst, trace[i].worst, trace_supremum(korn[i].delta, o.nx / 2)});
    kmax = std::max(kmax, korn[i].worst);
    tmin = std::min(tmin, trace[i].worst);
    tmax = std::max(tmax, trace[i].worst);
  }
  emit_report(t, ReportFormat::Csv, path_in(c, "korn_trace_audit.csv"));
  const double spread = (tmax - tmin) / tmax;
  const bool kok = kmax <= c.korn_bound, tok = spread < c.trace_spread;
  pass_line("korn", kok, "max ratio " + fmt(kmax) + " <= " + fmt(c.korn_bound));
  pass_line("trace", tok, "spread " + fmt(spread) + " < " + fmt(c.trace_spread));
  return kok && tok ? 0 : 1;
}

int cmd_energy_audit(const Common& com, std::string traj, std::optional<int> m) {
  ExperimentConfig c = load(com);
  if (traj.empty()) traj = c.traj;
  if (m) c.m = *m;
  if (traj.empty()) throw ConfigError("energy-audit needs --traj DIR");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(traj))
    if (e.path().extension() == ".tflm") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<EnergyReport> reports;
  std::vector<double> times;
  const EnergyWeights w{c.beta1, c.beta2, c.beta3, 3.0};
  for (const fs::path& f : files) {
    const Snapshot s = read_snapshot(f.string());
    if (s.ny == 0) throw ConfigError("energy-audit: '" + f.string() + "' holds no bulk fields");
    const Grid g(static_cast<int>(s.nx), static_cast<int>(s.ny));
    const Fourier1D fft(g.nx());
    NSState st;
    st.params = {s.delta, s.epsilon, s.reynolds, s.weber, s.alpha};
    st.t = s.time;
    st.eta = fft.forward(s.eta);
    st.u = BulkField(g.nx(), g.ny());
    st.v = BulkField(g.nx(), g.ny());
    st.p = BulkField(g.nx(), g.ny());
    st.u.data = s.u;
    st.v.data = s.v;
    st.p.data = s.p;
    const NSRates r = ns_rates(g, st);
    reports.push_back(energy_report(g, st, &r, c.m, w));
    times.push_back(s.time);
  }
  return write_energy_audit(c, energy_series(reports, times));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"filmcascade: thin-film model hierarchy and flattened Navier-Stokes toolkit"};
  app.require_subcommand(1);
  Common com;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", com.config, "experiment configuration file");
    s->add_option("--out", com.out, "output directory");
    s->add_option("--seed", com.seed, "random seed");
  };

  std::string model;
  auto* sim = app.add_subcommand("simulate", "reduced model run");
  add_common(sim);
  sim->add_option("--model", model, "burgers | kdvb | kawahara | benney");

  bool audit = false;
  std::optional<int> snapshots;
  auto* sns = app.add_subcommand("simulate-ns", "flattened Navier-Stokes run");
  add_common(sns);
  sns->add_flag("--audit-energy", audit, "write the energy inequality audit");
  sns->add_option("--snapshots", snapshots, "stored snapshots besides first and last");

  std::optional<double> alpha, delta, weber;
  std::string krange;
  bool os = false;
  auto* stab = app.add_subcommand("stability", "dispersion relations and neutral curves");
  add_common(stab);
  stab->add_option("--alpha", alpha, "inclination angle in radians");
  stab->add_option("--delta", delta, "aspect ratio");
  stab->add_option("--weber", weber, "Weber number");
  stab->add_option("--k-range", krange, "a:b:n");
  stab->add_flag("--os", os, "add the Orr-Sommerfeld spectrum");

  auto* sweep = app.add_subcommand("sweep-delta", "uniformity and decay sweep over delta");
  add_common(sweep);

  bool refine = false;
  auto* cmp = app.add_subcommand("compare", "error scaling between two models (model_a = ns for NS)");
  add_common(cmp);
  cmp->add_flag("--refine", refine, "repeat NS runs at dt/2");

  std::vector<double> dlist;
  std::optional<int> trials;
  auto* ext = app.add_subcommand("extension-audit", "extension operator ratio audit");
  add_common(ext);
  ext->add_option("--delta-list", dlist, "comma-separated deltas (default 2^0 .. 2^-8)")->delimiter(',');
  ext->add_option("--trials", trials, "random fields per delta (default 50)");

  auto* korn = app.add_subcommand("korn-audit", "Korn and trace inequality audits");
  add_common(korn);

  std::string traj;
  std::optional<int> order;
  auto* eaud = app.add_subcommand("energy-audit", "energy inequality audit of a stored trajectory");
  add_common(eaud);
  eaud->add_option("--traj", traj, "directory of TFLM snapshots");
  eaud->add_option("--m", order, "energy order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*sim) return cmd_simulate(com, model);
    if (*sns) return cmd_simulate_ns(com, audit, snapshots);
    if (*stab) return cmd_stability(com, alpha, delta, weber, krange, os);
    if (*sweep) return cmd_sweep(com);
    if (*cmp) return cmd_compare(com, refine);
    if (*ext) return cmd_extension_audit(com, dlist, trials);
    if (*korn) return cmd_korn_audit(com);
    if (*eaud) return cmd_energy_audit(com, traj, order);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
