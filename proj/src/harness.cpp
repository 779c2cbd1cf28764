#include "filmcascade/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "filmcascade/transform.hpp"

namespace filmcascade {

SurfaceField initial_surface(const ExperimentConfig& c, int nx) {
  SurfaceField e(nx);
  for (const auto& [n, a] : c.modes) e.coef[n] += n == 0 ? cplx(a) : cplx(0.5 * a);
  if (c.random_modes > 0) {
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> amp(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (int n = 1; n <= c.random_modes; ++n) {
      const double a = c.random_amplitude * amp(rng);
      e.coef[n] += 0.5 * a * std::polar(1.0, phase(rng));
    }
  }
  return e;
}

namespace {

double t_quantile_975(int dof) {
  static const double tab[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228};
  return dof >= 1 && dof <= 10 ? tab[dof - 1] : 1.96;
}

}  // namespace

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  const std::size_t n = std::min(x.size(), y.size());
  f.points = static_cast<int>(n);
  if (n < 2) return f;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (y[i] - my);
  if (sxx == 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      ssr += r * r;
    }
    f.stderr_slope = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  }
  const double t = t_quantile_975(static_cast<int>(n) - 2);
  f.ci_low = f.slope - t * f.stderr_slope;
  f.ci_high = f.slope + t * f.stderr_slope;
  f.valid = true;
  return f;
}

LineFit fit_loglog(const std::vector<double>& deltas, const std::vector<double>& errors) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < deltas.size() && i < errors.size(); ++i) {
    if (!(deltas[i] > 0.0 && errors[i] > 0.0 && std::isfinite(errors[i]))) {
      LineFit bad;
      bad.points = static_cast<int>(deltas.size());
      return bad;
    }
    lx.push_back(std::log(deltas[i]));
    ly.push_back(std::log(errors[i]));
  }
  if (lx.size() < 4) {
    LineFit bad;
    bad.points = static_cast<int>(lx.size());
    return bad;
  }
  LineFit f = fit_line(lx, ly);
  const std::size_t big = static_cast<std::size_t>(std::max_element(lx.begin(), lx.end()) - lx.begin());
  if (lx.size() > 4) {
    // Externally studentised: the largest delta is judged against a fit of the
    // others, or a gross outlier would inflate its own sigma and never fire.
    std::vector<double> rx = lx, ry = ly;
    rx.erase(rx.begin() + static_cast<long>(big));
    ry.erase(ry.begin() + static_cast<long>(big));
    const LineFit rest = fit_line(rx, ry);
    double ssr = 0.0, mean = 0.0, sxx = 0.0;
    for (double x : rx) mean += x;
    mean /= static_cast<double>(rx.size());
    for (std::size_t i = 0; i < rx.size(); ++i) {
      const double r = ry[i] - rest.intercept - rest.slope * rx[i];
      ssr += r * r;
      sxx += (rx[i] - mean) * (rx[i] - mean);
    }
    const double n = static_cast<double>(rx.size());
    const double d = lx[big] - mean;
    const double sigma = std::sqrt(ssr / (n - 2.0) * (1.0 + 1.0 / n + d * d / sxx));
    const double rbig = ly[big] - rest.intercept - rest.slope * lx[big];
    if (std::abs(rbig) > 3.0 * sigma) {
      f = rest;
      f.dropped_largest = true;
    }
  }
  return f;
}

// ---- delta sweep -------------------------------------------------------------

SweepResult sweep_delta(const ExperimentConfig& c) {
  SweepResult res;
  const Grid g(c.nx, c.ny);
  const SurfaceField eta0 = initial_surface(c, c.nx);
  for (double d : c.deltas) {
    SweepRow row;
    row.delta = d;
    row.epsilon = c.epsilon_at(d);
    try {
      const ScalingParams p = c.params_at(d);
      const NSState s0 = compatible_initial_state(g, eta0, p);
      NSRunOptions o;
      o.t_end = c.horizon_at(d);
      o.step.dt = c.dt;
      o.diag_every = c.cadence;
      o.energy_order = c.m;
      o.weights = {c.beta1, c.beta2, c.beta3, 3.0};
      const NSTrajectory tr = run_ns(g, s0, o);
      row.blew_up = tr.blew_up;
      row.message = tr.message;
      std::vector<double> ts, le;
      for (std::size_t i = 0; i < tr.rows.size(); ++i) {
        row.sup_Etilde2 = std::max(row.sup_Etilde2, tr.reports[i].Em_tilde);
        const double t = tr.rows[i].t, e = tr.rows[i].E2;
        if (t >= c.transient * o.t_end && e > 0.0) {
          if (!ts.empty() && e > std::exp(le.back()) * (1.0 + 1e-12)) row.monotone = false;
          ts.push_back(t);
          le.push_back(std::log(e));
        }
      }
      row.initial_E2 = tr.rows.front().E2;
      row.final_E2 = tr.rows.back().E2;
      const LineFit f = fit_line(ts, le);
      if (f.valid) {
        row.decay_rate = -f.slope;
        row.decay_per_delta = row.decay_rate / d;
      }
    } catch (const std::exception& e) {
      row.blew_up = true;
      row.message = e.what();
    }
    res.rows.push_back(row);
  }
  double smax = 0.0, smin = std::numeric_limits<double>::infinity();
  double cmax = 0.0, cmin = std::numeric_limits<double>::infinity();
  bool any_blow = false;
  res.monotone_pass = true;
  for (const SweepRow& r : res.rows) {
    any_blow = any_blow || r.blew_up;
    smax = std::max(smax, r.sup_Etilde2);
    smin = std::min(smin, r.sup_Etilde2);
    cmax = std::max(cmax, r.decay_per_delta);
    cmin = std::min(cmin, r.decay_per_delta);
    res.monotone_pass = res.monotone_pass && r.monotone;
  }
  res.uniformity_ratio = smax == 0.0 ? 1.0 : (smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity());
  res.decay_ratio = cmax == 0.0 ? 1.0 : (cmin > 0.0 ? cmax / cmin : std::numeric_limits<double>::infinity());
  res.uniform_pass = !any_blow && res.uniformity_ratio < c.uniformity_factor;
  res.decay_pass = !any_blow && cmin > 0.0 && res.decay_ratio < c.decay_factor;
  res.monotone_pass = res.monotone_pass && !any_blow;
  return res;
}

// ---- comparisons ---------------------------------------------------------------

std::vector<SurfaceField> model_samples(ModelKind kind, const ExperimentConfig& c, double delta) {
  ModelState s;
  s.eta = initial_surface(c, c.nx);
  s.params = c.params_at(delta);
  s.kind = kind;
  const double T = c.horizon_at(delta);
  std::vector<SurfaceField> out{s.eta};
  for (int i = 1; i <= c.samples; ++i) {
    s = advance_model(s, T * i / c.samples);
    out.push_back(s.eta);
  }
  return out;
}

std::vector<SurfaceField> ns_samples(const ExperimentConfig& c, double delta, double dt) {
  const Grid g(c.nx, c.ny);
  const ScalingParams p = c.params_at(delta);
  NSState s = compatible_initial_state(g, initial_surface(c, c.nx), p);
  const double T = c.horizon_at(delta);
  const double seg = T / c.samples;
  const double dt0 = dt > 0.0 ? dt : default_dt(g);
  const long per = std::max(1L, static_cast<long>(std::ceil(seg / dt0 - 1e-9)));
  NSOptions o;
  o.dt = seg / static_cast<double>(per);
  NSStepper st(g, p, o);
  std::vector<SurfaceField> out{s.eta};
  for (int i = 1; i <= c.samples; ++i) {
    for (long k = 0; k < per; ++k) st.step(s);
    out.push_back(s.eta);
  }
  return out;
}

namespace {

void fill_errors(ComparisonRow& row, const std::vector<SurfaceField>& a,
                 const std::vector<SurfaceField>& b, const Fourier1D& fft) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    SurfaceField d = a[i];
    for (std::size_t n = 0; n < d.coef.size(); ++n) d.coef[n] -= b[i].coef[n];
    row.err_l2 = std::max(row.err_l2, surface_norm(d, 0.0));
    for (double v : fft.inverse(d)) row.err_inf = std::max(row.err_inf, std::abs(v));
  }
}

void finish(ComparisonResult& r) {
  std::vector<double> ds, es;
  bool blown = false;
  for (const ComparisonRow& row : r.rows) {
    ds.push_back(row.delta);
    es.push_back(row.err_l2);
    blown = blown || row.blew_up;
  }
  r.fit = fit_loglog(ds, es);
  r.monotone = !blown && r.rows.size() >= 2;
  for (std::size_t i = 1; i < r.rows.size(); ++i)
    r.monotone = r.monotone && r.rows[i].err_l2 < r.rows[i - 1].err_l2;
}

}  // namespace

ComparisonResult compare_models(const ExperimentConfig& c) {
  ComparisonResult r;
  r.a = c.model_a;
  r.b = c.model_b;
  const ModelKind ka = parse_model_kind(c.model_a), kb = parse_model_kind(c.model_b);
  const Fourier1D fft(c.nx);
  for (double d : c.deltas) {
    ComparisonRow row;
    row.delta = d;
    try {
      fill_errors(row, model_samples(ka, c, d), model_samples(kb, c, d), fft);
    } catch (const std::exception& e) {
      row.blew_up = true;
      row.message = e.what();
    }
    r.rows.push_back(row);
  }
  finish(r);
  return r;
}

ComparisonResult compare_ns_model(const ExperimentConfig& c, bool refine) {
  if (c.model_a != "ns") throw ConfigError("compare_ns_model: model_a must be 'ns'");
  ComparisonResult r;
  r.a = c.model_a;
  r.b = c.model_b;
  const ModelKind kb = parse_model_kind(c.model_b);
  const Fourier1D fft(c.nx);
  const Grid g(c.nx, c.ny);
  const double dt = c.dt > 0.0 ? c.dt : default_dt(g);
  std::vector<ComparisonRow> fine;
  for (double d : c.deltas) {
    ComparisonRow row;
    row.delta = d;
    try {
      const auto mb = model_samples(kb, c, d);
      fill_errors(row, ns_samples(c, d, dt), mb, fft);
      if (refine) {
        ComparisonRow half;
        half.delta = d;
        fill_errors(half, ns_samples(c, d, 0.5 * dt), mb, fft);
        fine.push_back(half);
      }
    } catch (const std::exception& e) {
      row.blew_up = true;
      row.message = e.what();
    }
    r.rows.push_back(row);
  }
  finish(r);
  if (refine) {
    r.dt_refine_change = 0.0;
    for (std::size_t i = 0; i < fine.size() && i < r.rows.size(); ++i) {
      const double base = r.rows[i].err_l2;
      if (base > 0.0)
        r.dt_refine_change = std::max(r.dt_refine_change, std::abs(fine[i].err_l2 - base) / base);
    }
  }
  return r;
}

Table sweep_table(const SweepResult& r) {
  Table t;
  t.columns = {"delta", "epsilon", "sup_Etilde2", "E2_initial", "E2_final", "decay_rate",
               "decay_per_delta", "monotone", "blew_up"};
  for (const SweepRow& w : r.rows)
    t.add({w.delta, w.epsilon, w.sup_Etilde2, w.initial_E2, w.final_E2, w.decay_rate,
           w.decay_per_delta, w.monotone ? 1.0 : 0.0, w.blew_up ? 1.0 : 0.0});
  return t;
}

Table comparison_table(const ComparisonResult& r) {
  Table t;
  t.columns = {"delta", "err_l2", "err_inf", "blew_up"};
  for (const ComparisonRow& w : r.rows) t.add({w.delta, w.err_l2, w.err_inf, w.blew_up ? 1.0 : 0.0});
  return t;
}

}  // namespace filmcascade
