#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "filmcascade/nsstate.hpp"
#include "filmcascade/params.hpp"
#include "filmcascade/spectral.hpp"

namespace filmcascade {

/// Weights of the higher-order and time-derivative parts of E0, F0.
/// korn is the Korn constant K in the dissipation (3 is its best value).
struct EnergyWeights {
  double beta1 = 1.0, beta2 = 1.0, beta3 = 1.0;
  double korn = 3.0;

  void validate() const;
  /// Weights satisfying the smallness system of the energy estimate, built
  /// from a Korn-side constant c1 and a Reynolds bound r0:
  ///   beta2 = 16 K c1, beta3 = 16 K c1 r0^2 (1 + tan^2 a),
  ///   beta1 = 16 K (c1 (1 + tan^2 a + r0^2) + 12 K beta3).
  /// They close the estimate only when 48 K (beta1 + 3 beta3) tan^2 a < 1
  /// and 12 K beta2 tan a sin a < W; admissible() checks both.
  static EnergyWeights estimate_preset(double c1, double r0, double alpha);
  bool admissible(double alpha, double weber) const;
};

struct EnergyReport {
  int m = 2;
  double E0 = 0.0, F0 = 0.0, N0 = 0.0;
  double Em = 0.0, Fm = 0.0, Nm = 0.0;
  double Em_tilde = 0.0, Fm_tilde = 0.0, Dm = 0.0;
  /// Itemised norm list equivalent to Em_tilde (reported, not asserted).
  double Em_tilde_surrogate = 0.0;
  /// (dEm/dt + Fm)/Nm; filled by energy_audit, NaN in a single report.
  double audit_ratio = 0.0;
};

/// Every functional at one state. Time derivatives come from `rates`
/// (ns_rates with p_t); nullptr or missing p_t raises ContractError.
/// 0 <= m <= 4.
EnergyReport energy_report(const Grid& g, const NSState& s, const NSRates* rates, int m = 2,
                           const EnergyWeights& w = {});

// ---- Korn and trace audits -------------------------------------------------

/// LHS / RHS of the Korn inequality for a divergence-free (u, v) vanishing at
/// the wall:
///   LHS = int d^2 u_x^2 + u_y^2 + d^4 v_x^2 + d^2 v_y^2
///   RHS = int 2 d^2 u_x^2 + (u_y + d^2 v_x)^2 + 2 d^2 v_y^2
/// Violated constraints raise DomainError.
double korn_ratio(const Grid& g, const BulkField& u, const BulkField& v, double delta);

/// (|f|_0^2 + delta ||D|^{1/2} f|_0^2) / (||f||^2 + delta^2 ||f_x||^2 + ||f_y||^2),
/// traces taken on the surface y = 1.
double trace_ratio(const Grid& g, const BulkField& f, double delta);

struct AuditOptions {
  std::vector<double> deltas{1.0, 0.25, 1.0 / 16.0};
  int trials = 100;
  int nx = 32;
  int ny = 32;
  int band = 6;  ///< random x-modes 1..band
  int ydeg = 6;  ///< random y-polynomial degree
  std::uint64_t seed = 1;
};

struct AuditRow {
  double delta = 0.0;
  double worst = 0.0;  ///< max ratio over the trials
};

/// Random stream functions psi = y^2 q(x, y): u = psi_y, v = -psi_x.
std::vector<AuditRow> korn_audit(const AuditOptions& opts);
/// Random single-mode f with boundary-layer y-profiles of random width.
std::vector<AuditRow> trace_audit(const AuditOptions& opts);
/// Exact supremum of the trace quotient over fields with x-modes 0..nmax:
/// max_n (1 + s) / (l tanh l), s = 2 pi n delta, l = sqrt(1 + s^2).
double trace_supremum(double delta, int nmax);

// ---- Energy inequality audit -----------------------------------------------

struct EnergySample {
  double t = 0.0;
  double E = 0.0, F = 0.0, N = 0.0;
};

struct EnergyAuditRow {
  double t = 0.0;
  double dEdt_plus_F = 0.0;
  double N = 0.0;
  double implied_C = 0.0;  ///< (dE/dt + F)/N; 0 when both vanish
};

struct EnergyAudit {
  std::vector<EnergyAuditRow> rows;
  double max_C = 0.0;             ///< smallest C with dE/dt + F <= C N throughout
  double fraction_dissipative = 0.0;  ///< share of rows with dE/dt + F <= 0
  double fraction_bounded = 0.0;  ///< share of rows with dE/dt + F <= max_C N
  bool cadence_warning = false;   ///< sample spacing above the dissipation time E/F
  std::string warning;
};

/// Central differences in the interior, one-sided at the ends. Requires at
/// least two samples at strictly increasing times.
EnergyAudit energy_audit(const std::vector<EnergySample>& series);
std::vector<EnergySample> energy_series(const std::vector<EnergyReport>& reports,
                                        const std::vector<double>& times);

}  // namespace filmcascade
