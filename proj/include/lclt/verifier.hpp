#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lclt/exact.hpp"
#include "lclt/model.hpp"

namespace lclt {

/// Which decay constant c to use: kappa sin^2(delta/2) as stated in the
/// lemma, or kappa^2 sin^2(delta/2) as delivered by the single-spin proof.
enum class CVariant { stated, proved };

std::string to_string(CVariant v);
CVariant parse_c_variant(const std::string& s);

struct ConstantsBundle {
  double J = 0.0;     // interaction norm on the full lattice
  double J_r0 = 0.0;  // interaction norm on the decimated sublattice
  int r0 = 1;
  int sigma = 1;
  int card = 2;
  double kappa = 0.0;
  double delta = 0.0;
  double C = 0.0;
  double c_stated = 0.0;
  double c_proved = 0.0;
  CVariant variant = CVariant::proved;
  double c = 0.0;  // the selected variant
  double nu_r0 = 0.0;
  double eps = 0.0;
  double a_part_a = 0.0;  // ln 2
  double a_part_b = 0.0;  // c / 4
  // e^{J_r0/2} J_r0^{1/2} against the two branches of the condition
  double condition_lhs = 0.0;
  double branch_a_rhs = 0.0;
  double branch_b_rhs = 0.0;
  bool branch_a_ok = false;
  bool branch_b_ok = false;
  bool condifina_ok = false;
  // same with e^{J_r0 sigma^2/2}, the form the two proofs actually use
  double condition_lhs_sigma = 0.0;
  bool condifina_sigma_ok = false;
};

/// Decay constant for given kappa and delta.
double c_constant(double kappa, double delta, CVariant variant);

ConstantsBundle constants_from(double J, double J_r0, int r0, const SpinInterval& spins, CVariant variant);
ConstantsBundle constants(const GibbsModel& model, CVariant variant = CVariant::proved);
/// Constants with the decimation step replaced by r0.
ConstantsBundle constants(const GibbsModel& model, int r0, CVariant variant);

/// Smallest r0 <= r0_max with the condition satisfied.
std::optional<int> min_r0(const GibbsModel& model, int r0_max, CVariant variant = CVariant::proved);

struct VerificationReport {
  std::string check_name;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// false when a failure is recorded but must not fail the run
  bool enforced = true;
  std::int64_t runtime_ms = 0;

  /// Sets margin = rhs - lhs and pass = margin >= -tolerance.
  void settle();
};

struct CheckOptions {
  int omega_samples = 8;
  std::uint64_t seed = 1;
  /// conditional exterior configurations are added while at most this many exist
  std::uint64_t conditional_budget = 256;
  EnumerationOptions enumeration;
  double tolerance = 1e-12;
};

/// |E_x e^{its}| <= e^{-c} for every decimated site under every sampled
/// exterior condition, plus a uniform grid of admissible field strengths.
/// Reported in log form: lhs = c, rhs = min -ln|E_x e^{its}|, tolerance
/// relative to c (opts.tolerance * c).
VerificationReport check_single_spin_cf(const GibbsModel& model, const std::vector<double>& t_grid,
                                        CVariant variant, const CheckOptions& opts = {});

/// t_points uniform grid points of (lo, hi]; the left end is excluded.
std::vector<double> open_closed_grid(double lo, double hi, int t_points);

/// Part (a): decay e^{-C N t^2/2} on (0, delta], one report per t.
std::vector<VerificationReport> check_lemma_a(const GibbsModel& model, int t_points, const CheckOptions& opts = {});

/// Part (b): decay e^{-(c/2) N} on (delta, pi], one report per t.
std::vector<VerificationReport> check_lemma_b(const GibbsModel& model, int t_points, CVariant variant,
                                              const CheckOptions& opts = {});

/// Full-box |E e^{itS}| against the decimated part (a) bound on (0, delta].
std::vector<VerificationReport> check_trick_chain(const GibbsModel& model, int t_points,
                                                  const CheckOptions& opts = {});

struct DressedRoute {
  double c = 0.0;
  double a = 0.0;  // c / 4
  std::size_t sites = 0;
  bool convergence_ok = false;  // weight-norm criterion with exponent a
  double convergence_lhs = 0.0;
  double convergence_rhs = 0.0;
  /// |ln Xi|^c: the absolute dressed cluster series, resummed
  std::optional<double> abs_log;
  double bound = 0.0;       // e^{-cN} e^{2 |ln Xi|^c}
  double target = 0.0;      // e^{-cN/2}
  double exact_abs = 0.0;   // |E~ e^{itS~}|
};

/// Dressed-expansion route to part (b) for one exterior condition.
DressedRoute dressed_route(const GibbsModel& model, const Boundary& omega, double t, CVariant variant,
                           const EnumerationOptions& opts = {});

/// Absolute quadrature tolerance of each of the four integrals.
inline constexpr double kQuadratureTolerance = 1e-9;

struct IntegralDecomposition {
  double A = 0.0;
  double delta = 0.0;
  double variance = 0.0;
  std::size_t decimated_sites = 0;
  double I1 = 0.0, I2 = 0.0, I3 = 0.0, I4 = 0.0;
  double quadrature_error = 0.0;
  double bound_I2 = 0.0;
  double bound_I3 = 0.0;
  double G_n = 0.0;  // 2 pi sup_p |sqrt(D) P(p) - phi(z(p))|
  double sum() const { return I1 + I2 + I3 + I4; }
};

/// Quadrature of the four integrals over the exact characteristic function
/// of the full box. Needs consecutive-integer spins and 0 < A < delta sqrt(D).
IntegralDecomposition integral_decomposition(const GibbsModel& model, double A,
                                             std::optional<double> delta_override = std::nullopt,
                                             CVariant variant = CVariant::proved,
                                             const EnumerationOptions& opts = {});

struct TrendPoint {
  std::size_t site_count = 0;
  double gap = 0.0;
  double gap_std_error = 0.0;
  double variance_density = 0.0;
  double variance_density_std_error = 0.0;
  std::string method;  // "exact" or "mc"
};

/// Exact gap and variance density of each model's full box.
std::vector<TrendPoint> lclt_trend(const std::vector<GibbsModel>& models, const EnumerationOptions& opts = {});

/// Decreasing except for at most `allowed_rises` steps, and overall lower at the end.
bool decreasing_trend(const std::vector<double>& values, int allowed_rises = 1);
/// |a - b| within half a unit of the n-th significant digit of b.
bool agree_to_significant_figures(double a, double b, int figures);

struct GAudit {
  double theta = 0.0;
  int K = 0;
  std::size_t sites = 0;
  std::complex<double> G1, G2, G3;
  double G3_tail = 0.0;  // bound on the omitted orders k > K
  std::complex<double> exact;  // (log Xi)'' at theta
  double residual = 0.0;       // |exact - (G1 + G2 + G3)|
  double G1_bound = 0.0;       // -(7/8) sigma^2 kappa N
  double G2_bound = 0.0;       // 2 delta sigma^3 N
  double G3_bound = 0.0;       // (5/2) delta sigma^3 N
  double combined_bound = 0.0; // -sigma^2 kappa N / 2
  bool series_ok = false;
  bool G1_ok = false;
  bool G2_ok = false;
  bool G3_ok = false;
  bool combined_ok = false;
};

/// Single-site decomposition of the second derivative of log Xi when the
/// decimated sites do not interact. theta must lie in (0, delta).
GAudit g_audit(const GibbsModel& model, const Boundary& omega, double theta, int K);

std::vector<VerificationReport> g_audit_reports(const GibbsModel& model, double theta, int K,
                                                const CheckOptions& opts = {});

}  // namespace lclt
