#include "lclt/verifier.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <chrono>
#include <cmath>
#include <limits>

#include "lclt/errors.hpp"
#include "lclt/numeric.hpp"
#include "lclt/parallel.hpp"
#include "lclt/polymer.hpp"

namespace lclt {

std::string to_string(CVariant v) { return v == CVariant::stated ? "stated" : "proved"; }

CVariant parse_c_variant(const std::string& s) {
  if (s == "stated") return CVariant::stated;
  if (s == "proved") return CVariant::proved;
  throw ConfigError("c variant must be 'stated' or 'proved', got '" + s + "'");
}

double c_constant(double kappa_value, double delta, CVariant variant) {
  const double s = std::sin(delta / 2.0);
  const double k = variant == CVariant::stated ? kappa_value : kappa_value * kappa_value;
  return k * s * s;
}

ConstantsBundle constants_from(double J, double J_r0, int r0, const SpinInterval& spins, CVariant variant) {
  if (J < 0.0 || J_r0 < 0.0) throw DomainError("interaction norms must be nonnegative");
  ConstantsBundle b;
  b.J = J;
  b.J_r0 = J_r0;
  b.r0 = r0;
  b.sigma = spins.sigma();
  b.card = spins.card();
  const double s = b.sigma;
  b.kappa = kappa(J, b.sigma, b.card);
  b.delta = b.kappa / (12.0 * s);
  b.C = s * s * b.kappa / 4.0;
  b.c_stated = c_constant(b.kappa, b.delta, CVariant::stated);
  b.c_proved = c_constant(b.kappa, b.delta, CVariant::proved);
  b.variant = variant;
  b.c = variant == CVariant::stated ? b.c_stated : b.c_proved;
  b.nu_r0 = 2.0 * std::exp(2.0) * std::exp(J_r0 * s * s / 2.0) * s * s * std::sqrt(J_r0);
  b.eps = std::min(std::exp(1.0) * b.delta * s, b.nu_r0);
  b.a_part_a = std::log(2.0);
  b.a_part_b = b.c / 4.0;
  b.condition_lhs = std::exp(J_r0 / 2.0) * std::sqrt(J_r0);
  b.condition_lhs_sigma = std::exp(J_r0 * s * s / 2.0) * std::sqrt(J_r0);
  b.branch_a_rhs = std::pow(b.kappa, 1.5) / (96.0 * std::sqrt(2.0) * s * s * s * std::exp(2.0));
  b.branch_b_rhs = std::exp(-1.25 * b.c) * std::expm1(b.c / 4.0) / ((1.0 + b.delta * s) * std::exp(1.0) * s * s);
  b.branch_a_ok = b.condition_lhs <= b.branch_a_rhs;
  b.branch_b_ok = b.condition_lhs <= b.branch_b_rhs;
  b.condifina_ok = b.branch_a_ok && b.branch_b_ok;
  b.condifina_sigma_ok = b.condition_lhs_sigma <= std::min(b.branch_a_rhs, b.branch_b_rhs);
  return b;
}

ConstantsBundle constants(const GibbsModel& model, int r0, CVariant variant) {
  if (r0 < 1) throw DomainError("r0 must be >= 1");
  return constants_from(model.interaction_norm(1), model.interaction_norm(r0), r0, model.spins(), variant);
}

ConstantsBundle constants(const GibbsModel& model, CVariant variant) {
  return constants(model, model.box().r0(), variant);
}

std::optional<int> min_r0(const GibbsModel& model, int r0_max, CVariant variant) {
  if (r0_max < 1) throw DomainError("r0_max must be >= 1");
  for (int r0 = 1; r0 <= r0_max; ++r0) {
    if (constants(model, r0, variant).condifina_ok) return r0;
  }
  return std::nullopt;
}

void VerificationReport::settle() {
  margin = rhs - lhs;
  pass = margin >= -tolerance;
}

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

void require_consecutive(const GibbsModel& model, const char* what) {
  if (!model.spins().consecutive()) {
    throw PreconditionError(std::string(what) +
                            " needs consecutive integer spins; a step > 1 makes e^{itS} periodic with period < 2 pi");
  }
}

void require_condition(const ConstantsBundle& k) {
  if (k.condifina_ok) return;
  std::string failing;
  if (!k.branch_a_ok) failing += "branch (a): " + std::to_string(k.condition_lhs) + " > " + std::to_string(k.branch_a_rhs);
  if (!k.branch_b_ok) {
    if (!failing.empty()) failing += "; ";
    failing += "branch (b): " + std::to_string(k.condition_lhs) + " > " + std::to_string(k.branch_b_rhs);
  }
  throw PreconditionError("decimation condition not satisfied at r0 = " + std::to_string(k.r0) + ", " + failing);
}

/// Pmf of the decimated sum under each exterior condition of the family.
struct OmegaTables {
  std::vector<std::string> labels;
  std::vector<PmfTable> tables;
};

OmegaTables decimated_tables(const GibbsModel& model, const CheckOptions& opts) {
  const auto family = omega_family(model, opts.omega_samples, opts.seed, true, opts.conditional_budget);
  const Region decimated = model.region(RegionKind::decimated);
  OmegaTables out;
  std::vector<std::optional<PmfTable>> slots(family.size());
  parallel_for(family.size(), [&](std::size_t i) {
    slots[i].emplace(pmf(model.local_system(decimated, family[i].boundary), opts.enumeration));
  });
  for (std::size_t i = 0; i < family.size(); ++i) {
    out.labels.push_back(family[i].label);
    out.tables.push_back(std::move(*slots[i]));
  }
  return out;
}

nlohmann::ordered_json model_summary(const GibbsModel& model) {
  return {{"dimension", model.box().dimension()},
          {"radius", model.box().radius()},
          {"r0", model.box().r0()},
          {"spin_lo", model.spins().lo()},
          {"spin_hi", model.spins().hi()}};
}

/// Worst exterior condition of the family at t.
std::pair<double, std::string> worst_abs_cf(const OmegaTables& tables, double t) {
  double worst = -1.0;
  std::string label;
  for (std::size_t i = 0; i < tables.tables.size(); ++i) {
    const double v = std::abs(tables.tables[i].char_fn(t));
    if (v > worst) {
      worst = v;
      label = tables.labels[i];
    }
  }
  return {worst, label};
}

}  // namespace

std::vector<double> open_closed_grid(double lo, double hi, int t_points) {
  if (t_points < 1) throw DomainError("t_points must be >= 1");
  std::vector<double> grid;
  for (int j = 1; j <= t_points; ++j) grid.push_back(lo + (hi - lo) * j / t_points);
  return grid;
}

VerificationReport check_single_spin_cf(const GibbsModel& model, const std::vector<double>& t_grid,
                                        CVariant variant, const CheckOptions& opts) {
  const auto start = Clock::now();
  require_consecutive(model, "the single-spin bound");
  const ConstantsBundle k = constants(model, variant);
  for (double t : t_grid) {
    if (t < k.delta || t > 2.0 * kPi - k.delta) {
      throw DomainError("t = " + std::to_string(t) + " outside [delta, 2 pi - delta] with delta = " +
                        std::to_string(k.delta));
    }
  }
  const SpinInterval& spins = model.spins();
  // single-spin laws to test: every decimated site under every exterior
  // condition, plus fields h(s) = f s on a grid of |f| <= J sigma
  std::vector<std::vector<double>> laws;
  const Region decimated = model.region(RegionKind::decimated);
  for (const auto& omega : omega_family(model, opts.omega_samples, opts.seed, true, opts.conditional_budget)) {
    const LocalSystem sys = model.local_system(decimated, omega.boundary);
    for (std::size_t i = 0; i < sys.size(); ++i) laws.push_back(sys.single_site_probabilities(i));
  }
  const int field_points = 33;
  for (int j = 0; j < field_points; ++j) {
    const double f = k.J * k.sigma * (2.0 * j / (field_points - 1) - 1.0);
    LocalSystem one;
    one.sites = {Site(model.box().dimension(), 0)};
    one.couplings = {0.0};
    one.field = {f};
    one.spins = spins;
    laws.push_back(one.single_site_probabilities(0));
  }
  // -ln|E e^{its}| from 1 - |E|^2 = 4 sum_{u<v} p_u p_v sin^2(t (s_u - s_v) / 2),
  // which stays accurate when c is far below machine epsilon
  double weakest = std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  for (const auto& p : laws) {
    for (double t : t_grid) {
      CompensatedSum gap;
      for (int u = 0; u < spins.card(); ++u)
        for (int v = u + 1; v < spins.card(); ++v) {
          const double sn = std::sin(0.5 * t * (spins.value(u) - spins.value(v)));
          gap.add(4.0 * p[u] * p[v] * sn * sn);
        }
      const double decay = -0.5 * std::log1p(-std::min(gap.value(), 1.0));
      if (decay < weakest) {
        weakest = decay;
        worst_t = t;
      }
    }
  }
  VerificationReport r;
  r.check_name = "prop1";
  r.parameters = model_summary(model);
  r.parameters["c_variant"] = to_string(variant);
  r.parameters["c"] = k.c;
  r.parameters["delta"] = k.delta;
  r.parameters["t_points"] = t_grid.size();
  r.parameters["laws"] = laws.size();
  r.parameters["worst_t"] = worst_t;
  r.parameters["worst_abs_cf"] = std::exp(-weakest);
  // c <= -ln|E e^{its}|, with a tolerance relative to c
  r.tolerance = opts.tolerance * k.c;
  r.parameters["tolerance"] = r.tolerance;
  r.lhs = k.c;
  r.rhs = weakest;
  r.enforced = variant == CVariant::proved;
  r.settle();
  r.runtime_ms = elapsed_ms(start);
  return r;
}

std::vector<VerificationReport> check_lemma_a(const GibbsModel& model, int t_points, const CheckOptions& opts) {
  const auto start = Clock::now();
  const ConstantsBundle k = constants(model, CVariant::proved);
  require_condition(k);
  const OmegaTables tables = decimated_tables(model, opts);
  const double N = static_cast<double>(model.region(RegionKind::decimated).size());
  std::vector<VerificationReport> out;
  for (double t : open_closed_grid(0.0, k.delta, t_points)) {
    auto [worst, label] = worst_abs_cf(tables, t);
    VerificationReport r;
    r.check_name = "lemma_a";
    r.parameters = model_summary(model);
    r.parameters["t"] = t;
    r.parameters["C"] = k.C;
    r.parameters["decimated_sites"] = N;
    r.parameters["omega_count"] = tables.tables.size();
    r.parameters["worst_omega"] = label;
    r.parameters["tolerance"] = opts.tolerance;
    r.lhs = worst;
    r.rhs = std::exp(-k.C * N * t * t / 2.0);
    r.tolerance = opts.tolerance;
    r.settle();
    out.push_back(std::move(r));
  }
  const auto ms = elapsed_ms(start);
  for (auto& r : out) r.runtime_ms = ms;
  return out;
}

std::vector<VerificationReport> check_lemma_b(const GibbsModel& model, int t_points, CVariant variant,
                                              const CheckOptions& opts) {
  const auto start = Clock::now();
  const ConstantsBundle k = constants(model, variant);
  require_condition(k);
  const OmegaTables tables = decimated_tables(model, opts);
  const double N = static_cast<double>(model.region(RegionKind::decimated).size());
  std::vector<VerificationReport> out;
  for (double t : open_closed_grid(k.delta, kPi, t_points)) {
    auto [worst, label] = worst_abs_cf(tables, t);
    VerificationReport r;
    r.check_name = "lemma_b";
    r.parameters = model_summary(model);
    r.parameters["t"] = t;
    r.parameters["c_variant"] = to_string(variant);
    r.parameters["c"] = k.c;
    r.parameters["decimated_sites"] = N;
    r.parameters["omega_count"] = tables.tables.size();
    r.parameters["worst_omega"] = label;
    r.parameters["tolerance"] = opts.tolerance;
    r.lhs = worst;
    r.rhs = std::exp(-k.c * N / 2.0);
    r.tolerance = opts.tolerance;
    r.enforced = variant == CVariant::proved;
    r.settle();
    out.push_back(std::move(r));
  }
  const auto ms = elapsed_ms(start);
  for (auto& r : out) r.runtime_ms = ms;
  return out;
}

std::vector<VerificationReport> check_trick_chain(const GibbsModel& model, int t_points, const CheckOptions& opts) {
  const auto start = Clock::now();
  const ConstantsBundle k = constants(model, CVariant::proved);
  const PmfTable full = pmf(model.local_system(RegionKind::full), opts.enumeration);
  const double N = static_cast<double>(model.region(RegionKind::decimated).size());
  std::vector<VerificationReport> out;
  for (double t : open_closed_grid(0.0, k.delta, t_points)) {
    VerificationReport r;
    r.check_name = "trick_chain";
    r.parameters = model_summary(model);
    r.parameters["t"] = t;
    r.parameters["tolerance"] = opts.tolerance;
    r.lhs = std::abs(full.char_fn(t));
    r.rhs = std::exp(-k.C * N * t * t / 2.0);
    r.tolerance = opts.tolerance;
    r.settle();
    out.push_back(std::move(r));
  }
  const auto ms = elapsed_ms(start);
  for (auto& r : out) r.runtime_ms = ms;
  return out;
}

DressedRoute dressed_route(const GibbsModel& model, const Boundary& omega, double t, CVariant variant,
                           const EnumerationOptions& opts) {
  const ConstantsBundle k = constants(model, variant);
  const PolymerSystem sys = PolymerSystem::decimated(model, omega, opts);
  DressedRoute out;
  out.c = k.c;
  out.a = k.c / 4.0;
  out.sites = sys.size();
  const double N = static_cast<double>(sys.size());
  // enumerated w_c norms for k >= 2, bo2-type geometric tail beyond them
  std::map<int, double> norms;
  const int kmax = std::min<int>(static_cast<int>(sys.size()), kMaxPolymerSize);
  for (int j = 2; j <= kmax; ++j) norms[j] = sys.weight_norm(j, WeightKind::wc, k.delta, k.c);
  const double s2 = static_cast<double>(k.sigma) * k.sigma;
  const double base = (1.0 + k.delta * k.sigma) * std::exp(1.0 + k.c) * std::exp(k.J_r0 * s2 / 2.0) * s2 *
                      std::sqrt(k.J_r0);
  const bool finite_box = static_cast<int>(sys.size()) <= kmax;
  const auto conv = convergence_check(norms.empty() ? std::map<int, double>{{2, 0.0}} : norms, out.a,
                                      finite_box ? std::optional<double>(0.0) : std::optional<double>(base));
  out.convergence_ok = conv.satisfied;
  out.convergence_lhs = conv.lhs;
  out.convergence_rhs = conv.rhs;
  out.abs_log = absolute_log_resummed(sys, ActivityParams::with_dressing(t, k.c));
  out.target = std::exp(-k.c * N / 2.0);
  out.bound = out.abs_log ? std::exp(-k.c * N + 2.0 * *out.abs_log) : std::numeric_limits<double>::infinity();
  out.exact_abs = std::abs(char_fn(sys.local(), t, opts));
  return out;
}

IntegralDecomposition integral_decomposition(const GibbsModel& model, double A, std::optional<double> delta_override,
                                             CVariant variant, const EnumerationOptions& opts) {
  require_consecutive(model, "the integral decomposition");
  const ConstantsBundle k = constants(model, variant);
  const PmfTable table = pmf(model.local_system(RegionKind::full), opts);
  IntegralDecomposition out;
  out.A = A;
  out.delta = delta_override.value_or(k.delta);
  out.variance = table.variance();
  out.decimated_sites = model.region(RegionKind::decimated).size();
  if (!(out.variance > 1e-300)) throw DomainError("the integral decomposition needs a positive variance");
  if (!(out.delta > 0.0 && out.delta < kPi)) throw DomainError("delta must lie in (0, pi)");
  const double sd = std::sqrt(out.variance);
  if (!(A > 0.0 && A < out.delta * sd)) {
    throw DomainError("A = " + std::to_string(A) + " outside (0, delta sqrt(D)) = (0, " +
                      std::to_string(out.delta * sd) + ")");
  }
  const double mean = table.mean();
  auto normalized = [&](double t) {
    return std::polar(1.0, -t * mean / sd) * table.char_fn(t / sd);
  };
  auto i1 = integrate_absolute([&](double t) { return std::abs(normalized(t) - std::exp(-t * t / 2.0)); }, -A, A,
                               kQuadratureTolerance);
  auto abs_cf = [&](double t) { return std::abs(table.char_fn(t)); };
  auto i2 = integrate_absolute(abs_cf, A / sd, out.delta, kQuadratureTolerance / (2.0 * sd));
  auto i3 = integrate_absolute(abs_cf, out.delta, kPi, kQuadratureTolerance / (2.0 * sd));
  out.I1 = i1.value;
  out.I2 = 2.0 * sd * i2.value;
  out.I3 = 2.0 * sd * i3.value;
  out.I4 = std::sqrt(2.0 * kPi) * boost::math::erfc(A / std::sqrt(2.0));
  out.quadrature_error = i1.error_estimate + 2.0 * sd * (i2.error_estimate + i3.error_estimate);

  const double N = static_cast<double>(out.decimated_sites);
  // integral of e^{-C tau^2/2} over [lo, hi] in closed form
  const double r = std::sqrt(k.C / 2.0);
  const double lo = A * std::sqrt(N / out.variance);
  const double hi = out.delta * std::sqrt(N);
  const double gauss = std::sqrt(kPi / (2.0 * k.C)) * (std::erf(hi * r) - std::erf(lo * r));
  out.bound_I2 = 2.0 * std::sqrt(out.variance / N) * gauss;
  out.bound_I3 = 2.0 * sd * (kPi - out.delta) * std::exp(-k.c * N / 2.0);
  out.G_n = 2.0 * kPi * lclt_gap(table);
  return out;
}

std::vector<TrendPoint> lclt_trend(const std::vector<GibbsModel>& models, const EnumerationOptions& opts) {
  std::vector<TrendPoint> out;
  for (const auto& m : models) {
    const PmfTable table = pmf(m.local_system(RegionKind::full), opts);
    TrendPoint p;
    p.site_count = m.box().site_count();
    p.gap = lclt_gap(table);
    p.variance_density = table.variance() / static_cast<double>(p.site_count);
    p.method = "exact";
    out.push_back(p);
  }
  return out;
}

bool decreasing_trend(const std::vector<double>& values, int allowed_rises) {
  if (values.size() < 2) return true;
  int rises = 0;
  for (std::size_t i = 1; i < values.size(); ++i) rises += values[i] >= values[i - 1];
  return rises <= allowed_rises && values.back() < values.front();
}

bool agree_to_significant_figures(double a, double b, int figures) {
  if (b == 0.0) return a == 0.0;
  const double unit = std::pow(10.0, std::floor(std::log10(std::abs(b))) - (figures - 1));
  return std::abs(a - b) <= 0.5 * unit;
}

GAudit g_audit(const GibbsModel& model, const Boundary& omega, double theta, int K) {
  const ConstantsBundle k = constants(model, CVariant::proved);
  if (!(theta > 0.0 && theta < k.delta)) throw DomainError("theta must lie in (0, delta)");
  if (K < 3) throw DomainError("the audit truncation order must be >= 3");
  const LocalSystem sys = model.local_system(model.region(RegionKind::decimated), omega);
  if (sys.internal_norm() != 0.0) {
    throw PreconditionError("the single-site audit needs non-interacting decimated sites");
  }
  const SpinInterval& spins = sys.spins;
  const double s = k.sigma;
  GAudit out;
  out.theta = theta;
  out.K = K;
  out.sites = sys.size();
  ComplexSum g1, g2, g3, exact;
  CompensatedSum tail;
  using cd = std::complex<double>;
  for (std::size_t x = 0; x < sys.size(); ++x) {
    const auto p = sys.single_site_probabilities(x);
    ComplexSum m0, m1, m2;
    for (int v = 0; v < spins.card(); ++v) {
      const double sv = spins.value(v);
      const cd e = p[v] * std::polar(1.0, theta * sv);
      m0.add(e);
      m1.add(sv * e);
      m2.add(sv * sv * e);
    }
    // xi = E e^{its} - 1, xi' = i E s e^{its}, xi'' = -E s^2 e^{its}
    const cd phi = m0.value();
    const cd xi = phi - 1.0;
    const cd d1 = cd(0.0, 1.0) * m1.value();
    const cd d2 = -m2.value();
    g1.add(d2);
    g2.add(-(d1 * d1 + xi * d2));
    cd power = 1.0;  // xi^{k-2}
    for (int j = 3; j <= K; ++j) {
      power = (j == 3) ? xi : power * xi;
      const double sign = (j % 2 == 1) ? 1.0 : -1.0;
      g3.add(sign * (static_cast<double>(j - 1) * power * d1 * d1 + power * xi * d2));
    }
    const double r = std::abs(xi);
    if (r < 1.0) {
      const double rK = std::pow(r, K);
      const double sum_pow = rK / (1.0 - r);                                              // sum_{k>K} r^{k-1}
      const double sum_lin = (K * std::pow(r, K - 1) * (1.0 - r) + rK) / ((1.0 - r) * (1.0 - r));  // sum (k-1) r^{k-2}
      tail.add(sum_lin * std::norm(d1) + sum_pow * std::abs(d2));
    } else {
      tail.add(std::numeric_limits<double>::infinity());
    }
    exact.add(d2 / phi - (d1 / phi) * (d1 / phi));
  }
  out.G1 = g1.value();
  out.G2 = g2.value();
  out.G3 = g3.value();
  out.G3_tail = tail.value();
  out.exact = exact.value();
  out.residual = std::abs(out.exact - (out.G1 + out.G2 + out.G3));
  const double N = static_cast<double>(out.sites);
  out.G1_bound = -(7.0 / 8.0) * s * s * k.kappa * N;
  out.G2_bound = 2.0 * k.delta * s * s * s * N;
  out.G3_bound = 2.5 * k.delta * s * s * s * N;
  out.combined_bound = -s * s * k.kappa * N / 2.0;
  const double tol = 1e-12 * (1.0 + std::abs(out.exact));
  out.series_ok = out.residual <= out.G3_tail + tol;
  out.G1_ok = out.G1.real() <= out.G1_bound + tol;
  out.G2_ok = out.G2.real() <= out.G2_bound + tol;
  out.G3_ok = std::abs(out.G3) <= out.G3_bound + tol;
  out.combined_ok = out.G1.real() + out.G2.real() + std::abs(out.G3) <= out.combined_bound + tol;
  return out;
}

std::vector<VerificationReport> g_audit_reports(const GibbsModel& model, double theta, int K,
                                                const CheckOptions& opts) {
  const auto start = Clock::now();
  std::vector<VerificationReport> out;
  for (const auto& omega : omega_family(model, opts.omega_samples, opts.seed, true, opts.conditional_budget)) {
    const GAudit a = g_audit(model, omega.boundary, theta, K);
    auto add = [&](const std::string& name, double lhs, double rhs) {
      VerificationReport r;
      r.check_name = name;
      r.parameters = model_summary(model);
      r.parameters["theta"] = theta;
      r.parameters["K"] = K;
      r.parameters["omega"] = omega.label;
      r.parameters["tolerance"] = opts.tolerance;
      r.lhs = lhs;
      r.rhs = rhs;
      r.tolerance = opts.tolerance * (1.0 + std::abs(a.exact));
      r.settle();
      out.push_back(std::move(r));
    };
    add("g_audit_series", a.residual, a.G3_tail);
    add("g_audit_G1", a.G1.real(), a.G1_bound);
    add("g_audit_G2", a.G2.real(), a.G2_bound);
    add("g_audit_G3", std::abs(a.G3), a.G3_bound);
    add("g_audit_combined", a.G1.real() + a.G2.real() + std::abs(a.G3), a.combined_bound);
  }
  const auto ms = elapsed_ms(start);
  for (auto& r : out) r.runtime_ms = ms;
  return out;
}

}  // namespace lclt
