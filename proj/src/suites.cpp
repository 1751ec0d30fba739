#include "lclt/suites.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "lclt/combinatorics.hpp"
#include "lclt/errors.hpp"
#include "lclt/numeric.hpp"
#include "lclt/parallel.hpp"
#include "lclt/polymer.hpp"

namespace lclt {

namespace {

using cd = std::complex<double>;

constexpr double kRatioCap = std::numeric_limits<double>::max();

std::string spin_text(const SpinInterval& s) {
  return "[" + std::to_string(s.lo()) + "," + std::to_string(s.hi()) + "," + std::to_string(s.step()) + "]";
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// |x| / bound, with 0/0 = 0 and x/0 capped.
double ratio(double x, double bound) {
  if (bound > 0.0) return x / bound;
  return x > 0.0 ? kRatioCap : 0.0;
}

/// Runs `make` for every index in parallel and concatenates in index order.
template <class F>
std::vector<VerificationReport> gather(std::size_t n, F&& make) {
  std::vector<std::vector<VerificationReport>> parts(n);
  parallel_for(n, [&](std::size_t i) { parts[i] = make(i); });
  std::vector<VerificationReport> out;
  for (auto& p : parts)
    for (auto& r : p) out.push_back(std::move(r));
  return out;
}

/// Random system of at most `max_sites` sites from a small random model.
PolymerSystem random_system(std::mt19937_64& rng, int min_sites, int max_sites, double max_J) {
  const int dim = 1 + static_cast<int>(rng() % 2);
  const SpinInterval spins = (rng() % 2) ? SpinInterval(-1, 1, 2) : SpinInterval(-1, 1);
  const auto m = random_explicit_model(rng, dim, 1, spins, max_J);
  PolymerSystem full(m.local_system(RegionKind::full));
  const int span = max_sites - min_sites + 1;
  const int keep = std::min<int>(min_sites + static_cast<int>(rng() % span), static_cast<int>(full.size()));
  return full.restrict_to((Polymer{1} << keep) - 1);
}

PolymerSystem decimated_system(const GibbsModel& m, const EnumerationOptions& enumeration, std::size_t max_sites) {
  PolymerSystem ps = PolymerSystem::decimated(m, m.boundary(), enumeration);
  if (ps.size() > max_sites) ps = ps.restrict_to((Polymer{1} << max_sites) - 1);
  return ps;
}

bool all_of_pass(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

SpinInterval random_spins(std::mt19937_64& rng) {
  switch (rng() % 3) {
    case 0: return SpinInterval(0, 1);
    case 1: return SpinInterval(-1, 1, 2);
    default: return SpinInterval(-1, 1);
  }
}

}  // namespace

CheckOptions SuiteOptions::check_options() const {
  CheckOptions c;
  c.omega_samples = omega_samples;
  c.seed = seed;
  c.enumeration = enumeration;
  return c;
}

std::mt19937_64 family_rng(std::uint64_t seed, std::uint64_t family, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(family), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

GibbsModel random_explicit_model(std::mt19937_64& rng, int dimension, int radius, const SpinInterval& spins,
                                 double max_J, int r0) {
  Box box(dimension, radius, r0);
  std::vector<std::tuple<Site, Site, double>> pairs;
  const auto sites = box.sites();
  for (std::size_t i = 0; i < sites.size(); ++i)
    for (std::size_t j = i + 1; j < sites.size(); ++j) pairs.emplace_back(sites[i], sites[j], uniform(rng, -max_J, max_J));
  std::map<Site, int> ring;
  for (const Site& x : sites) {
    Site y = x;
    y[0] = x[0] + (x[0] >= 0 ? radius + 1 : -radius - 1);
    pairs.emplace_back(x, y, uniform(rng, -max_J, max_J));
    ring[y] = spins.value(static_cast<int>(rng() % static_cast<std::uint64_t>(spins.card())));
  }
  const Boundary omega = Boundary::random(rng()).with_overrides(ring);
  return GibbsModel(box, spins, Coupling(ExplicitPairs{pairs}, dimension), omega);
}

VerificationReport make_report(std::string check, nlohmann::ordered_json parameters, double lhs, double rhs,
                               double tolerance, bool enforced) {
  VerificationReport r;
  r.check_name = std::move(check);
  r.parameters = std::move(parameters);
  r.parameters["tolerance"] = tolerance;
  r.lhs = lhs;
  r.rhs = rhs;
  r.tolerance = tolerance;
  r.enforced = enforced;
  r.settle();
  return r;
}

std::vector<VerificationReport> identity_suite(const SuiteOptions& opts, int models, int t_values) {
  if (models < 1 || t_values < 1) throw DomainError("identity suite needs at least one model and one t value");
  return gather(static_cast<std::size_t>(models), [&](std::size_t i) {
    auto rng = family_rng(opts.seed, 1, i);
    const int dim = 1 + static_cast<int>(i % 2);
    const SpinInterval spins = random_spins(rng);
    const GibbsModel m = dim == 1 ? random_explicit_model(rng, 1, 4, spins, 0.3, 2)
                                  : random_explicit_model(rng, 2, 2, spins, 0.3, 2);
    const PolymerSystem ps = decimated_system(m, opts.enumeration, 5);
    std::vector<VerificationReport> out;
    for (int j = 0; j < t_values; ++j) {
      const double t = t_values == 1 ? 0.0 : kPi * j / (t_values - 1);
      const auto params = ActivityParams::plain(t);
      const cd direct = ps.partition(params, PartitionMode::direct);
      const cd poly = ps.partition(params, PartitionMode::polymer_sum);
      nlohmann::ordered_json p{{"model", i}, {"dimension", dim}, {"spins", spin_text(spins)},
                               {"sites", ps.size()}, {"t", t}};
      out.push_back(make_report("master_identity", p, std::abs(direct - poly) / std::abs(direct), 1e-10, 0.0));
    }
    return out;
  });
}

std::vector<VerificationReport> graph_table_suite() {
  std::vector<VerificationReport> out;
  const std::uint64_t connected[] = {1, 1, 4, 38, 728, 26704};
  for (int k = 1; k <= 6; ++k) {
    const double got = static_cast<double>(count_connected_graphs(k));
    const double want = static_cast<double>(connected[k - 1]);
    out.push_back(make_report("connected_graph_count", {{"k", k}, {"count", got}, {"expected", want}},
                              std::abs(got - want), 0.0, 0.0));
  }
  for (int k = 2; k <= 8; ++k) {
    const double got = static_cast<double>(spanning_trees(k).size());
    const double want = std::pow(static_cast<double>(k), k - 2);
    out.push_back(make_report("cayley_tree_count", {{"k", k}, {"count", got}, {"expected", want}},
                              std::abs(got - want), 0.0, 0.0));
  }
  double factorial = 1.0;
  for (int k = 1; k <= 7; ++k) {
    if (k > 1) factorial *= (k - 1);
    const EdgeMask complete = static_cast<EdgeMask>((std::uint64_t{1} << pair_count(k)) - 1);
    const double got = ursell_from_overlaps(k, complete);
    const double want = ((k - 1) % 2 ? -1.0 : 1.0) * factorial;
    out.push_back(make_report("complete_graph_ursell", {{"k", k}, {"value", got}, {"expected", want}},
                              std::abs(got - want), 0.0, 0.0));
  }
  return out;
}

std::vector<VerificationReport> prop1_suite(const SuiteOptions& opts, int models) {
  if (opts.t_points < 2) throw DomainError("t_points must be >= 2");
  return gather(static_cast<std::size_t>(models), [&](std::size_t i) {
    auto rng = family_rng(opts.seed, 3, i);
    const int lo = -static_cast<int>(rng() % 3);
    const SpinInterval spins(lo, lo + 1 + static_cast<int>(rng() % 3));
    const auto m = random_explicit_model(rng, 1, 1, spins, 0.4);
    const double delta = constants(m, opts.variant).delta;
    std::vector<double> grid;
    for (int j = 0; j + 1 < opts.t_points; ++j) grid.push_back(delta + (2 * kPi - 2 * delta) * j / (opts.t_points - 1));
    grid.push_back(2 * kPi - delta);
    auto r = check_single_spin_cf(m, grid, opts.variant, opts.check_options());
    r.parameters["model"] = i;
    return std::vector<VerificationReport>{r};
  });
}

std::vector<GibbsModel> lemma_models() {
  const auto nn = [](int d, int radius, int r0, double J, SpinInterval spins, Boundary omega) {
    return GibbsModel(Box(d, radius, r0), spins, Coupling(NearestNeighbor{J}, d), std::move(omega));
  };
  std::vector<GibbsModel> out{
      nn(1, 4, 2, 0.05, SpinInterval(-1, 1), Boundary::constant(1)),
      nn(1, 4, 2, 0.1, SpinInterval(0, 1), Boundary::constant(1)),
      nn(1, 5, 2, 0.2, SpinInterval(-1, 1), Boundary::random(7)),
      nn(1, 6, 2, 0.1, SpinInterval(0, 2), Boundary::constant(2)),
      nn(1, 8, 2, 0.3, SpinInterval(0, 1), Boundary::constant(0)),
      nn(1, 6, 3, 0.1, SpinInterval(-1, 1), Boundary::free()),
      nn(2, 2, 2, 0.05, SpinInterval(-1, 1), Boundary::constant(-1)),
      nn(2, 2, 2, 0.1, SpinInterval(0, 1), Boundary::random(3)),
  };
  // weak couplings: the decimation step comes from the smallest admissible r0
  std::vector<GibbsModel> weak{
      nn(1, 3, 1, 1e-13, SpinInterval(-1, 1), Boundary::constant(1)),
      GibbsModel(Box(1, 4, 1), SpinInterval(0, 1), Coupling(PowerLaw{1e-13, 3.0}, 1), Boundary::random(5)),
      nn(2, 1, 1, 1e-14, SpinInterval(-1, 1), Boundary::constant(1)),
  };
  for (const auto& w : weak) {
    const auto r0 = min_r0(w, 4);
    if (!r0) throw PreconditionError("weak-coupling lemma model violates the decimation condition");
    const Box& b = w.box();
    out.push_back(w.with_box(Box(b.dimension(), b.radius(), *r0)));
  }
  return out;
}

std::vector<VerificationReport> lemma_a_suite(const std::vector<GibbsModel>& models, const SuiteOptions& opts) {
  return gather(models.size(), [&](std::size_t i) {
    auto reps = check_lemma_a(models[i], opts.t_points, opts.check_options());
    for (auto& r : reps) r.parameters["model"] = i;
    return reps;
  });
}

std::vector<VerificationReport> lemma_b_suite(const std::vector<GibbsModel>& models, const SuiteOptions& opts) {
  return gather(models.size(), [&](std::size_t i) {
    auto reps = check_lemma_b(models[i], opts.t_points, opts.variant, opts.check_options());
    for (auto& r : reps) r.parameters["model"] = i;
    return reps;
  });
}

std::vector<VerificationReport> derivative_suite(const SuiteOptions& opts, int systems) {
  return gather(static_cast<std::size_t>(systems), [&](std::size_t i) {
    auto rng = family_rng(opts.seed, 6, i);
    const PolymerSystem ps = random_system(rng, 1, 4, 0.3);
    const double sigma = ps.sigma();
    const double delta = uniform(rng, 0.001, 1.0 / (12.0 * sigma));
    const double t_bound = uniform(rng, 0.0, delta);
    const double t_fd = uniform(rng, 0.1, 3.0);
    const double c = uniform(rng, 0.0, 0.5);
    const double t_dressed = uniform(rng, 0.0, kPi);
    const double h = 1e-3;
    double fd_err = 0.0, r0 = 0.0, r1 = 0.0, r2 = 0.0, rc = 0.0;
    for (Polymer R = 1; R <= ps.all_sites(); ++R) {
      const auto act = [&](double t) { return ps.activity(ActivityParams::plain(t), R); };
      // five-point stencils: truncation O(h^4), rounding O(eps / h^2)
      const cd p2 = act(t_fd + 2 * h), p1 = act(t_fd + h), m0 = act(t_fd), n1 = act(t_fd - h), n2 = act(t_fd - 2 * h);
      const cd d1 = (-p2 + 8.0 * p1 - 8.0 * n1 + n2) / (12.0 * h);
      const cd d2 = (-p2 + 16.0 * p1 - 30.0 * m0 + 16.0 * n1 - n2) / (12.0 * h * h);
      const auto jet = ps.activity_jet(ActivityParams::plain(t_fd), R);
      fd_err = std::max(fd_err, std::abs(d1 - jet.d1) / std::max(std::abs(jet.d1), 1e-4));
      fd_err = std::max(fd_err, std::abs(d2 - jet.d2) / std::max(std::abs(jet.d2), 1e-4));

      const auto b = ps.activity_jet(ActivityParams::plain(t_bound), R);
      const int k = polymer_size(R);
      const double w0 = ps.weight_w0(R, delta);
      r0 = std::max(r0, ratio(std::abs(b.value), w0));
      if (k >= 2) {
        r1 = std::max(r1, ratio(std::abs(b.d1), sigma * k * w0));
        r2 = std::max(r2, ratio(std::abs(b.d2), k * k * sigma * sigma * w0));
        rc = std::max(rc, ratio(std::abs(ps.activity(ActivityParams::with_dressing(t_dressed, c), R)),
                                ps.weight_wc(R, delta, c)));
      } else {
        r1 = std::max(r1, ratio(std::abs(b.d1), sigma));
        r2 = std::max(r2, ratio(std::abs(b.d2), sigma * sigma));
      }
    }
    nlohmann::ordered_json p{{"system", i}, {"sites", ps.size()}, {"delta", delta}};
    std::vector<VerificationReport> out;
    auto q = p;
    q["t"] = t_fd;
    q["step"] = h;
    out.push_back(make_report("activity_derivative_fd", q, fd_err, 1e-6, 0.0));
    q = p;
    q["t"] = t_bound;
    out.push_back(make_report("activity_weight_bound", q, r0, 1.0, 1e-12));
    out.push_back(make_report("activity_first_derivative_bound", q, r1, 1.0, 1e-12));
    out.push_back(make_report("activity_second_derivative_bound", q, r2, 1.0, 1e-12));
    q = p;
    q["t"] = t_dressed;
    q["c"] = c;
    out.push_back(make_report("dressed_activity_weight_bound", q, rc, 1.0, 1e-12));
    return out;
  });
}

std::vector<VerificationReport> tree_graph_suite(const SuiteOptions& opts, int systems) {
  return gather(static_cast<std::size_t>(systems), [&](std::size_t i) {
    auto rng = family_rng(opts.seed, 7, i);
    const PolymerSystem ps = random_system(rng, 2, 5, 0.3);
    const double J_r0 = ps.local().internal_norm();
    std::uint64_t violations = 0, configurations = 0, polymers = 0;
    double min_trees = std::numeric_limits<double>::infinity();
    double min_J = min_trees;
    for (Polymer R = 1; R <= ps.all_sites(); ++R) {
      if (polymer_size(R) < 2) continue;
      const auto tg = tree_graph_bound_check(ps, R, J_r0);
      violations += tg.violations;
      configurations += tg.configurations;
      ++polymers;
      min_trees = std::min(min_trees, tg.min_margin_trees);
      min_J = std::min(min_J, tg.min_margin_J);
    }
    nlohmann::ordered_json p{{"system", i},       {"sites", ps.size()},  {"J_r0", J_r0},
                             {"polymers", polymers}, {"configurations", configurations},
                             {"min_margin_trees", min_trees}, {"min_margin_J", min_J}};
    return std::vector<VerificationReport>{
        make_report("tree_graph_chain", p, static_cast<double>(violations), 0.0, 0.0)};
  });
}

std::vector<VerificationReport> norm_bound_suite() {
  const std::vector<GibbsModel> models{
      GibbsModel(Box(1, 6, 2), SpinInterval(-1, 1), Coupling(PowerLaw{0.05, 3.0}, 1), Boundary::constant(1)),
      GibbsModel(Box(1, 6, 2), SpinInterval(-1, 1, 2), Coupling(PowerLaw{0.05, 3.0}, 1), Boundary::random(11)),
      GibbsModel(Box(1, 6, 2), SpinInterval(0, 1), Coupling(PowerLaw{0.02, 3.5}, 1), Boundary::constant(0)),
      GibbsModel(Box(1, 8, 2), SpinInterval(-1, 1), Coupling(PowerLaw{0.1, 4.0}, 1), Boundary::constant(-1)),
  };
  return gather(models.size(), [&](std::size_t i) {
    const auto& m = models[i];
    const auto ps = PolymerSystem::decimated(m, m.boundary());
    const auto k = constants(m);
    std::vector<VerificationReport> out;
    for (int size = 2; size <= 3; ++size) {
      const double norm = ps.weight_norm(size, WeightKind::w1, k.delta, 0.0);
      const double bound = norm_bound_bo2(size, k.delta, k.sigma, k.J_r0, 1.0, Bo2Form::tree_sum);
      out.push_back(make_report("w1_norm_bound", {{"model", i}, {"k", size}, {"J_r0", k.J_r0}, {"delta", k.delta}},
                                norm, bound, 1e-12 * bound));
    }
    return out;
  });
}

std::vector<VerificationReport> cluster_suite(const SuiteOptions& opts) {
  const std::vector<GibbsModel> models{
      GibbsModel(Box(1, 1), SpinInterval(-1, 1), Coupling(NearestNeighbor{0.01}, 1), Boundary::constant(1)),
      GibbsModel(Box(1, 2), SpinInterval(0, 1), Coupling(NearestNeighbor{0.005}, 1), Boundary::random(5)),
      GibbsModel(Box(1, 2), SpinInterval(-1, 1, 2), Coupling(NearestNeighbor{0.01}, 1), Boundary::constant(-1)),
      GibbsModel(Box(1, 4, 2), SpinInterval(-1, 1), Coupling(PowerLaw{0.05, 3.0}, 1), Boundary::constant(1)),
  };
  const double a = std::log(2.0);
  const int K = 4;
  return gather(models.size(), [&](std::size_t i) {
    const auto& m = models[i];
    const auto ps = PolymerSystem::decimated(m, m.boundary(), opts.enumeration);
    const auto k = constants(m, opts.variant);
    const int N = static_cast<int>(ps.size());
    std::map<int, double> norms;
    for (int size = 1; size <= std::min(N, kMaxPolymerSize); ++size)
      norms[size] = ps.weight_norm(size, WeightKind::w1, k.delta, 0.0);
    const auto conv = N <= kMaxPolymerSize ? convergence_check(norms, a, 0.0) : convergence_check(norms, a);
    std::vector<VerificationReport> out;
    nlohmann::ordered_json p{{"model", i}, {"sites", N}, {"a", a}, {"delta", k.delta}};
    out.push_back(make_report("cluster_convergence", p, conv.lhs, conv.rhs, 1e-12));
    if (!conv.satisfied) return out;
    for (double frac : {0.25, 0.5, 1.0}) {
      const double t = frac * k.delta;
      const auto params = ActivityParams::plain(t);
      const auto series = truncated_log_partition(ps, params, K);
      const cd exact = ps.continuous_log(params);
      auto q = p;
      q["t"] = t;
      q["K"] = K;
      out.push_back(make_report("cluster_series_tail", q, std::abs(series.partial_sums.back() - exact),
                                series.dominating_tail, 1e-12));
      const auto resummed = absolute_log_resummed(ps, params);
      out.push_back(make_report("cluster_absolute_log", q,
                                resummed ? *resummed : std::numeric_limits<double>::max(), a * N, 1e-12));
    }
    return out;
  });
}

std::vector<VerificationReport> integral_reports(const GibbsModel& m, std::optional<double> A,
                                                 const SuiteOptions& opts) {
  const auto k = constants(m, opts.variant);
  if (!A) A = 0.5 * k.delta * std::sqrt(statistics(m.local_system(RegionKind::full), opts.enumeration).variance_S);
  const auto d = integral_decomposition(m, *A, std::nullopt, opts.variant, opts.enumeration);
  bool lemma_ok = k.condifina_ok;
  if (lemma_ok) {
    lemma_ok = all_of_pass(check_lemma_a(m, opts.t_points, opts.check_options())) &&
               all_of_pass(check_lemma_b(m, opts.t_points, opts.variant, opts.check_options()));
  }
  nlohmann::ordered_json p{{"A", *A},       {"delta", d.delta}, {"variance", d.variance},
                           {"I1", d.I1},    {"I2", d.I2},       {"I3", d.I3},
                           {"I4", d.I4},    {"quadrature_error", d.quadrature_error},
                           {"lemma_ok", lemma_ok}};
  return {make_report("integral_decomposition", p, d.G_n, d.sum(), 1e-8),
          make_report("integral_middle_bound", p, d.I2, d.bound_I2, 1e-8, lemma_ok),
          make_report("integral_tail_bound", p, d.I3, d.bound_I3, 1e-8, lemma_ok)};
}

std::vector<VerificationReport> integral_suite(const std::vector<GibbsModel>& models, const SuiteOptions& opts) {
  return gather(models.size(), [&](std::size_t i) {
    const auto full = models[i].local_system(RegionKind::full);
    if (std::pow(static_cast<double>(full.spins.card()), static_cast<double>(full.size())) >
        static_cast<double>(opts.enumeration.budget))
      return std::vector<VerificationReport>{};
    auto out = integral_reports(models[i], std::nullopt, opts);
    for (auto& r : out) r.parameters["model"] = i;
    return out;
  });
}

std::vector<VerificationReport> exact_trend_suite(const std::vector<GibbsModel>& models, bool strict,
                                                  const EnumerationOptions& enumeration) {
  const auto points = lclt_trend(models, enumeration);
  std::vector<VerificationReport> out;
  std::vector<double> gaps;
  std::vector<std::size_t> sites;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    const double prev = i ? points[i - 1].gap : pt.gap;
    out.push_back(make_report("lclt_gap_point",
                              {{"sites", pt.site_count}, {"variance_density", pt.variance_density},
                               {"method", pt.method}, {"strict", strict}},
                              pt.gap, prev, 0.0, strict));
    gaps.push_back(pt.gap);
    sites.push_back(pt.site_count);
  }
  if (!strict && points.size() >= 2) {
    int rises = 0;
    for (std::size_t i = 1; i < gaps.size(); ++i) rises += gaps[i] >= gaps[i - 1];
    const double lhs = decreasing_trend(gaps, 1) ? rises : static_cast<double>(rises + gaps.size());
    out.push_back(make_report("lclt_gap_trend", {{"sites", sites}, {"gaps", gaps}}, lhs, 1.0, 0.0));
    const double a = points[points.size() - 2].variance_density;
    const double b = points.back().variance_density;
    const double unit = 0.5 * std::pow(10.0, std::floor(std::log10(std::abs(b))) - 2);
    out.push_back(make_report("variance_density_stability",
                              {{"sites", {sites[sites.size() - 2], sites.back()}}, {"previous", a}, {"last", b}},
                              std::abs(a - b), unit, 0.0));
  }
  return out;
}

VerificationReport mc_trend_report(const GibbsModel& small, const GibbsModel& large, const ChainSpec& spec) {
  const auto g1 = sample_pmf_gap(small, spec);
  const auto g2 = sample_pmf_gap(large, spec);
  const double combined = std::hypot(g1.gap.std_error, g2.gap.std_error);
  nlohmann::ordered_json p{{"sites", {small.box().site_count(), large.box().site_count()}},
                           {"gaps", {g1.gap.value, g2.gap.value}},
                           {"std_errors", {g1.gap.std_error, g2.gap.std_error}},
                           {"samples", spec.samples},
                           {"chains", spec.chains},
                           {"seed", spec.seed}};
  return make_report("mc_gap_trend", p, 2.0 * combined, g1.gap.value - g2.gap.value, 0.0);
}

std::vector<VerificationReport> mc_agreement_suite(const SuiteOptions& opts, int trials) {
  std::vector<VerificationReport> out;
  int agree = 0;
  for (int i = 0; i < trials; ++i) {
    auto rng = family_rng(opts.seed, 11, static_cast<std::uint64_t>(i));
    const SpinInterval spins = (i % 2) ? SpinInterval(-1, 1, 2) : SpinInterval(-1, 1);
    const auto m = random_explicit_model(rng, 1 + i % 2, 1, spins, 0.3);
    ChainSpec s;
    s.samples = 6000;
    s.burn_in = 200;
    s.seed = rng();
    const auto mc = sample_statistics(m, s);
    const auto ex = statistics(m.local_system(RegionKind::full), opts.enumeration);
    const double z_mean = std::abs(mc.mean.value - ex.mean_S) / mc.mean.std_error;
    const double z_var = std::abs(mc.variance.value - ex.variance_S) / mc.variance.std_error;
    const double z = std::max(z_mean, z_var);
    agree += z <= 3.0;
    out.push_back(make_report("mc_exact_agreement",
                              {{"trial", i},
                               {"mean", mc.mean.value},
                               {"mean_std_error", mc.mean.std_error},
                               {"exact_mean", ex.mean_S},
                               {"variance", mc.variance.value},
                               {"variance_std_error", mc.variance.std_error},
                               {"exact_variance", ex.variance_S}},
                              z, 3.0, 0.0, false));
  }
  out.push_back(make_report("mc_agreement_rate", {{"trials", trials}, {"agree", agree}}, 0.95,
                            static_cast<double>(agree) / trials, 0.0));
  return out;
}

GibbsModel trend_chain(int sites, double J) {
  if (sites < 1 || sites % 2 == 0) throw DomainError("trend chains have an odd number of sites");
  return GibbsModel(Box(1, (sites - 1) / 2), SpinInterval(0, 1), Coupling(NearestNeighbor{J}, 1), Boundary::free());
}

}  // namespace lclt
