#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lclt/combinatorics.hpp"
#include "lclt/errors.hpp"
#include "lclt/exact.hpp"
#include "lclt/numeric.hpp"
#include "lclt/polymer.hpp"
#include "support.hpp"

using namespace lclt;
using lclt::testing::chain;
using lclt::testing::ising;
using cd = std::complex<double>;

namespace {

LocalSystem free_pair(double J, double field = 0.0) {
  LocalSystem sys;
  sys.sites = {{0}, {1}};
  sys.couplings = {0.0, J, J, 0.0};
  sys.field = {field, field};
  sys.spins = ising();
  return sys;
}

/// Literal activity: spin configurations x connected graphs x subsets S.
cd activity_oracle(const PolymerSystem& ps, double t, Polymer R) {
  const auto idx = polymer_sites(R);
  const int k = static_cast<int>(idx.size());
  const auto& spins = ps.local().spins;
  cd total = 0.0;
  std::vector<int> digit(k, 0);
  while (true) {
    std::vector<int> s(k);
    double prob = 1.0;
    for (int a = 0; a < k; ++a) {
      s[a] = spins.value(digit[a]);
      prob *= ps.single_site(idx[a])[digit[a]];
    }
    if (k == 1) {
      total += (std::polar(1.0, t * s[0]) - 1.0) * prob;
    } else {
      double graphs = 0.0;
      for (const Graph& g : connected_graphs(k)) {
        double prod = 1.0;
        for (auto [a, b] : g.edge_list()) prod *= std::expm1(ps.local().coupling(idx[a], idx[b]) * s[a] * s[b]);
        graphs += prod;
      }
      cd subsets = 0.0;
      for (int S = 0; S < (1 << k); ++S) {
        cd prod = 1.0;
        for (int a = 0; a < k; ++a)
          if (S >> a & 1) prod *= std::polar(1.0, t * s[a]) - 1.0;
        subsets += prod;
      }
      total += graphs * subsets * prob;
    }
    int i = k - 1;
    while (i >= 0 && digit[i] == spins.card() - 1) digit[i--] = 0;
    if (i < 0) break;
    ++digit[i];
  }
  return total;
}

/// Literal dressed partition function: every graph on the region, including
/// disconnected ones, with e^{c|S_g|} on the covered vertex set.
cd dressed_oracle(const PolymerSystem& ps, double t, double c) {
  const int n = static_cast<int>(ps.size());
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  const auto& spins = ps.local().spins;
  cd total = 0.0;
  for (std::uint64_t g = 0; g < (std::uint64_t{1} << pairs.size()); ++g) {
    std::uint64_t cover = 0;
    for (std::size_t e = 0; e < pairs.size(); ++e)
      if (g >> e & 1) cover |= (std::uint64_t{1} << pairs[e].first) | (std::uint64_t{1} << pairs[e].second);
    const auto idx = polymer_sites(cover);
    const int k = static_cast<int>(idx.size());
    std::vector<int> pos(n, -1);
    for (int a = 0; a < k; ++a) pos[idx[a]] = a;
    std::vector<int> digit(k, 0);
    cd inner = 0.0;
    while (true) {
      cd w = 1.0;
      for (int a = 0; a < k; ++a) w *= ps.single_site(idx[a])[digit[a]] * std::polar(1.0, t * spins.value(digit[a]));
      for (std::size_t e = 0; e < pairs.size(); ++e) {
        if (!(g >> e & 1)) continue;
        const auto [x, y] = pairs[e];
        w *= std::expm1(ps.local().coupling(x, y) * spins.value(digit[pos[x]]) * spins.value(digit[pos[y]]));
      }
      inner += w;
      int i = k - 1;
      while (i >= 0 && digit[i] == spins.card() - 1) digit[i--] = 0;
      if (i < 0) break;
      ++digit[i];
    }
    total += std::exp(c * k) * inner;
  }
  return total;
}

/// Order-k terms of log of the hard-core gas partition function, from the
/// power series in a scaling parameter lambda of activities.
std::vector<cd> log_series_oracle(int n, const std::vector<cd>& act, int K) {
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<std::vector<cd>> P(full + 1, std::vector<cd>(K + 1, 0.0));
  P[0][0] = 1.0;
  for (std::size_t W = 1; W <= full; ++W) {
    const std::size_t low = W & (~W + 1);
    P[W] = P[W & ~low];
    const std::size_t others = W & ~low;
    for (std::size_t sub = others;; sub = (sub - 1) & others) {
      const std::size_t R = sub | low;
      for (int j = 0; j < K; ++j) P[W][j + 1] += act[R] * P[W & ~R][j];
      if (sub == 0) break;
    }
  }
  const auto& p = P[full];
  std::vector<cd> l(K + 1, 0.0);
  for (int k = 1; k <= K; ++k) {
    cd v = static_cast<double>(k) * p[k];
    for (int j = 1; j < k; ++j) v -= static_cast<double>(j) * l[j] * p[k - j];
    l[k] = v / static_cast<double>(k);
  }
  return {l.begin() + 1, l.end()};
}

PolymerSystem random_system(std::mt19937_64& rng, int max_sites, double max_J) {
  const int dim = 1 + static_cast<int>(rng() % 2);
  const SpinInterval spins = (rng() % 2) ? ising() : SpinInterval(-1, 1);
  const auto m = lclt::testing::random_model(rng, dim, 1, spins, max_J);
  PolymerSystem full(m.local_system(RegionKind::full));
  // keep at most max_sites sites
  const int keep = std::min<int>(max_sites, static_cast<int>(full.size()));
  return full.restrict_to((Polymer{1} << keep) - 1);
}

}  // namespace

TEST_CASE("activity examples") {
  PolymerSystem ps(free_pair(0.1));
  for (double t : {0.0, 0.4, 2.0}) {
    CHECK(std::abs(ps.activity(ActivityParams::plain(t), 0b01) - cd(std::cos(t) - 1.0, 0.0)) < 1e-15);
  }
  // cosh J - 1 at t = 0
  CHECK(std::abs(ps.activity(ActivityParams::plain(0.0), 0b11) - (std::cosh(0.1) - 1.0)) < 1e-15);
  PolymerSystem zero(free_pair(0.0));
  CHECK(std::abs(zero.activity(ActivityParams::plain(0.7), 0b11)) == 0.0);
  CHECK_THROWS_AS(ps.activity(ActivityParams::with_dressing(0.1, 0.2), 0b01), DomainError);
  ActivityParams bad = ActivityParams::plain(0.1);
  bad.c = 0.5;
  CHECK_THROWS_AS(ps.activity(bad, 0b11), DomainError);
}

TEST_CASE("activity matches the literal triple sum") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const PolymerSystem ps = random_system(rng, 5, 0.3);
    const double t = std::uniform_real_distribution<double>(0.0, kPi)(rng);
    for (Polymer R = 1; R <= ps.all_sites(); ++R) {
      const cd a = ps.activity(ActivityParams::plain(t), R);
      CHECK(std::abs(a - activity_oracle(ps, t, R)) < 1e-13);
    }
  }
}

TEST_CASE("polymer partition function: examples") {
  PolymerSystem ps(free_pair(0.0));
  for (double t : {0.0, 0.3, 1.1}) {
    const double expect = std::cos(t) * std::cos(t);
    CHECK(std::abs(ps.partition(ActivityParams::plain(t), PartitionMode::direct) - expect) < 1e-15);
    CHECK(std::abs(ps.partition(ActivityParams::plain(t), PartitionMode::polymer_sum) - expect) < 1e-15);
  }
  // at t = 0 only |R| >= 2 polymers survive
  PolymerSystem coupled(free_pair(0.2, 0.05));
  double z0 = 0.0;
  const auto& p = coupled.single_site(0);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) z0 += std::exp(0.2 * (2 * a - 1) * (2 * b - 1)) * p[a] * p[b];
  CHECK(std::abs(coupled.partition(ActivityParams::plain(0.0), PartitionMode::polymer_sum) - z0) < 1e-14);
}

TEST_CASE("master identity on randomized regions") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const PolymerSystem ps = random_system(rng, 5, 0.3);
    for (int j = 0; j < 5; ++j) {
      const double t = std::uniform_real_distribution<double>(0.0, kPi)(rng);
      const cd direct = ps.partition(ActivityParams::plain(t), PartitionMode::direct);
      const cd poly = ps.partition(ActivityParams::plain(t), PartitionMode::polymer_sum);
      CHECK(std::abs(direct - poly) <= 1e-12 * std::abs(direct));
    }
  }
}

TEST_CASE("dressed partition function") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const PolymerSystem ps = random_system(rng, 4, 0.3);
    const double t = std::uniform_real_distribution<double>(0.0, kPi)(rng);
    const double c = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    const auto params = ActivityParams::with_dressing(t, c);
    const cd oracle = dressed_oracle(ps, t, c);
    CHECK(std::abs(ps.partition(params, PartitionMode::direct) - oracle) < 1e-12 * std::abs(oracle));
    CHECK(std::abs(ps.partition(params, PartitionMode::polymer_sum) - oracle) < 1e-12 * std::abs(oracle));
    // single-site activities vanish at t = 0, so c = 0 dressing changes nothing
    const cd plain0 = ps.partition(ActivityParams::plain(0.0), PartitionMode::direct);
    const cd dressed0 = ps.partition(ActivityParams::with_dressing(0.0, 0.0), PartitionMode::direct);
    CHECK(std::abs(plain0 - dressed0) < 1e-13);
  }
}

TEST_CASE("characteristic function ratio") {
  PolymerSystem ps(free_pair(0.0, 0.3));
  CHECK(std::abs(ps.char_fn_ratio(0.0) - 1.0) < 1e-15);
  const auto& p = ps.single_site(0);
  const cd single = p[0] * std::polar(1.0, -0.9) + p[1] * std::polar(1.0, 0.9);
  CHECK(std::abs(ps.char_fn_ratio(0.9) - single * single) < 1e-14);

  // decimated chain with long-range coupling against the exact engine
  GibbsModel m(Box(1, 3, 2), SpinInterval(-1, 1), Coupling(PowerLaw{0.1, 3.0}, 1), Boundary::constant(1));
  const auto dec = PolymerSystem::decimated(m, m.boundary());
  CHECK(dec.size() == 3);
  const auto exact = char_fn(m.local_system(RegionKind::decimated), 0.2);
  CHECK(std::abs(dec.char_fn_ratio(0.2) - exact) < 1e-10);

  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rm = lclt::testing::random_model(rng, 1, 2, SpinInterval(-1, 1), 0.3, 1);
    const PolymerSystem rs(rm.local_system(RegionKind::full));
    const double t = std::uniform_real_distribution<double>(0.0, kPi)(rng);
    CHECK(std::abs(rs.char_fn_ratio(t) - char_fn(rm.local_system(RegionKind::full), t)) < 1e-10);
  }
}

TEST_CASE("weights") {
  PolymerSystem ps(free_pair(0.1));
  CHECK(ps.weight_w0(0b01, 0.04) == doctest::Approx(0.04));
  // (1.04)^2 sum_s p p |e^{J s s} - 1|
  const double expect = 1.0816 * (std::expm1(0.1) - std::expm1(-0.1)) / 2.0;
  CHECK(ps.weight_w0(0b11, 0.04) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(ps.weight_w0(0b11, 0.04) == doctest::Approx(0.108341).epsilon(1e-5));
  CHECK(ps.weight_w1(0b11, 0.04) == doctest::Approx(expect * std::exp(2.0)).epsilon(1e-14));
  CHECK(ps.weight_wc(0b11, 0.04, 0.3) == doctest::Approx(expect * std::exp(0.6)).epsilon(1e-14));
  PolymerSystem zero(free_pair(0.0));
  CHECK(zero.weight_w0(0b11, 0.04) == 0.0);
}

TEST_CASE("weight norms") {
  const auto m = chain(3, 0.1, ising());
  const auto ps = PolymerSystem::decimated(m, m.boundary());
  CHECK(ps.weight_norm(1, WeightKind::w1, 0.04, 0.0) == doctest::Approx(0.04 * std::exp(1.0)));
  const Polymer pair = ps.polymer({{0}, {1}});
  CHECK(ps.weight_norm(2, WeightKind::w0, 0.04, 0.0) == doctest::Approx(2 * ps.weight_w0(pair, 0.04)).epsilon(1e-14));
  const auto z = chain(3, 0.0, ising());
  CHECK(PolymerSystem::decimated(z, z.boundary()).weight_norm(2, WeightKind::w0, 0.04, 0.0) == 0.0);
  CHECK(ps.weight_norm(9, WeightKind::w0, 0.04, 0.0) == 0.0);
}

TEST_CASE("activity bounds by weights") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    const PolymerSystem ps = random_system(rng, 4, 0.3);
    const double sigma = ps.sigma();
    const double delta = std::uniform_real_distribution<double>(0.001, 1.0 / (12 * sigma))(rng);
    const double t = std::uniform_real_distribution<double>(0.0, delta)(rng);
    const double c = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    for (Polymer R = 1; R <= ps.all_sites(); ++R) {
      const auto jet = ps.activity_jet(ActivityParams::plain(t), R);
      const double w0 = ps.weight_w0(R, delta);
      const int k = polymer_size(R);
      CHECK(std::abs(jet.value) <= w0 * (1 + 1e-12));
      if (k >= 2) {
        CHECK(std::abs(jet.d1) <= sigma * k * w0 * (1 + 1e-12));
        CHECK(std::abs(jet.d2) <= k * k * sigma * sigma * w0 * (1 + 1e-12));
        const double tt = std::uniform_real_distribution<double>(0.0, kPi)(rng);
        CHECK(std::abs(ps.activity(ActivityParams::with_dressing(tt, c), R)) <= ps.weight_wc(R, delta, c) * (1 + 1e-12));
      } else {
        CHECK(std::abs(jet.value) <= delta * sigma);
        CHECK(std::abs(jet.d1) <= sigma);
        CHECK(std::abs(jet.d2) <= sigma * sigma);
      }
    }
  }
}

TEST_CASE("analytic derivatives against central differences") {
  std::mt19937_64 rng(71);
  const double h = 1e-4;
  for (int trial = 0; trial < 30; ++trial) {
    const PolymerSystem ps = random_system(rng, 3, 0.3);
    const double t = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
    for (Polymer R = 1; R <= ps.all_sites(); ++R) {
      const auto jet = ps.activity_jet(ActivityParams::plain(t), R);
      const cd up = ps.activity(ActivityParams::plain(t + h), R);
      const cd mid = ps.activity(ActivityParams::plain(t), R);
      const cd dn = ps.activity(ActivityParams::plain(t - h), R);
      const cd d1 = (up - dn) / (2 * h);
      const cd d2 = (up - 2.0 * mid + dn) / (h * h);
      if (std::abs(jet.d1) > 1e-6) CHECK(std::abs(d1 - jet.d1) <= 1e-6 * std::abs(jet.d1));
      if (std::abs(jet.d2) > 1e-3) CHECK(std::abs(d2 - jet.d2) <= 1e-6 * std::abs(jet.d2) + 1e-8);
    }
  }
}

TEST_CASE("convergence check") {
  std::map<int, double> zero{{1, 0.0}, {2, 0.0}};
  auto r = convergence_check(zero, std::log(2.0), 0.0);
  CHECK(r.satisfied);
  CHECK(r.lhs == 0.0);
  CHECK(r.rhs == doctest::Approx(1.0));

  std::map<int, double> quarter;
  for (int k = 1; k <= 4; ++k) quarter[k] = std::pow(0.25, k);
  r = convergence_check(quarter, std::log(2.0), 0.25);
  CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.satisfied);
  CHECK(r.tail_certified);

  std::map<int, double> big;
  for (int k = 1; k <= 4; ++k) big[k] = std::pow(0.6, k);
  r = convergence_check(big, std::log(2.0), 0.6);
  CHECK_FALSE(r.satisfied);
  CHECK(std::isinf(r.lhs));
  CHECK_FALSE(convergence_check(big, std::log(2.0)).tail_certified);
}

TEST_CASE("cluster series against the generating-function oracle") {
  std::mt19937_64 rng(81);
  for (int trial = 0; trial < 8; ++trial) {
    const PolymerSystem ps = random_system(rng, 4, 0.3);
    const double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (bool absolute : {false, true}) {
      const auto params = ActivityParams::plain(t);
      const auto series = truncated_log_partition(ps, params, 5, absolute);
      std::vector<cd> act(std::size_t{1} << ps.size(), 0.0);
      for (Polymer R = 1; R <= ps.all_sites(); ++R) {
        const cd a = ps.activity(params, R);
        act[R] = absolute ? -std::abs(a) : a;
      }
      auto oracle = log_series_oracle(static_cast<int>(ps.size()), act, 5);
      for (int k = 0; k < 5; ++k) {
        const cd expect = absolute ? -oracle[k] : oracle[k];
        CHECK(std::abs(series.order_terms[k] - expect) <= 1e-12 * (1.0 + std::abs(expect)));
      }
    }
  }
}

TEST_CASE("cluster series for uncoupled spins is the logarithmic series") {
  const auto m = chain(1, 0.0, SpinInterval(0, 1));
  const auto ps = PolymerSystem::decimated(m, m.boundary());
  const double t = 0.5;
  const auto series = truncated_log_partition(ps, ActivityParams::plain(t), 6);
  const cd xi = ps.activity(ActivityParams::plain(t), 0b001);
  const cd exact = 3.0 * std::log(1.0 + xi);
  const double bound = 3.0 * std::pow(std::abs(xi), 7) / (1 - std::abs(xi));
  CHECK(std::abs(series.partial_sums.back() - exact) <= bound);
  CHECK(std::abs(series.partial_sums.back() - exact) <= series.dominating_tail);

  // K = 1 at t = 0 keeps only |R| >= 2 activities
  const auto c = chain(1, 0.1, ising());
  const auto cs = PolymerSystem::decimated(c, c.boundary());
  const auto one = truncated_log_partition(cs, ActivityParams::plain(0.0), 1);
  cd sum = 0.0;
  for (Polymer R = 1; R <= cs.all_sites(); ++R)
    if (polymer_size(R) >= 2) sum += cs.activity(ActivityParams::plain(0.0), R);
  CHECK(std::abs(one.partial_sums[0] - sum) < 1e-15);
}

TEST_CASE("cluster series converges to the continuous-branch log") {
  const auto m = chain(1, 0.1, SpinInterval(-1, 1), Boundary::constant(1));
  const auto ps = PolymerSystem::decimated(m, m.boundary());
  const auto params = ActivityParams::plain(0.2);
  const cd exact = ps.continuous_log(params);
  const auto series = truncated_log_partition(ps, params, 4);
  CHECK(std::isfinite(series.dominating_tail));
  CHECK(std::abs(series.partial_sums.back() - exact) <= series.dominating_tail);
  CHECK(std::abs(series.partial_sums.back() - exact) < std::abs(series.partial_sums.front() - exact));
  const auto resummed = absolute_log_resummed(ps, params);
  REQUIRE(resummed.has_value());
  const auto abs_series = truncated_log_partition(ps, params, 4, true);
  CHECK(abs_series.partial_sums.back().real() <= *resummed + 1e-15);
  CHECK(*resummed - abs_series.partial_sums.back().real() <= abs_series.dominating_tail);
}

TEST_CASE("continuous log follows the branch") {
  // four free {0,1} spins: the phase winds past pi before t = 3
  const auto m = chain(3, 0.0, SpinInterval(0, 1));
  const auto ps = PolymerSystem::decimated(m, m.boundary()).restrict_to(0b1111);
  const double t = 3.0;
  const cd l = ps.continuous_log(ActivityParams::plain(t));
  // each site contributes log((1 + e^{it})/2) = log cos(t/2) + i t/2
  CHECK(std::abs(l - 4.0 * cd(std::log(std::cos(t / 2)), t / 2)) < 1e-12);
}

TEST_CASE("tree-graph inequality chain") {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 20; ++trial) {
    const PolymerSystem ps = random_system(rng, 5, 0.3);
    const double J_r0 = ps.local().internal_norm();
    for (Polymer R = 1; R <= ps.all_sites(); ++R) {
      const auto st = stability_check(ps, R, J_r0);
      CHECK(st.holds);
      const auto r = tree_graph_bound_check(ps, R, J_r0);
      CHECK(r.violations == 0);
      CHECK(r.min_margin_trees >= -1e-12);
    }
  }
  PolymerSystem zero(free_pair(0.0));
  const auto z = tree_graph_bound_check(zero, 0b11, 0.0);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs_trees == 0.0);
  CHECK(z.rhs_J == 0.0);
  PolymerSystem one(free_pair(0.1));
  const auto e = tree_graph_bound_check(one, 0b11, 0.1);
  // aligned spins saturate the first inequality
  CHECK(e.min_margin_trees == doctest::Approx(0.0));
  CHECK(e.lhs == doctest::Approx(std::expm1(0.1)));
  CHECK(e.rhs_J == doctest::Approx(std::exp(0.1) * 0.1));
}

TEST_CASE("norm bound forms") {
  CHECK(norm_bound_bo2(3, 0.04, 1, 0.0, 1.0, Bo2Form::majorized) == 0.0);
  const double J = 0.01;
  const double maj = norm_bound_bo2(2, 0.04, 1, J, 1.0, Bo2Form::majorized);
  CHECK(maj == doctest::Approx(std::pow(2 * std::exp(2.0) * std::exp(J / 2) * std::sqrt(J), 2)));
  for (int k = 2; k <= 8; ++k) {
    const double tree = norm_bound_bo2(k, 0.04, 1, J, 1.0, Bo2Form::tree_sum);
    const double fac = norm_bound_bo2(k, 0.04, 1, J, 1.0, Bo2Form::factored);
    CHECK(tree <= fac);
    CHECK(fac <= norm_bound_bo2(k, 0.04, 1, J, 1.0, Bo2Form::majorized));
  }
  CHECK_THROWS_AS(norm_bound_bo2(1, 0.04, 1, J, 1.0, Bo2Form::majorized), DomainError);

  // enumerated w1 norms of a decimated power-law chain sit below the bound
  GibbsModel m(Box(1, 6, 2), SpinInterval(-1, 1), Coupling(PowerLaw{0.05, 3.0}, 1), Boundary::constant(1));
  const auto ps = PolymerSystem::decimated(m, m.boundary());
  const double J_r0 = m.interaction_norm(2);
  const double delta = 0.01;
  for (int k = 2; k <= 3; ++k) {
    CHECK(ps.weight_norm(k, WeightKind::w1, delta, 0.0) <= norm_bound_bo2(k, delta, 1, J_r0, 1.0, Bo2Form::tree_sum));
  }
}

TEST_CASE("cluster CSV") {
  ClusterSeriesResult r;
  r.truncation_order = 2;
  r.partial_sums = {cd(0.5, 0.25), cd(0.75, 0.0)};
  r.dominating_tail = 0.125;
  std::ostringstream out;
  write_cluster_series_csv(out, r);
  CHECK(out.str() == "k,partial_re,partial_im,tail\n1,0.5,0.25,0.125\n2,0.75,0,0.125\n");
}

TEST_CASE("capacity limits") {
  const auto m = chain(5, 0.1, ising());
  const auto ps = PolymerSystem::decimated(m, m.boundary());
  CHECK_THROWS_AS(ps.partition(ActivityParams::plain(0.1), PartitionMode::polymer_sum), CapacityError);
  CHECK_THROWS_AS(truncated_log_partition(ps, ActivityParams::plain(0.1), 2), CapacityError);
  CHECK_THROWS_AS(ps.spectrum(ps.all_sites()), CapacityError);
}
