#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "lclt/errors.hpp"
#include "lclt/exact.hpp"
#include "lclt/montecarlo.hpp"
#include "lclt/random.hpp"
#include "support.hpp"

using namespace lclt;
using lclt::testing::chain;
using lclt::testing::ising;
using lclt::testing::square;

TEST_CASE("Philox known answers") {
  // reference vectors of the Philox-4x32-10 generator
  CHECK(Philox4x32(0)({0, 0, 0, 0}) == Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32(0xffffffffffffffffull)({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}) ==
        Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32(0x299f31d0a4093822ull)({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}) ==
        Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
  const auto u = Philox4x32(3).uniforms(1, 2, 3, 4);
  CHECK(u[0] >= 0.0);
  CHECK(u[0] < 1.0);
  CHECK(u[1] < 1.0);
}

TEST_CASE("chain spec validation") {
  ChainSpec s;
  s.samples = 99;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.samples = 100;
  s.chains = 1;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("independent fair spins") {
  const auto m = chain(3, 0.0, ising());
  REQUIRE(m.box().site_count() == 7);
  ChainSpec s;
  s.samples = 20000;
  s.burn_in = 100;
  s.seed = 11;
  // 8 sites: an explicit region would do too; a radius-3 box plus a decoupled site
  std::vector<std::tuple<Site, Site, double>> none;
  GibbsModel eight(Box(1, 4), ising(), Coupling(ExplicitPairs{none}, 1), Boundary::free());
  LocalSystem sys = eight.local_system(RegionKind::full);
  sys.sites.pop_back();
  sys.field.pop_back();
  sys.couplings.assign(64, 0.0);
  const auto st = sample_statistics(sys, s);
  CHECK(st.site_count == 8);
  CHECK(std::abs(st.mean.value) <= 3 * st.mean.std_error);
  CHECK(std::abs(st.variance.value - 8.0) <= 3 * st.variance.std_error);
  CHECK(st.mean.n_effective <= 4.0 * 20000);
}

TEST_CASE("square lattice against the exact engine") {
  const auto m = square(1, 0.1, ising());
  ChainSpec s;
  s.samples = 40000;
  s.seed = 5;
  const auto mc = sample_statistics(m, s);
  const auto ex = statistics(m.local_system(RegionKind::full));
  CHECK(std::abs(mc.mean.value - ex.mean_S) <= 3 * mc.mean.std_error);
  CHECK(std::abs(mc.variance.value - ex.variance_S) <= 3 * mc.variance.std_error);
}

TEST_CASE("fixed seed reproduces bit for bit") {
  const auto m = chain(4, 0.2, SpinInterval(-1, 1), Boundary::constant(1));
  ChainSpec s;
  s.samples = 500;
  s.seed = 99;
  const auto a = sample_sums(m.local_system(RegionKind::full), s);
  const auto b = sample_sums(m.local_system(RegionKind::full), s);
  CHECK(a == b);
  s.seed = 100;
  CHECK(a != sample_sums(m.local_system(RegionKind::full), s));
  const auto x = sample_statistics(m, s);
  const auto y = sample_statistics(m, s);
  CHECK(x.mean.value == y.mean.value);
  CHECK(x.variance.std_error == y.variance.std_error);
}

TEST_CASE("two-site chain is stationary and reversible") {
  LocalSystem sys;
  sys.sites = {{0}, {1}};
  sys.couplings = {0.0, 0.4, 0.4, 0.0};
  sys.field = {0.3, -0.2};
  sys.spins = SpinInterval(-1, 1);
  const auto exact = gibbs_probabilities(sys);  // index 3 a + b
  MetropolisChain chain2(sys, 21, 0);
  auto state = [&] { return 3 * (chain2.spins()[0] + 1) + (chain2.spins()[1] + 1); };
  const std::uint64_t sweeps = 300000;
  std::map<std::pair<int, int>, std::uint64_t> moves;
  std::vector<std::vector<int>> visits(1);
  for (std::uint64_t k = 1; k <= sweeps; ++k) {
    for (std::size_t site = 0; site < 2; ++site) {
      const int before = state();
      chain2.update(site, k);
      const int after = state();
      if (before != after) ++moves[{before, after}];
    }
    visits[0].push_back(state());
  }
  for (int a = 0; a < 9; ++a) {
    const auto e = batch_means(visits, [a](int s) { return s == a ? 1.0 : 0.0; });
    CHECK(std::abs(e.value - exact[a]) <= 3 * e.std_error);
    for (int b = a + 1; b < 9; ++b) {
      const double nab = static_cast<double>(moves[{a, b}]);
      const double nba = static_cast<double>(moves[{b, a}]);
      CHECK(std::abs(nab - nba) <= 3 * std::sqrt(nab + nba) + 1);
    }
  }
}

TEST_CASE("randomized agreement with exact statistics") {
  std::mt19937_64 rng(123);
  int agree = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const SpinInterval spins = (trial % 2) ? ising() : SpinInterval(-1, 1);
    const auto m = lclt::testing::random_model(rng, 1 + trial % 2, 1, spins, 0.3);
    ChainSpec s;
    s.samples = 6000;
    s.burn_in = 200;
    s.seed = 1000 + trial;
    const auto mc = sample_statistics(m, s);
    const auto ex = statistics(m.local_system(RegionKind::full));
    agree += std::abs(mc.mean.value - ex.mean_S) <= 3 * mc.mean.std_error &&
             std::abs(mc.variance.value - ex.variance_S) <= 3 * mc.variance.std_error;
  }
  CHECK(agree >= 38);
}

TEST_CASE("sampled local CLT gap") {
  const auto m = chain(4, 0.0, ising());
  ChainSpec s;
  s.samples = 50000;
  s.seed = 3;
  const auto g = sample_pmf_gap(m, s);
  const double exact = lclt_gap(m.local_system(RegionKind::full));
  CHECK(std::abs(g.gap.value - exact) <= 3 * g.gap.std_error);

  LocalSystem one;
  one.sites = {{0}};
  one.couplings = {0.0};
  one.field = {0.0};
  one.spins = ising();
  CHECK_THROWS_AS(sample_pmf_gap(one, s), DomainError);
}
