#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "lclt/errors.hpp"
#include "lclt/exact.hpp"
#include "lclt/numeric.hpp"
#include "support.hpp"

using namespace lclt;
using lclt::testing::chain;
using lclt::testing::ising;

namespace {

// Independent oracle: every configuration through GibbsModel::hamiltonian.
struct Brute {
  double Z = 0.0;
  std::map<int, double> pmf;
  std::complex<double> cf(double t) const {
    std::complex<double> s;
    for (auto [p, w] : pmf) s += w * std::polar(1.0, t * p);
    return s;
  }
};

Brute brute_force(const GibbsModel& m, RegionKind kind) {
  const Region r = m.region(kind);
  const auto values = m.spins().values();
  std::vector<std::size_t> digit(r.size(), 0);
  Brute b;
  std::vector<std::pair<int, double>> raw;
  while (true) {
    SpinConfig c{r, {}};
    int S = 0;
    for (auto d : digit) {
      c.values.push_back(values[d]);
      S += values[d];
    }
    const double w = std::exp(m.hamiltonian(c));
    b.Z += w;
    raw.emplace_back(S, w);
    std::size_t i = r.size();
    while (i > 0 && digit[i - 1] + 1 == values.size()) digit[--i] = 0;
    if (i == 0) break;
    ++digit[i - 1];
  }
  for (auto [S, w] : raw) b.pmf[S] += w / b.Z;
  return b;
}

}  // namespace

TEST_CASE("two free-coupled Ising spins") {
  LocalSystem sys;
  sys.sites = {{0}, {1}};
  sys.couplings = {0.0, 0.1, 0.1, 0.0};
  sys.field = {0.0, 0.0};
  sys.spins = ising();
  CHECK(partition_function(sys) == doctest::Approx(2 * std::exp(0.1) + 2 * std::exp(-0.1)).epsilon(1e-14));
  CHECK(partition_function(sys) == doctest::Approx(4.020017).epsilon(1e-6));
  const auto table = pmf(sys);
  CHECK(table.first() == -2);
  CHECK(table.step() == 2);
  CHECK(table.at(0) == doctest::Approx(2 * std::exp(-0.1) / partition_function(sys)));
  CHECK(table.at(1) == 0.0);
}

TEST_CASE("exact engine against the brute-force oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    const SpinInterval spins = (trial % 2) ? SpinInterval(-1, 1) : ising();
    const auto m = lclt::testing::random_model(rng, 1 + trial % 2, 1, spins, 0.3);
    const LocalSystem sys = m.local_system(RegionKind::full);
    const Brute b = brute_force(m, RegionKind::full);
    CHECK(partition_function(sys) == doctest::Approx(b.Z).epsilon(1e-12));
    const auto table = pmf(sys);
    for (auto [p, w] : b.pmf) CHECK(table.at(p) == doctest::Approx(w).epsilon(1e-12));
    for (double t : {0.0, 0.3, 1.7, 3.0}) {
      const auto z = char_fn(sys, t);
      CHECK(std::abs(z - b.cf(t)) < 1e-12);
      CHECK(std::abs(z - table.char_fn(t)) < 1e-12);
    }
    const auto probs = gibbs_probabilities(sys);
    CompensatedSum total;
    for (double p : probs) total.add(p);
    CHECK(total.value() == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("chunked enumeration matches a single chunk") {
  // 17 Ising sites span several 2^16 chunks
  const auto m = chain(8, 0.2, ising(), Boundary::constant(1));
  const LocalSystem sys = m.local_system(RegionKind::full);
  const auto st = statistics(sys);
  const auto table = pmf(sys);
  CompensatedSum mean;
  for (std::size_t i = 0; i < table.size(); ++i) mean.add(table.value(i) * table.probabilities()[i]);
  CHECK(st.mean_S == doctest::Approx(mean.value()).epsilon(1e-12));
  CHECK(st.site_count == 17);
  CHECK(st.variance_density == doctest::Approx(st.variance_S / 17));
  // transfer-matrix oracle for the open chain with +1 exterior spins
  const double J = 0.2;
  auto Zt = [&](double h) {
    // Z(h) = sum exp(J sum s_i s_{i+1} + J (s_1 + s_n) + h sum s)
    double v[2];
    for (int a = 0; a < 2; ++a) {
      const int s = a ? 1 : -1;
      v[a] = std::exp(J * s + h * s);
    }
    for (int i = 1; i < 17; ++i) {
      double nv[2];
      for (int b = 0; b < 2; ++b) {
        const int sb = b ? 1 : -1;
        nv[b] = 0.0;
        for (int a = 0; a < 2; ++a) nv[b] += v[a] * std::exp(J * (a ? 1 : -1) * sb + h * sb);
      }
      v[0] = nv[0];
      v[1] = nv[1];
    }
    return v[0] * std::exp(-J) + v[1] * std::exp(J);
  };
  CHECK(partition_function(sys) == doctest::Approx(Zt(0.0)).epsilon(1e-12));
  const double eps = 1e-5;
  const double mean_fd = (std::log(Zt(eps)) - std::log(Zt(-eps))) / (2 * eps);
  CHECK(st.mean_S == doctest::Approx(mean_fd).epsilon(1e-8));
}

TEST_CASE("capacity errors name the state count") {
  const auto m = chain(12, 0.1, SpinInterval(-1, 1));
  const LocalSystem sys = m.local_system(RegionKind::full);
  EnumerationOptions opts;
  opts.budget = 1000;
  try {
    (void)partition_function(sys, opts);
    FAIL("expected a capacity error");
  } catch (const CapacityError& e) {
    CHECK(std::string(e.what()).find("847288609443") != std::string::npos);
  }
}

TEST_CASE("lclt gap of free spins") {
  // 5 free +-1 spins: S in {-5,...,5} step 2, D = 5
  const auto m = chain(2, 0.0, ising());
  const auto table = pmf(m.local_system(RegionKind::full));
  CHECK(table.variance() == doctest::Approx(5.0));
  double gap = 0.0;
  for (int k = 0; k <= 5; ++k) {
    const double p = std::tgamma(6) / (std::tgamma(k + 1) * std::tgamma(6 - k)) / 32.0;
    const double z = (2 * k - 5) / std::sqrt(5.0);
    gap = std::max(gap, std::abs(std::sqrt(5.0) * p - std::exp(-z * z / 2) / std::sqrt(2 * kPi)));
  }
  CHECK(lclt_gap(table) == doctest::Approx(gap).epsilon(1e-13));

  // gaps decrease for consecutive-integer spins as the box grows
  double last = 1e9;
  for (int r : {2, 4, 8}) {
    const auto g = lclt_gap(chain(r, 0.0, SpinInterval(0, 1)).local_system(RegionKind::full));
    CHECK(g < last);
    last = g;
  }
  PmfTable point(3, 1, {1.0});
  CHECK_THROWS_AS(lclt_gap(point), DomainError);
}

TEST_CASE("decimated characteristic function sup") {
  const auto m = chain(4, 0.1, SpinInterval(-1, 1), Boundary::constant(0), 2);
  const auto fam = omega_family(m, 3, 42, true, 4096);
  // 2 extremal + 3 random + 3^4 conditional
  CHECK(fam.size() == 2 + 3 + 81);
  const auto sup = decimated_char_fn_sup(m, 0.7, 3, 42);
  CHECK(sup.conditional_sup.has_value());
  CHECK(sup.full_box_abs.has_value());
  CHECK(sup.sup >= sup.sampled_sup);
  // the full-box CF is a mixture of conditional decimated CFs
  CHECK(*sup.full_box_abs <= *sup.conditional_sup + 1e-12);
  const auto again = decimated_char_fn_sup(m, 0.7, 3, 42);
  CHECK(again.sup == sup.sup);
}
