#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "lclt/combinatorics.hpp"
#include "lclt/errors.hpp"

using namespace lclt;

namespace {

// Union-find over an explicit edge list, independent of is_connected.
bool connected_by_union_find(int k, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int comps = k;
  for (auto [a, b] : edges) {
    int ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[ra] = rb;
      --comps;
    }
  }
  return comps == 1;
}

std::vector<std::pair<int, int>> all_pairs(int k) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) out.emplace_back(i, j);
  return out;
}

long long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

TEST_CASE("pair slots") {
  for (int k = 2; k <= 8; ++k) {
    std::set<int> seen;
    for (auto [i, j] : all_pairs(k)) {
      const int s = pair_slot(i, j, k);
      CHECK(s >= 0);
      CHECK(s < pair_count(k));
      CHECK(pair_slot(j, i, k) == s);
      CHECK(slot_pair(s, k) == std::make_pair(i, j));
      seen.insert(s);
    }
    CHECK(static_cast<int>(seen.size()) == pair_count(k));
  }
}

TEST_CASE("connected graph counts by brute-force filtering") {
  const long long expected[] = {1, 1, 4, 38, 728, 26704};
  for (int k = 1; k <= 6; ++k) {
    const auto pairs = all_pairs(k);
    long long brute = 0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << pairs.size()); ++m) {
      std::vector<std::pair<int, int>> edges;
      for (std::size_t s = 0; s < pairs.size(); ++s)
        if (m >> s & 1) edges.push_back(pairs[s]);
      brute += connected_by_union_find(k, edges);
    }
    CHECK(brute == expected[k - 1]);
    CHECK(static_cast<long long>(connected_graphs(k).size()) == expected[k - 1]);
    std::set<EdgeMask> unique;
    for (const Graph& g : connected_graphs(k)) {
      unique.insert(g.edges);
      CHECK(connected_by_union_find(k, g.edge_list()));
    }
    CHECK(unique.size() == connected_graphs(k).size());
  }
  CHECK(connected_graphs(7).size() == 1866256);
  CHECK_THROWS_AS(connected_graphs(8), CapacityError);
  CHECK_THROWS_AS(connected_graphs(0), CapacityError);
}

TEST_CASE("Cayley counts of labeled trees") {
  CHECK(spanning_trees(1).size() == 1);
  for (int k = 2; k <= 8; ++k) {
    const auto& trees = spanning_trees(k);
    CHECK(static_cast<double>(trees.size()) == std::pow(k, k - 2));
    for (std::size_t i = 0; i < trees.size(); i += 97) {
      CHECK(trees[i].edge_count() == k - 1);
      CHECK(connected_by_union_find(k, trees[i].edge_list()));
    }
  }
  CHECK_THROWS_AS(spanning_trees(9), CapacityError);
}

TEST_CASE("Ursell coefficients of simple clusters") {
  CHECK(ursell_hardcore(std::vector<std::uint64_t>{0b11}) == 1.0);
  CHECK(ursell_hardcore(std::vector<std::uint64_t>{0b01, 0b10}) == 0.0);
  CHECK(ursell_hardcore(std::vector<std::uint64_t>{0b011, 0b110}) == -1.0);
  CHECK(ursell_hardcore(std::vector<std::uint64_t>{0b1, 0b1, 0b1}) == 2.0);
  std::vector<std::vector<int>> sets{{1, 2}, {2, 3}, {3, 4}};
  // path intersection graph: the only connected subgraph is the path itself
  CHECK(ursell_hardcore(sets) == 1.0);
  CHECK_THROWS_AS(ursell_hardcore(std::vector<std::uint64_t>{0b1, 0}), DomainError);
}

TEST_CASE("Rota identity") {
  for (int k = 1; k <= 7; ++k) {
    const EdgeMask complete = static_cast<EdgeMask>((std::uint64_t{1} << pair_count(k)) - 1);
    const double expected = ((k - 1) % 2 ? -1.0 : 1.0) * static_cast<double>(factorial(k - 1));
    CHECK(ursell_from_overlaps(k, complete) == expected);
    CHECK(ursell_from_overlaps_by_graphs(k, complete) == expected);
    CHECK(ursell_hardcore(std::vector<std::uint64_t>(k, 0b101)) == expected);
  }
}

TEST_CASE("Ursell coefficients: both evaluation paths, disconnection, permutations") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 7);
    std::vector<std::uint64_t> polys(k);
    for (auto& p : polys) {
      p = 0;
      while (p == 0) p = rng() & 0x3F & rng();
    }
    const double v = ursell_hardcore(polys);
    const EdgeMask m = overlap_mask(polys, [](auto a, auto b) { return (a & b) != 0; });
    CHECK(v == ursell_from_overlaps_by_graphs(k, m));
    if (!is_connected(k, m)) CHECK(v == 0.0);
    auto shuffled = polys;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(ursell_hardcore(shuffled) == v);
  }
}

TEST_CASE("connected sum against explicit graph enumeration") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int k = 1; k <= 6; ++k) {
    std::vector<double> f(k * k, 0.0);
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) f[i * k + j] = f[j * k + i] = u(rng);
    double direct = 0.0;
    for (const Graph& g : connected_graphs(k)) {
      double prod = 1.0;
      for (auto [i, j] : g.edge_list()) prod *= f[i * k + j];
      direct += prod;
    }
    CHECK(connected_sum(k, f) == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("graph table") {
  std::ostringstream out;
  write_graph_table(out, 4);
  CHECK(out.str() == "k,graphs,connected,trees\n1,1,1,1\n2,2,1,1\n3,8,4,3\n4,64,38,16\n");
}
