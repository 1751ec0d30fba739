#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "lclt/errors.hpp"

namespace lclt {

inline constexpr int kMaxGraphOrder = 8;
/// Largest order whose connected-graph list is materialized; order 8 has
/// 251,548,592 connected graphs and is only counted or streamed.
inline constexpr int kMaxListedConnectedOrder = 7;

/// Edges on the k(k-1)/2 slots {0,1}, {0,2}, ..., {0,k-1}, {1,2}, ...
using EdgeMask = std::uint32_t;

int pair_count(int k);
int pair_slot(int i, int j, int k);
std::pair<int, int> slot_pair(int slot, int k);

/// Simple graph on the vertices 0..k-1.
struct Graph {
  int order = 0;
  EdgeMask edges = 0;

  int edge_count() const;
  bool has_edge(int i, int j) const;
  std::vector<std::pair<int, int>> edge_list() const;
  friend bool operator==(const Graph&, const Graph&) = default;
};

bool is_connected(int k, EdgeMask edges);

/// All connected labeled graphs on k vertices, k in 1..7 (cached).
const std::vector<Graph>& connected_graphs(int k);
/// Calls f(Graph) for every connected labeled graph on k vertices, k in 1..8.
template <class F>
void for_each_connected_graph(int k, F&& f);
std::uint64_t count_connected_graphs(int k);

/// All labeled trees on k vertices, k in 1..8 (cached).
const std::vector<Graph>& spanning_trees(int k);

/// Sum over connected graphs g on 0..k-1 of prod_{ij in g} f(i, j), for a
/// symmetric weight matrix f (k x k, row-major). Uses the recursion over the
/// block containing vertex 0, so any k up to 20 is cheap.
template <class T>
T connected_sum(int k, const std::vector<T>& f);

/// Bit (slot) set when polymers i and j intersect.
template <class Sets, class Intersects>
EdgeMask overlap_mask(const Sets& polymers, Intersects&& intersects);

/// Hard-core Ursell coefficient of k polymers with the given overlap pattern.
/// Cached per (k, pattern); thread safe.
double ursell_from_overlaps(int k, EdgeMask overlaps);
/// Same coefficient by direct summation over connected_graphs(k) (graph
/// streaming for k = 8).
double ursell_from_overlaps_by_graphs(int k, EdgeMask overlaps);

/// phi^T of polymers given as site-index bitsets.
double ursell_hardcore(const std::vector<std::uint64_t>& polymers);
/// phi^T of polymers given as sorted site lists.
template <class Site>
double ursell_hardcore(const std::vector<std::vector<Site>>& polymers);

/// CSV rows "k,graphs,connected,trees" for k = 1..kmax.
void write_graph_table(std::ostream& out, int kmax);

// ---------------------------------------------------------------------------

void check_graph_order(int k, int limit);

template <class F>
void for_each_connected_graph(int k, F&& f) {
  check_graph_order(k, kMaxGraphOrder);
  const std::uint64_t total = std::uint64_t{1} << pair_count(k);
  for (std::uint64_t m = 0; m < total; ++m) {
    const auto edges = static_cast<EdgeMask>(m);
    if (is_connected(k, edges)) f(Graph{k, edges});
  }
}

template <class T>
T connected_sum(int k, const std::vector<T>& f) {
  if (k <= 1) return T(1);
  const std::size_t n = std::size_t{1} << k;
  // all[S] = prod_{i<j in S} (1 + f_ij), built by adding the top vertex
  std::vector<T> all(n, T(1));
  for (std::size_t s = 1; s < n; ++s) {
    int top = 31 - __builtin_clz(static_cast<unsigned>(s));
    std::size_t rest = s & ~(std::size_t{1} << top);
    T v = all[rest];
    for (std::size_t r = rest; r; r &= r - 1) {
      int j = __builtin_ctz(static_cast<unsigned>(r));
      v *= T(1) + f[static_cast<std::size_t>(top) * k + j];
    }
    all[s] = v;
  }
  std::vector<T> conn(n, T(0));
  for (std::size_t s = 1; s < n; ++s) {
    const std::size_t low = s & (~s + 1);
    T v = all[s];
    // proper subsets T of s containing the lowest vertex
    const std::size_t others = s & ~low;
    for (std::size_t sub = (others - 1) & others;; sub = (sub - 1) & others) {
      const std::size_t t = sub | low;
      if (t != s) v -= conn[t] * all[s & ~t];
      if (sub == 0) break;
    }
    conn[s] = v;
  }
  return conn[n - 1];
}

template <class Sets, class Intersects>
EdgeMask overlap_mask(const Sets& polymers, Intersects&& intersects) {
  const int k = static_cast<int>(polymers.size());
  EdgeMask m = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (intersects(polymers[i], polymers[j])) m |= EdgeMask{1} << pair_slot(i, j, k);
  return m;
}

template <class Site>
double ursell_hardcore(const std::vector<std::vector<Site>>& polymers) {
  check_graph_order(static_cast<int>(polymers.size()), kMaxGraphOrder);
  for (const auto& p : polymers)
    if (p.empty()) throw DomainError("polymers must be nonempty");
  const EdgeMask m = overlap_mask(polymers, [](const std::vector<Site>& a, const std::vector<Site>& b) {
    for (const auto& x : a)
      for (const auto& y : b)
        if (x == y) return true;
    return false;
  });
  return ursell_from_overlaps(static_cast<int>(polymers.size()), m);
}

}  // namespace lclt
