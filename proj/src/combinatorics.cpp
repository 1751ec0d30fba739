#include "lclt/combinatorics.hpp"

#include <array>
#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "lclt/errors.hpp"

namespace lclt {

namespace {

struct SlotTable {
  // slot -> (i, j) for each order
  std::array<std::vector<std::pair<int, int>>, kMaxGraphOrder + 1> pairs;
  SlotTable() {
    for (int k = 0; k <= kMaxGraphOrder; ++k)
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) pairs[k].emplace_back(i, j);
  }
};

const SlotTable& slots() {
  static const SlotTable table;
  return table;
}

template <class Value>
class OnceCache {
 public:
  template <class Build>
  const Value& get(int k, Build&& build) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = entries_.find(k); it != entries_.end()) return *it->second;
    }
    std::unique_lock lock(mutex_);
    auto& slot = entries_[k];
    if (!slot) slot = std::make_unique<Value>(build());
    return *slot;
  }

 private:
  std::shared_mutex mutex_;
  std::map<int, std::unique_ptr<Value>> entries_;
};

}  // namespace

void check_graph_order(int k, int limit) {
  if (k < 1 || k > limit) {
    throw CapacityError("graph order " + std::to_string(k) + " outside supported range 1.." +
                        std::to_string(limit));
  }
}

int pair_count(int k) { return k * (k - 1) / 2; }

int pair_slot(int i, int j, int k) {
  if (i > j) std::swap(i, j);
  // slots before row i: sum_{r<i} (k - 1 - r)
  return i * (2 * k - i - 1) / 2 + (j - i - 1);
}

std::pair<int, int> slot_pair(int slot, int k) { return slots().pairs[k].at(slot); }

int Graph::edge_count() const { return std::popcount(edges); }

bool Graph::has_edge(int i, int j) const {
  return i != j && (edges >> pair_slot(i, j, order) & 1u);
}

std::vector<std::pair<int, int>> Graph::edge_list() const {
  std::vector<std::pair<int, int>> out;
  for (EdgeMask m = edges; m; m &= m - 1) out.push_back(slot_pair(std::countr_zero(m), order));
  return out;
}

bool is_connected(int k, EdgeMask edges) {
  if (k <= 1) return true;
  std::array<unsigned, kMaxGraphOrder> adj{};
  const auto& pairs = slots().pairs[k];
  for (EdgeMask m = edges; m; m &= m - 1) {
    const auto [i, j] = pairs[std::countr_zero(m)];
    adj[i] |= 1u << j;
    adj[j] |= 1u << i;
  }
  unsigned seen = 1u, frontier = 1u;
  while (frontier) {
    unsigned next = 0;
    for (unsigned f = frontier; f; f &= f - 1) next |= adj[std::countr_zero(f)];
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == (1u << k) - 1;
}

const std::vector<Graph>& connected_graphs(int k) {
  check_graph_order(k, kMaxListedConnectedOrder);
  static OnceCache<std::vector<Graph>> cache;
  return cache.get(k, [k] {
    std::vector<Graph> out;
    for_each_connected_graph(k, [&](const Graph& g) { out.push_back(g); });
    return out;
  });
}

std::uint64_t count_connected_graphs(int k) {
  if (k <= kMaxListedConnectedOrder && k >= 1) return connected_graphs(k).size();
  std::uint64_t n = 0;
  for_each_connected_graph(k, [&](const Graph&) { ++n; });
  return n;
}

const std::vector<Graph>& spanning_trees(int k) {
  check_graph_order(k, kMaxGraphOrder);
  static OnceCache<std::vector<Graph>> cache;
  return cache.get(k, [k] {
    std::vector<Graph> out;
    const int p = pair_count(k);
    const int e = k - 1;
    if (e == 0) {
      out.push_back(Graph{k, 0});
      return out;
    }
    // iterate masks with exactly e bits (Gosper's hack)
    EdgeMask m = (EdgeMask{1} << e) - 1;
    const std::uint64_t limit = std::uint64_t{1} << p;
    while (m < limit) {
      if (is_connected(k, m)) out.push_back(Graph{k, m});
      const EdgeMask c = m & (~m + 1);
      const std::uint64_t r = static_cast<std::uint64_t>(m) + c;
      if (r >= limit) break;
      m = static_cast<EdgeMask>((((r ^ m) >> 2) / c) | r);
    }
    return out;
  });
}

double ursell_from_overlaps(int k, EdgeMask overlaps) {
  check_graph_order(k, kMaxGraphOrder);
  if (k == 1) return 1.0;
  if (!is_connected(k, overlaps)) return 0.0;
  static std::shared_mutex mutex;
  static std::unordered_map<std::uint64_t, double> cache;
  const std::uint64_t key = static_cast<std::uint64_t>(k) << 32 | overlaps;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  std::vector<double> f(static_cast<std::size_t>(k) * k, 0.0);
  for (EdgeMask m = overlaps; m; m &= m - 1) {
    const auto [i, j] = slot_pair(std::countr_zero(m), k);
    f[static_cast<std::size_t>(i) * k + j] = -1.0;
    f[static_cast<std::size_t>(j) * k + i] = -1.0;
  }
  const double v = connected_sum(k, f);
  std::unique_lock lock(mutex);
  cache.emplace(key, v);
  return v;
}

double ursell_from_overlaps_by_graphs(int k, EdgeMask overlaps) {
  check_graph_order(k, kMaxGraphOrder);
  long long sum = 0;
  auto visit = [&](const Graph& g) {
    if ((g.edges & ~overlaps) == 0) sum += (g.edge_count() % 2 == 0) ? 1 : -1;
  };
  if (k <= kMaxListedConnectedOrder) {
    for (const Graph& g : connected_graphs(k)) visit(g);
  } else {
    for_each_connected_graph(k, visit);
  }
  return static_cast<double>(sum);
}

double ursell_hardcore(const std::vector<std::uint64_t>& polymers) {
  check_graph_order(static_cast<int>(polymers.size()), kMaxGraphOrder);
  for (auto p : polymers)
    if (p == 0) throw DomainError("polymers must be nonempty");
  const EdgeMask m = overlap_mask(polymers, [](std::uint64_t a, std::uint64_t b) { return (a & b) != 0; });
  return ursell_from_overlaps(static_cast<int>(polymers.size()), m);
}

void write_graph_table(std::ostream& out, int kmax) {
  check_graph_order(kmax, kMaxGraphOrder);
  out << "k,graphs,connected,trees\n";
  for (int k = 1; k <= kmax; ++k) {
    out << k << ',' << (std::uint64_t{1} << pair_count(k)) << ',' << count_connected_graphs(k) << ','
        << spanning_trees(k).size() << '\n';
  }
}

}  // namespace lclt
