#include "lclt/polymer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "lclt/combinatorics.hpp"
#include "lclt/errors.hpp"
#include "lclt/numeric.hpp"
#include "lclt/parallel.hpp"

namespace lclt {

namespace {

constexpr std::uint64_t kMaxNormSubsets = 4'000'000;

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Calls f(digits) for every assignment of value indices to `n` sites.
template <class F>
void for_each_assignment(int n, int card, F&& f) {
  std::vector<int> digit(static_cast<std::size_t>(n), 0);
  while (true) {
    f(static_cast<const std::vector<int>&>(digit));
    int i = n - 1;
    while (i >= 0 && digit[i] == card - 1) digit[i--] = 0;
    if (i < 0) return;
    ++digit[i];
  }
}

/// Calls f(mask) for every k-subset of the n low bits.
template <class F>
void for_each_subset_of_size(int n, int k, F&& f) {
  if (k < 1 || k > n) return;
  std::uint64_t m = (k == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
  const std::uint64_t limit_bit = std::uint64_t{1} << n;
  while (true) {
    f(m);
    const std::uint64_t c = m & (~m + 1);
    const std::uint64_t r = m + c;
    if (r >= limit_bit || r == 0) return;
    m = (((r ^ m) >> 2) / c) | r;
  }
}

void check_budget(double states, const EnumerationOptions& opts, const std::string& what) {
  if (states > static_cast<double>(opts.budget)) {
    throw CapacityError(what + " needs " + std::to_string(static_cast<unsigned long long>(states)) +
                        " spin configurations, budget is " + std::to_string(opts.budget));
  }
}

}  // namespace

int polymer_size(Polymer R) { return std::popcount(R); }

std::vector<std::size_t> polymer_sites(Polymer R) {
  std::vector<std::size_t> out;
  for (; R; R &= R - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(R)));
  return out;
}

ActivityParams ActivityParams::plain(double t) { return {t, 0.0, false}; }

ActivityParams ActivityParams::with_dressing(double t, double c) {
  if (!(c >= 0.0)) throw DomainError("dressing exponent c must be >= 0");
  return {t, c, true};
}

struct PolymerSystem::Cache {
  std::shared_mutex mutex;
  std::unordered_map<Polymer, std::unique_ptr<PolymerSpectrum>> spectra;
};

PolymerSystem::PolymerSystem(LocalSystem sys, EnumerationOptions opts)
    : sys_(std::move(sys)), opts_(opts), cache_(std::make_shared<Cache>()) {
  if (sys_.size() == 0) throw DomainError("polymer system needs at least one site");
  if (sys_.size() > 64) throw CapacityError("polymer systems hold at most 64 sites, got " + std::to_string(sys_.size()));
  for (std::size_t i = 0; i < sys_.size(); ++i) single_.push_back(sys_.single_site_probabilities(i));
}

PolymerSystem PolymerSystem::decimated(const GibbsModel& model, const Boundary& omega, EnumerationOptions opts) {
  return PolymerSystem(model.local_system(model.region(RegionKind::decimated), omega), opts);
}

Polymer PolymerSystem::all_sites() const {
  return size() == 64 ? ~Polymer{0} : (Polymer{1} << size()) - 1;
}

Polymer PolymerSystem::polymer(const std::vector<Site>& sites) const {
  Polymer R = 0;
  for (const Site& x : sites) {
    auto it = std::find(sys_.sites.begin(), sys_.sites.end(), x);
    if (it == sys_.sites.end()) throw DomainError("polymer site is not in the region");
    R |= Polymer{1} << (it - sys_.sites.begin());
  }
  if (R == 0) throw DomainError("polymers must be nonempty");
  return R;
}

PolymerSystem PolymerSystem::restrict_to(Polymer region) const {
  const auto idx = polymer_sites(region & all_sites());
  if (idx.empty()) throw DomainError("restriction to an empty region");
  LocalSystem sub;
  sub.spins = sys_.spins;
  const std::size_t n = idx.size();
  sub.couplings.assign(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    sub.sites.push_back(sys_.sites[idx[a]]);
    sub.field.push_back(sys_.field[idx[a]]);
    for (std::size_t b = 0; b < n; ++b) sub.couplings[a * n + b] = sys_.coupling(idx[a], idx[b]);
  }
  return PolymerSystem(std::move(sub), opts_);
}

const PolymerSpectrum& PolymerSystem::spectrum(Polymer R) const {
  R &= all_sites();
  const int k = polymer_size(R);
  if (k == 0) throw DomainError("polymers must be nonempty");
  if (k > kMaxPolymerSize) {
    throw CapacityError("polymer of size " + std::to_string(k) + " exceeds the supported size " +
                        std::to_string(kMaxPolymerSize));
  }
  {
    std::shared_lock lock(cache_->mutex);
    if (auto it = cache_->spectra.find(R); it != cache_->spectra.end()) return *it->second;
  }
  const int card = sys_.spins.card();
  const auto idx = polymer_sites(R);
  std::map<int, CompensatedSum> coef;
  auto out = std::make_unique<PolymerSpectrum>();
  if (k == 1) {
    const auto& p = single_[idx[0]];
    for (int v = 0; v < card; ++v) coef[sys_.spins.value(v)].add(p[v]);
    coef[0].add(-1.0);
  } else {
    check_budget(std::pow(static_cast<double>(card), k), opts_, "polymer activity");
    CompensatedSum mass;
    std::vector<double> f(static_cast<std::size_t>(k) * k, 0.0);
    std::vector<int> s(k);
    for_each_assignment(k, card, [&](const std::vector<int>& digit) {
      double prob = 1.0;
      int S = 0;
      for (int a = 0; a < k; ++a) {
        s[a] = sys_.spins.value(digit[a]);
        prob *= single_[idx[a]][digit[a]];
        S += s[a];
      }
      for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
          const double v = std::expm1(sys_.coupling(idx[a], idx[b]) * s[a] * s[b]);
          f[static_cast<std::size_t>(a) * k + b] = v;
          f[static_cast<std::size_t>(b) * k + a] = v;
        }
      const double conn = connected_sum(k, f);
      coef[S].add(prob * conn);
      mass.add(prob * std::abs(conn));
    });
    out->abs_mass = mass.value();
  }
  for (const auto& [S, c] : coef) out->terms.emplace_back(S, c.value());
  std::unique_lock lock(cache_->mutex);
  auto [it, inserted] = cache_->spectra.emplace(R, std::move(out));
  return *it->second;
}

ActivityJet PolymerSystem::activity_jet(const ActivityParams& params, Polymer R) const {
  const int k = polymer_size(R & all_sites());
  if (params.dressed && k == 1) throw DomainError("dressed activities are defined only for |R| >= 2");
  if (!params.dressed && params.c != 0.0) throw DomainError("plain activities take c = 0");
  const PolymerSpectrum& spec = spectrum(R);
  ComplexSum v, d1, d2;
  for (const auto& [S, c] : spec.terms) {
    const std::complex<double> e = c * std::polar(1.0, params.t * S);
    v.add(e);
    d1.add(std::complex<double>(0.0, S) * e);
    d2.add(-static_cast<double>(S) * S * e);
  }
  const double scale = params.dressed ? std::exp(params.c * k) : 1.0;
  return {scale * v.value(), scale * d1.value(), scale * d2.value()};
}

std::complex<double> PolymerSystem::activity(const ActivityParams& params, Polymer R) const {
  return activity_jet(params, R).value;
}

double PolymerSystem::weight_w0(Polymer R, double delta) const {
  const int k = polymer_size(R & all_sites());
  if (k == 1) return delta * sigma();
  return std::pow(1.0 + delta * sigma(), k) * spectrum(R).abs_mass;
}

double PolymerSystem::weight_w1(Polymer R, double delta) const {
  return weight_w0(R, delta) * std::exp(polymer_size(R & all_sites()));
}

double PolymerSystem::weight_wc(Polymer R, double delta, double c) const {
  return weight_w0(R, delta) * std::exp(c * polymer_size(R & all_sites()));
}

double PolymerSystem::weight(WeightKind kind, Polymer R, double delta, double c) const {
  switch (kind) {
    case WeightKind::w0:
      return weight_w0(R, delta);
    case WeightKind::w1:
      return weight_w1(R, delta);
    case WeightKind::wc:
      return weight_wc(R, delta, c);
  }
  return 0.0;
}

namespace {

template <class W>
double site_sup_norm(const PolymerSystem& sys, int k, W&& w) {
  const int n = static_cast<int>(sys.size());
  if (k < 1) throw DomainError("polymer size must be >= 1");
  if (k > n) return 0.0;
  if (k > kMaxPolymerSize) {
    throw CapacityError("polymer size " + std::to_string(k) + " exceeds " + std::to_string(kMaxPolymerSize));
  }
  const double count = binomial(n, k);
  if (count > static_cast<double>(kMaxNormSubsets)) {
    throw CapacityError("weight norm needs " + std::to_string(static_cast<unsigned long long>(count)) +
                        " polymers of size " + std::to_string(k) + ", limit is " + std::to_string(kMaxNormSubsets));
  }
  std::vector<CompensatedSum> per_site(static_cast<std::size_t>(n));
  for_each_subset_of_size(n, k, [&](std::uint64_t R) {
    const double v = w(R);
    for (auto x : polymer_sites(R)) per_site[x].add(v);
  });
  double best = 0.0;
  for (const auto& s : per_site) best = std::max(best, s.value());
  return best;
}

}  // namespace

double PolymerSystem::weight_norm(int k, WeightKind kind, double delta, double c) const {
  return site_sup_norm(*this, k, [&](Polymer R) { return weight(kind, R, delta, c); });
}

double PolymerSystem::activity_norm(int k, const ActivityParams& params) const {
  if (params.dressed && k == 1) return 0.0;
  return site_sup_norm(*this, k, [&](Polymer R) { return std::abs(activity(params, R)); });
}

// --- partition functions -----------------------------------------------------

namespace {

void check_region(const PolymerSystem& sys) {
  if (sys.size() > static_cast<std::size_t>(kMaxPolymerRegion)) {
    throw CapacityError("polymer representation needs all subsets of " + std::to_string(sys.size()) +
                        " sites, limit is " + std::to_string(kMaxPolymerRegion));
  }
}

/// Hard-core gas partition function 1 + sum over disjoint families.
template <class T>
T hard_core_partition(int n, const std::vector<T>& activity) {
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<T> P(full + 1, T(0));
  P[0] = T(1);
  for (std::size_t W = 1; W <= full; ++W) {
    const std::size_t low = W & (~W + 1);
    T v = P[W & ~low];
    const std::size_t others = W & ~low;
    for (std::size_t sub = others;; sub = (sub - 1) & others) {
      const std::size_t R = sub | low;
      v += activity[R] * P[W & ~R];
      if (sub == 0) break;
    }
    P[W] = v;
  }
  return P[full];
}

}  // namespace

std::complex<double> PolymerSystem::partition(const ActivityParams& params, PartitionMode mode) const {
  const int n = static_cast<int>(size());
  const int card = sys_.spins.card();
  if (mode == PartitionMode::polymer_sum) {
    check_region(*this);
    std::vector<std::complex<double>> act(std::size_t{1} << n, 0.0);
    for (std::size_t R = 1; R < act.size(); ++R) {
      if (params.dressed && polymer_size(R) == 1) continue;
      act[R] = activity(params, R);
    }
    return hard_core_partition(n, act);
  }

  if (!params.dressed) {
    if (params.c != 0.0) throw DomainError("plain activities take c = 0");
    check_budget(std::pow(static_cast<double>(card), n), opts_, "direct partition function");
    ComplexSum z;
    std::vector<int> s(n);
    for_each_assignment(n, card, [&](const std::vector<int>& digit) {
      double logw = 0.0;
      double prob = 1.0;
      int S = 0;
      for (int a = 0; a < n; ++a) {
        s[a] = sys_.spins.value(digit[a]);
        prob *= single_[a][digit[a]];
        S += s[a];
        for (int b = 0; b < a; ++b) logw += sys_.coupling(a, b) * s[a] * s[b];
      }
      z.add(prob * std::exp(logw) * std::polar(1.0, params.t * S));
    });
    return z.value();
  }

  // Dressed: sum over graphs of e^{c|S_g|} times the spin sum on S_g. Graphs
  // with vertex cover exactly W are collected by inclusion-exclusion.
  check_region(*this);
  ComplexSum total;
  total.add(1.0);
  for (std::size_t W = 1; W < (std::size_t{1} << n); ++W) {
    const auto idx = polymer_sites(W);
    const int k = static_cast<int>(idx.size());
    if (k < 2) continue;
    check_budget(std::pow(static_cast<double>(card), k), opts_, "dressed partition function");
    const std::size_t m = std::size_t{1} << k;
    std::vector<double> F(m);
    std::vector<int> s(k);
    ComplexSum inner;
    for_each_assignment(k, card, [&](const std::vector<int>& digit) {
      double prob = 1.0;
      int S = 0;
      for (int a = 0; a < k; ++a) {
        s[a] = sys_.spins.value(digit[a]);
        prob *= single_[idx[a]][digit[a]];
        S += s[a];
      }
      F[0] = 1.0;
      for (std::size_t U = 1; U < m; ++U) {
        const int top = std::bit_width(U) - 1;
        const std::size_t rest = U & ~(std::size_t{1} << top);
        double v = F[rest];
        for (std::size_t r = rest; r; r &= r - 1) {
          const int b = std::countr_zero(r);
          v *= std::exp(sys_.coupling(idx[top], idx[b]) * s[top] * s[b]);
        }
        F[U] = v;
      }
      CompensatedSum A;
      for (std::size_t U = 0; U < m; ++U) A.add(((k - std::popcount(U)) % 2 == 0) ? F[U] : -F[U]);
      inner.add(prob * A.value() * std::polar(1.0, params.t * S));
    });
    total.add(std::exp(params.c * k) * inner.value());
  }
  return total.value();
}

std::complex<double> PolymerSystem::char_fn_ratio(double t) const {
  return partition(ActivityParams::plain(t), PartitionMode::polymer_sum) /
         partition(ActivityParams::plain(0.0), PartitionMode::polymer_sum);
}

std::complex<double> PolymerSystem::continuous_log(const ActivityParams& params, int min_steps) const {
  auto at = [&](double tau) {
    ActivityParams p = params;
    p.t = tau;
    return partition(p, PartitionMode::direct);
  };
  const std::complex<double> z0 = at(0.0);
  if (!(z0.real() > 0.0) || std::abs(z0.imag()) > 1e-12 * z0.real()) {
    throw DomainError("continuous log needs a positive value at t = 0");
  }
  std::complex<double> acc(std::log(z0.real()), 0.0);
  // sum of principal logs of successive ratios, bisecting large phase jumps
  auto step = [&](auto&& self, double a, double b, std::complex<double> za, std::complex<double> zb,
                  int depth) -> void {
    if (zb == 0.0 || za == 0.0) throw DomainError("partition function vanishes on the path");
    const std::complex<double> r = zb / za;
    if (std::abs(std::arg(r)) <= kPi / 4 || depth >= 40) {
      acc += std::log(r);
      return;
    }
    const double mid = 0.5 * (a + b);
    const auto zm = at(mid);
    self(self, a, mid, za, zm, depth + 1);
    self(self, mid, b, zm, zb, depth + 1);
  };
  const int steps = std::max(1, min_steps);
  std::complex<double> prev = z0;
  for (int j = 1; j <= steps; ++j) {
    const double a = params.t * (j - 1) / steps;
    const double b = params.t * j / steps;
    const auto next = at(b);
    step(step, a, b, prev, next, 0);
    prev = next;
  }
  return acc;
}

// --- convergence and cluster series --------------------------------------------

ConvergenceResult convergence_check(const std::map<int, double>& weight_norms, double a,
                                    std::optional<double> tail_base) {
  if (!(a > 0.0)) throw DomainError("convergence exponent a must be > 0");
  ConvergenceResult r;
  CompensatedSum lhs;
  int kmax = 0;
  for (const auto& [k, w] : weight_norms) {
    if (k < 1) throw DomainError("weight norms are indexed by k >= 1");
    if (w < 0.0) throw DomainError("weight norms must be nonnegative");
    lhs.add(w * std::exp(a * k));
    kmax = std::max(kmax, k);
  }
  double total = lhs.value();
  if (tail_base) {
    const double q = *tail_base * std::exp(a);
    if (*tail_base > 0.0) {
      total += (q >= 1.0) ? std::numeric_limits<double>::infinity() : std::pow(q, kmax + 1) / (1.0 - q);
    }
    r.tail_certified = true;
  }
  r.lhs = total;
  r.rhs = std::expm1(a);
  r.satisfied = r.lhs <= r.rhs * (1.0 + 1e-12);
  return r;
}

namespace {

struct PolymerList {
  std::vector<Polymer> masks;
  std::vector<std::complex<double>> values;
};

PolymerList all_polymers(const PolymerSystem& sys, const ActivityParams& params, bool absolute) {
  PolymerList list;
  for (Polymer R = 1; R <= sys.all_sites(); ++R) {
    if (params.dressed && polymer_size(R) == 1) continue;
    const auto v = sys.activity(params, R);
    list.masks.push_back(R);
    list.values.push_back(absolute ? std::complex<double>(std::abs(v), 0.0) : v);
  }
  return list;
}

}  // namespace

ClusterSeriesResult truncated_log_partition(const PolymerSystem& sys, const ActivityParams& params, int K,
                                            bool absolute) {
  if (K < 1 || K > kMaxClusterOrder) {
    throw CapacityError("truncation order " + std::to_string(K) + " outside 1.." + std::to_string(kMaxClusterOrder));
  }
  check_region(sys);
  const PolymerList list = all_polymers(sys, params, absolute);
  const int P = static_cast<int>(list.masks.size());
  double tuples = 0.0;
  for (int k = 1; k <= K; ++k) tuples += binomial(P + k - 1, k);
  if (tuples > static_cast<double>(kMaxClusterTuples)) {
    throw CapacityError("cluster series needs " + std::to_string(static_cast<unsigned long long>(tuples)) +
                        " polymer multisets, limit is " + std::to_string(kMaxClusterTuples));
  }
  std::vector<char> overlap(static_cast<std::size_t>(P) * P);
  for (int i = 0; i < P; ++i)
    for (int j = 0; j < P; ++j) overlap[static_cast<std::size_t>(i) * P + j] = (list.masks[i] & list.masks[j]) != 0;

  ClusterSeriesResult out;
  out.truncation_order = K;
  ComplexSum running;
  for (int k = 1; k <= K; ++k) {
    std::vector<ComplexSum> partial(static_cast<std::size_t>(P));
    std::vector<std::uint64_t> counted(static_cast<std::size_t>(P), 0);
    parallel_for(static_cast<std::size_t>(P), [&](std::size_t first) {
      std::vector<int> idx(static_cast<std::size_t>(k));
      idx[0] = static_cast<int>(first);
      // multiplicity factor 1 / prod m_j! built incrementally
      auto grow = [&](auto&& self, int depth, std::complex<double> prod, double inv_mult, int run) -> void {
        if (depth == k) {
          EdgeMask mask = 0;
          for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b)
              if (overlap[static_cast<std::size_t>(idx[a]) * P + idx[b]]) mask |= EdgeMask{1} << pair_slot(a, b, k);
          const double phi = ursell_from_overlaps(k, mask);
          ++counted[first];
          if (phi != 0.0) partial[first].add((absolute ? std::abs(phi) : phi) * inv_mult * prod);
          return;
        }
        for (int j = idx[depth - 1]; j < P; ++j) {
          idx[depth] = j;
          const int r = (j == idx[depth - 1]) ? run + 1 : 1;
          self(self, depth + 1, prod * list.values[j], inv_mult / r, r);
        }
      };
      grow(grow, 1, list.values[first], 1.0, 1);
    });
    ComplexSum order;
    for (int i = 0; i < P; ++i) {
      order += partial[i];
      out.clusters_evaluated += counted[i];
    }
    out.order_terms.push_back(order.value());
    running += order;
    out.partial_sums.push_back(running.value());
  }
  out.dominating_tail = cluster_tail_bound(sys, params, K);
  return out;
}

double cluster_tail_bound(const PolymerSystem& sys, const ActivityParams& params, int K) {
  const int n = static_cast<int>(sys.size());
  std::vector<double> norms(static_cast<std::size_t>(n) + 1, 0.0);
  bool any = false;
  for (int k = 1; k <= n; ++k) {
    norms[k] = sys.activity_norm(k, params);
    any = any || norms[k] > 0.0;
  }
  if (!any) return 0.0;
  auto lhs = [&](double rho, double a) {
    CompensatedSum s;
    for (int k = 1; k <= n; ++k) s.add(norms[k] * std::pow(rho * std::exp(a), k));
    return s.value();
  };
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= 240; ++j) {
    const double a = 1e-6 * std::pow(10.0, 7.0 * j / 240.0);
    const double rhs = std::expm1(a);
    if (lhs(1.0, a) > rhs) continue;
    double lo = 1.0, hi = 2.0;
    while (lhs(hi, a) <= rhs && hi < 1e15) {
      lo = hi;
      hi *= 2.0;
    }
    if (hi >= 1e15) return 0.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (lhs(mid, a) <= rhs ? lo : hi) = mid;
    }
    if (lo <= 1.0 + 1e-12) continue;
    best = std::min(best, a * n * std::pow(lo, -K) / (lo - 1.0));
  }
  return best;
}

std::optional<double> absolute_log_resummed(const PolymerSystem& sys, const ActivityParams& params) {
  check_region(sys);
  const int n = static_cast<int>(sys.size());
  std::vector<double> w(std::size_t{1} << n, 0.0);
  for (std::size_t R = 1; R < w.size(); ++R) {
    if (params.dressed && polymer_size(R) == 1) continue;
    w[R] = std::abs(sys.activity(params, R));
  }
  double last = 1.0;
  for (int j = 1; j <= 256; ++j) {
    const double lambda = j / 256.0;
    std::vector<double> scaled(w.size());
    for (std::size_t R = 0; R < w.size(); ++R) scaled[R] = -lambda * w[R];
    last = hard_core_partition(n, scaled);
    if (!(last > 0.0)) return std::nullopt;
  }
  return -std::log(last);
}

// --- tree-graph bounds -----------------------------------------------------------

TreeGraphCheck tree_graph_bound_check(const PolymerSystem& sys, Polymer R, double J_r0) {
  const auto idx = polymer_sites(R & sys.all_sites());
  const int k = static_cast<int>(idx.size());
  if (k < 1) throw DomainError("polymers must be nonempty");
  if (k > 6) throw CapacityError("tree-graph check supports |R| <= 6, got " + std::to_string(k));
  const auto& spins = sys.local().spins;
  check_budget(std::pow(static_cast<double>(spins.card()), k), sys.options(), "tree-graph check");
  const double sigma = spins.sigma();
  const double stab = std::exp(k * J_r0 * sigma * sigma / 2.0);
  const auto& trees = spanning_trees(k);

  TreeGraphCheck out;
  out.min_margin_trees = std::numeric_limits<double>::infinity();
  out.min_margin_J = std::numeric_limits<double>::infinity();
  double worst = std::numeric_limits<double>::infinity();
  std::vector<double> f(static_cast<std::size_t>(k) * k, 0.0);
  std::vector<int> s(k);
  // sum over trees of prod |J| does not depend on the spins
  CompensatedSum jsum;
  for (const Graph& g : trees) {
    double prod = 1.0;
    for (auto [a, b] : g.edge_list()) prod *= std::abs(sys.local().coupling(idx[a], idx[b]));
    jsum.add(prod);
  }
  const double rhs_J = (k == 1) ? 0.0 : stab * std::pow(sigma, 2 * k - 2) * jsum.value();
  for_each_assignment(k, spins.card(), [&](const std::vector<int>& digit) {
    for (int a = 0; a < k; ++a) s[a] = spins.value(digit[a]);
    // the subset recursion cancels terms of size up to e^{sum |J s s|}
    double spread = 0.0;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) {
        const double e = sys.local().coupling(idx[a], idx[b]) * s[a] * s[b];
        const double v = std::expm1(e);
        f[static_cast<std::size_t>(a) * k + b] = v;
        f[static_cast<std::size_t>(b) * k + a] = v;
        spread += std::abs(e);
      }
    const double lhs = (k == 1) ? 0.0 : std::abs(connected_sum(k, f));
    CompensatedSum tsum;
    for (const Graph& g : trees) {
      double prod = 1.0;
      for (auto [a, b] : g.edge_list())
        prod *= -std::expm1(-std::abs(sys.local().coupling(idx[a], idx[b]) * s[a] * s[b]));
      tsum.add(prod);
    }
    const double rhs_trees = (k == 1) ? 0.0 : stab * tsum.value();
    const double m1 = rhs_trees - lhs;
    const double m2 = rhs_J - rhs_trees;
    ++out.configurations;
    const double tol1 = 1e-12 * std::max(std::max(lhs, rhs_trees), std::exp(spread));
    const double tol2 = 1e-12 * std::max(rhs_J, rhs_trees);
    if (m1 < -tol1 || m2 < -tol2) ++out.violations;
    out.min_margin_trees = std::min(out.min_margin_trees, m1);
    out.min_margin_J = std::min(out.min_margin_J, m2);
    const double m = std::min(m1, m2);
    if (m < worst) {
      worst = m;
      out.lhs = lhs;
      out.rhs_trees = rhs_trees;
      out.rhs_J = rhs_J;
    }
  });
  return out;
}

StabilityCheck stability_check(const PolymerSystem& sys, Polymer R, double J_r0) {
  const auto idx = polymer_sites(R & sys.all_sites());
  const int k = static_cast<int>(idx.size());
  if (k < 1) throw DomainError("polymers must be nonempty");
  const auto& spins = sys.local().spins;
  check_budget(std::pow(static_cast<double>(spins.card()), k), sys.options(), "stability check");
  StabilityCheck out;
  out.min_energy = std::numeric_limits<double>::infinity();
  std::vector<int> s(k);
  for_each_assignment(k, spins.card(), [&](const std::vector<int>& digit) {
    for (int a = 0; a < k; ++a) s[a] = spins.value(digit[a]);
    double e = 0.0;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) e += sys.local().coupling(idx[a], idx[b]) * s[a] * s[b];
    out.min_energy = std::min(out.min_energy, e);
  });
  const double sigma = spins.sigma();
  out.bound = -k * J_r0 * sigma * sigma / 2.0;
  out.holds = out.min_energy >= out.bound - 1e-12 * std::abs(out.bound);
  return out;
}

double norm_bound_bo2(int k, double delta, double sigma, double J_r0, double c, Bo2Form form) {
  if (k < 2) throw DomainError("the tree-graph norm bound needs k >= 2");
  if (J_r0 < 0.0 || delta < 0.0 || sigma < 1.0) throw DomainError("invalid constants for the norm bound");
  if (J_r0 == 0.0) return 0.0;
  const double s2 = sigma * sigma;
  switch (form) {
    case Bo2Form::tree_sum: {
      const double log_v = c * k + k * std::log1p(delta * sigma) + k * J_r0 * s2 / 2.0 + (2 * k - 2) * std::log(sigma) +
                           (k - 1) * std::log(J_r0) + (k - 2) * std::log(static_cast<double>(k)) - std::lgamma(k);
      return std::exp(log_v);
    }
    case Bo2Form::factored:
      return std::pow((1.0 + delta * sigma) * std::exp(1.0 + c) * std::exp(J_r0 * s2 / 2.0) * s2 * std::sqrt(J_r0), k);
    case Bo2Form::majorized:
      return std::pow(2.0 * std::exp(1.0 + c) * std::exp(J_r0 * s2 / 2.0) * s2 * std::sqrt(J_r0), k);
  }
  return 0.0;
}

void write_cluster_series_csv(std::ostream& out, const ClusterSeriesResult& series) {
  out << "k,partial_re,partial_im,tail\n";
  out.precision(17);
  for (std::size_t i = 0; i < series.partial_sums.size(); ++i) {
    out << (i + 1) << ',' << series.partial_sums[i].real() << ',' << series.partial_sums[i].imag() << ','
        << series.dominating_tail << '\n';
  }
}

}  // namespace lclt
