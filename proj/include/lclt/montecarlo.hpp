#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lclt/model.hpp"
#include "lclt/random.hpp"

namespace lclt {

struct ChainSpec {
  std::uint64_t seed = 1;
  int burn_in = 1000;  // sweeps
  int samples = 10000;
  int thinning = 1;  // sweeps per sample
  int chains = 4;

  void validate() const;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  double n_effective = 0.0;
};

inline constexpr int kBatchCount = 30;

/// Single-site Metropolis on a local system. The proposal is uniform on all
/// spin values, which keeps two-state chains aperiodic; every random number
/// is addressed by (chain, sweep, site).
class MetropolisChain {
 public:
  MetropolisChain(const LocalSystem& sys, std::uint64_t seed, std::uint32_t chain);

  /// Proposes a new value at `site` using the draw of cell (sweep, site).
  /// Returns true when the move is accepted.
  bool update(std::size_t site, std::uint64_t sweep);
  void sweep();

  const std::vector<int>& spins() const { return spins_; }
  int sum() const { return sum_; }
  std::uint64_t sweeps_done() const { return sweeps_; }
  std::uint64_t accepted() const { return accepted_; }

 private:
  const LocalSystem* sys_;
  Philox4x32 rng_;
  std::uint32_t chain_;
  std::vector<int> spins_;
  std::vector<double> local_field_;  // sum_j J_ij s_j + field_i
  int sum_ = 0;
  std::uint64_t sweeps_ = 0;
  std::uint64_t accepted_ = 0;
};

/// Sums S of every retained sample, chain by chain.
std::vector<std::vector<int>> sample_sums(const LocalSystem& sys, const ChainSpec& spec);

/// Batch-means estimate of the mean of f over all chains (30 batches each).
template <class F>
Estimate batch_means(const std::vector<std::vector<int>>& chains, F&& f);

struct McStatistics {
  Estimate mean;
  Estimate variance;
  std::size_t site_count = 0;
};

McStatistics sample_statistics(const LocalSystem& sys, const ChainSpec& spec);
McStatistics sample_statistics(const GibbsModel& model, const ChainSpec& spec);

struct McGap {
  Estimate gap;
  Estimate variance;
  int argmax = 0;  // value of S where the gap is attained
};

/// Plug-in local CLT gap of the empirical pmf; the error bar is the batch
/// standard error of P(S = p*) at the maximizing p*, scaled by sqrt(D).
McGap sample_pmf_gap(const LocalSystem& sys, const ChainSpec& spec);
McGap sample_pmf_gap(const GibbsModel& model, const ChainSpec& spec);

// ---------------------------------------------------------------------------

template <class F>
Estimate batch_means(const std::vector<std::vector<int>>& chains, F&& f) {
  std::vector<double> batch;
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& c : chains) {
    const std::size_t per = c.size() / kBatchCount;
    for (int b = 0; b < kBatchCount; ++b) {
      double s = 0.0;
      for (std::size_t i = b * per; i < (b + 1) * per; ++i) s += f(c[i]);
      batch.push_back(per ? s / static_cast<double>(per) : 0.0);
    }
    for (int v : c) total += f(v);
    count += c.size();
  }
  Estimate e;
  e.value = count ? total / static_cast<double>(count) : 0.0;
  double var_b = 0.0;
  double var_x = 0.0;
  double mean_b = 0.0;
  for (double b : batch) mean_b += b;
  mean_b /= static_cast<double>(batch.size());
  for (double b : batch) var_b += (b - mean_b) * (b - mean_b);
  var_b /= static_cast<double>(batch.size() - 1);
  e.std_error = std::sqrt(var_b / static_cast<double>(batch.size()));
  for (const auto& c : chains)
    for (int v : c) var_x += (f(v) - e.value) * (f(v) - e.value);
  var_x /= static_cast<double>(count > 1 ? count - 1 : 1);
  const double n = static_cast<double>(count);
  e.n_effective = e.std_error > 0.0 ? std::min(n, var_x / (e.std_error * e.std_error)) : n;
  return e;
}

}  // namespace lclt
