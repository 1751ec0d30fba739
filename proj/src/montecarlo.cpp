#include "lclt/montecarlo.hpp"

#include <cmath>
#include <map>

#include "lclt/errors.hpp"
#include "lclt/numeric.hpp"
#include "lclt/parallel.hpp"

namespace lclt {

void ChainSpec::validate() const {
  if (samples < 100) throw ConfigError("mc.samples must be >= 100");
  if (chains < 2) throw ConfigError("mc.chains must be >= 2");
  if (burn_in < 0) throw ConfigError("mc.burn_in must be >= 0");
  if (thinning < 1) throw ConfigError("mc.thinning must be >= 1");
}

MetropolisChain::MetropolisChain(const LocalSystem& sys, std::uint64_t seed, std::uint32_t chain)
    : sys_(&sys), rng_(seed), chain_(chain), spins_(sys.size()), local_field_(sys.size(), 0.0) {
  if (sys.size() == 0) throw DomainError("Metropolis needs a nonempty region");
  // start from an independent draw of every spin (sweep index 0 is reserved)
  const int card = sys.spins.card();
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const auto u = rng_.uniforms(chain_, 0, 0xFFFFFFFFu, static_cast<std::uint32_t>(i));
    spins_[i] = sys.spins.value(std::min(card - 1, static_cast<int>(u[0] * card)));
    sum_ += spins_[i];
  }
  for (std::size_t i = 0; i < sys.size(); ++i) {
    double h = sys.field[i];
    for (std::size_t j = 0; j < sys.size(); ++j) h += sys.coupling(i, j) * spins_[j];
    local_field_[i] = h;
  }
}

bool MetropolisChain::update(std::size_t site, std::uint64_t sweep) {
  const SpinInterval& spins = sys_->spins;
  const int card = spins.card();
  const auto u = rng_.uniforms(chain_, static_cast<std::uint32_t>(sweep), static_cast<std::uint32_t>(sweep >> 32),
                               static_cast<std::uint32_t>(site));
  const int proposal = std::min(card - 1, static_cast<int>(u[0] * card));
  const int old_s = spins_[site];
  const int new_s = spins.value(proposal);
  if (new_s == old_s) return false;
  const double delta_log_weight = (new_s - old_s) * local_field_[site];
  if (delta_log_weight < 0.0 && u[1] >= std::exp(delta_log_weight)) return false;
  spins_[site] = new_s;
  sum_ += new_s - old_s;
  const int ds = new_s - old_s;
  const std::size_t n = sys_->size();
  for (std::size_t j = 0; j < n; ++j) local_field_[j] += sys_->coupling(j, site) * ds;
  ++accepted_;
  return true;
}

void MetropolisChain::sweep() {
  ++sweeps_;
  for (std::size_t i = 0; i < spins_.size(); ++i) update(i, sweeps_);
}

std::vector<std::vector<int>> sample_sums(const LocalSystem& sys, const ChainSpec& spec) {
  spec.validate();
  std::vector<std::vector<int>> out(static_cast<std::size_t>(spec.chains));
  parallel_for(out.size(), [&](std::size_t c) {
    MetropolisChain chain(sys, spec.seed, static_cast<std::uint32_t>(c));
    for (int b = 0; b < spec.burn_in; ++b) chain.sweep();
    auto& sums = out[c];
    sums.reserve(static_cast<std::size_t>(spec.samples));
    for (int s = 0; s < spec.samples; ++s) {
      for (int k = 0; k < spec.thinning; ++k) chain.sweep();
      sums.push_back(chain.sum());
    }
  });
  return out;
}

McStatistics sample_statistics(const LocalSystem& sys, const ChainSpec& spec) {
  const auto chains = sample_sums(sys, spec);
  McStatistics out;
  out.site_count = sys.size();
  out.mean = batch_means(chains, [](int s) { return static_cast<double>(s); });
  const double m = out.mean.value;
  out.variance = batch_means(chains, [m](int s) { return (s - m) * (s - m); });
  // unbiased pooled variance
  const double n = static_cast<double>(spec.chains) * spec.samples;
  out.variance.value *= n / (n - 1.0);
  return out;
}

McStatistics sample_statistics(const GibbsModel& model, const ChainSpec& spec) {
  return sample_statistics(model.local_system(RegionKind::full), spec);
}

McGap sample_pmf_gap(const LocalSystem& sys, const ChainSpec& spec) {
  if (sys.size() < 2) throw DomainError("the local CLT gap needs at least two sites");
  const auto chains = sample_sums(sys, spec);
  const Estimate mean = batch_means(chains, [](int s) { return static_cast<double>(s); });
  const double m = mean.value;
  McGap out;
  out.variance = batch_means(chains, [m](int s) { return (s - m) * (s - m); });
  const double D = out.variance.value;
  if (!(D > 1e-12)) throw DomainError("sampled variance too small for the local CLT gap");
  std::map<int, std::size_t> counts;
  std::size_t total = 0;
  for (const auto& c : chains) {
    for (int s : c) ++counts[s];
    total += c.size();
  }
  const SpinInterval& spins = sys.spins;
  const int n = static_cast<int>(sys.size());
  const double sd = std::sqrt(D);
  double best = -1.0;
  for (int p = n * spins.lo(); p <= n * spins.hi(); p += spins.step()) {
    auto it = counts.find(p);
    const double prob = it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
    const double g = std::abs(sd * prob - gaussian_density((p - m) / sd));
    if (g > best) {
      best = g;
      out.argmax = p;
    }
  }
  const int star = out.argmax;
  const Estimate ind = batch_means(chains, [star](int s) { return s == star ? 1.0 : 0.0; });
  out.gap.value = best;
  out.gap.std_error = sd * ind.std_error;
  out.gap.n_effective = ind.n_effective;
  return out;
}

McGap sample_pmf_gap(const GibbsModel& model, const ChainSpec& spec) {
  return sample_pmf_gap(model.local_system(RegionKind::full), spec);
}

}  // namespace lclt
