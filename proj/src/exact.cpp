#include "lclt/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lclt/errors.hpp"
#include "lclt/numeric.hpp"
#include "lclt/parallel.hpp"

namespace lclt {

namespace {

constexpr std::uint64_t kChunkStates = 1u << 16;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Walks all configurations of a LocalSystem in mixed-radix order, split
/// into chunks by the leading sites. Within a chunk the log-weight and the
/// effective fields are updated incrementally, one changed site at a time.
class Enumerator {
 public:
  Enumerator(const LocalSystem& sys, const EnumerationOptions& opts)
      : sys_(sys), n_(sys.size()), m_(sys.spins.card()) {
    total_ = state_count(sys, opts);
    const double sigma = sys.spins.sigma();
    CompensatedSum bound;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) bound.add(std::abs(sys.coupling(i, j)) * sigma * sigma);
      bound.add(std::abs(sys.field[i]) * sigma);
    }
    shift_ = bound.value();
    std::uint64_t inner = 1;
    inner_sites_ = 0;
    while (inner_sites_ < n_ && inner * m_ <= kChunkStates) {
      inner *= m_;
      ++inner_sites_;
    }
    chunks_ = total_ / inner;
  }

  std::size_t chunks() const { return chunks_; }
  /// log-weights are reported relative to this shift (all weights <= 1)
  double shift() const { return shift_; }
  std::uint64_t total() const { return total_; }
  std::uint64_t chunk_size() const { return total_ / chunks_; }

  /// visit(index_in_chunk, S, logw_shifted)
  template <class Visit>
  void run_chunk(std::size_t chunk, Visit&& visit) const {
    const std::size_t lead = n_ - inner_sites_;
    std::vector<int> digit(n_, 0);
    std::uint64_t c = chunk;
    for (std::size_t i = lead; i-- > 0;) {
      digit[i] = static_cast<int>(c % m_);
      c /= m_;
    }
    std::vector<int> s(n_);
    for (std::size_t i = 0; i < n_; ++i) s[i] = sys_.spins.value(digit[i]);
    std::vector<double> eff(n_);
    double logw = -shift_;
    int total_spin = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      double e = sys_.field[i];
      for (std::size_t j = 0; j < n_; ++j) e += sys_.coupling(i, j) * s[j];
      eff[i] = e;
      logw += sys_.field[i] * s[i];
      for (std::size_t j = i + 1; j < n_; ++j) logw += sys_.coupling(i, j) * s[i] * s[j];
      total_spin += s[i];
    }
    auto change = [&](std::size_t i, int delta) {
      logw += delta * eff[i];
      const double* row = &sys_.couplings[i * n_];
      for (std::size_t k = 0; k < n_; ++k) eff[k] += row[k] * delta;
      s[i] += delta;
      total_spin += delta;
    };
    const int span = sys_.spins.hi() - sys_.spins.lo();
    const std::uint64_t count = chunk_size();
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      visit(idx, total_spin, logw);
      std::size_t i = n_;
      while (i > lead && digit[i - 1] == m_ - 1) {
        --i;
        digit[i] = 0;
        change(i, -span);
      }
      if (i == lead) break;
      --i;
      ++digit[i];
      change(i, sys_.spins.step());
    }
  }

 private:
  const LocalSystem& sys_;
  std::size_t n_;
  int m_;
  std::uint64_t total_ = 1;
  double shift_ = 0.0;
  std::size_t inner_sites_ = 0;
  std::size_t chunks_ = 1;
};

std::size_t bin_count(const LocalSystem& sys) {
  const int span = sys.spins.hi() - sys.spins.lo();
  return static_cast<std::size_t>(sys.size()) * span / sys.spins.step() + 1;
}

int bin_first(const LocalSystem& sys) { return static_cast<int>(sys.size()) * sys.spins.lo(); }

/// Per-bin compensated sums of shifted weights, reduced in chunk order.
std::vector<CompensatedSum> weighted_histogram(const LocalSystem& sys, const EnumerationOptions& opts,
                                               double* shift) {
  const Enumerator walk(sys, opts);
  const std::size_t bins = bin_count(sys);
  const int first = bin_first(sys);
  const int step = sys.spins.step();
  std::vector<std::vector<CompensatedSum>> partial(walk.chunks(), std::vector<CompensatedSum>(bins));
  parallel_for(walk.chunks(), [&](std::size_t c) {
    auto& h = partial[c];
    walk.run_chunk(c, [&](std::uint64_t, int S, double logw) { h[(S - first) / step].add(std::exp(logw)); });
  });
  std::vector<CompensatedSum> hist(bins);
  for (const auto& h : partial)
    for (std::size_t b = 0; b < bins; ++b) hist[b] += h[b];
  if (shift) *shift = walk.shift();
  return hist;
}

}  // namespace

std::uint64_t state_count(const LocalSystem& sys, const EnumerationOptions& opts) {
  const double states = std::pow(static_cast<double>(sys.spins.card()), static_cast<double>(sys.size()));
  if (states > static_cast<double>(opts.budget)) {
    throw CapacityError("exact enumeration needs " + std::to_string(static_cast<unsigned long long>(states)) +
                        " states (" + std::to_string(sys.spins.card()) + "^" + std::to_string(sys.size()) +
                        "), budget is " + std::to_string(opts.budget));
  }
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < sys.size(); ++i) total *= static_cast<std::uint64_t>(sys.spins.card());
  return total;
}

// --- PmfTable ---------------------------------------------------------------

PmfTable::PmfTable(int first, int step, std::vector<double> probabilities)
    : first_(first), step_(step), probabilities_(std::move(probabilities)) {
  if (step < 1) throw DomainError("pmf lattice step must be >= 1");
  if (probabilities_.empty()) throw DomainError("pmf table is empty");
  for (double p : probabilities_)
    if (!(p >= 0.0)) throw DomainError("pmf probabilities must be nonnegative");
}

double PmfTable::at(int p) const {
  if (p < first_ || p > last() || (p - first_) % step_ != 0) return 0.0;
  return probabilities_[static_cast<std::size_t>((p - first_) / step_)];
}

double PmfTable::total() const {
  CompensatedSum s;
  for (double p : probabilities_) s.add(p);
  return s.value();
}

double PmfTable::mean() const {
  CompensatedSum s;
  for (std::size_t i = 0; i < size(); ++i) s.add(probabilities_[i] * value(i));
  return s.value() / total();
}

double PmfTable::variance() const {
  const double mu = mean();
  CompensatedSum s;
  for (std::size_t i = 0; i < size(); ++i) {
    const double d = value(i) - mu;
    s.add(probabilities_[i] * d * d);
  }
  return s.value() / total();
}

std::complex<double> PmfTable::char_fn(double t) const {
  ComplexSum s;
  for (std::size_t i = 0; i < size(); ++i) s.add(probabilities_[i] * std::polar(1.0, t * value(i)));
  return s.value();
}

// --- enumeration-backed quantities ------------------------------------------

double partition_function(const LocalSystem& sys, const EnumerationOptions& opts) {
  return std::exp(log_partition_function(sys, opts));
}

double log_partition_function(const LocalSystem& sys, const EnumerationOptions& opts) {
  double shift = 0.0;
  const auto hist = weighted_histogram(sys, opts, &shift);
  CompensatedSum z;
  for (const auto& b : hist) z += b;
  return shift + std::log(z.value());
}

PmfTable pmf(const LocalSystem& sys, const EnumerationOptions& opts) {
  const auto hist = weighted_histogram(sys, opts, nullptr);
  CompensatedSum z;
  for (const auto& b : hist) z += b;
  std::vector<double> p(hist.size());
  for (std::size_t b = 0; b < hist.size(); ++b) p[b] = hist[b].value() / z.value();
  return PmfTable(bin_first(sys), sys.spins.step(), std::move(p));
}

Statistics statistics(const LocalSystem& sys, const EnumerationOptions& opts) {
  const PmfTable table = pmf(sys, opts);
  Statistics st;
  st.site_count = sys.size();
  st.mean_S = table.mean();
  st.variance_S = std::max(0.0, table.variance());
  st.variance_density = st.variance_S / static_cast<double>(st.site_count);
  return st;
}

std::complex<double> char_fn(const LocalSystem& sys, double t, const EnumerationOptions& opts) {
  const Enumerator walk(sys, opts);
  const int first = bin_first(sys);
  const int step = sys.spins.step();
  std::vector<std::complex<double>> phase(bin_count(sys));
  for (std::size_t b = 0; b < phase.size(); ++b) phase[b] = std::polar(1.0, t * (first + step * static_cast<int>(b)));
  std::vector<ComplexSum> num(walk.chunks());
  std::vector<CompensatedSum> den(walk.chunks());
  parallel_for(walk.chunks(), [&](std::size_t c) {
    walk.run_chunk(c, [&](std::uint64_t, int S, double logw) {
      const double w = std::exp(logw);
      num[c].add(w * phase[(S - first) / step]);
      den[c].add(w);
    });
  });
  ComplexSum total_num;
  CompensatedSum total_den;
  for (std::size_t c = 0; c < walk.chunks(); ++c) {
    total_num += num[c];
    total_den += den[c];
  }
  return total_num.value() / total_den.value();
}

std::vector<double> gibbs_probabilities(const LocalSystem& sys, const EnumerationOptions& opts) {
  const Enumerator walk(sys, opts);
  std::vector<double> w(walk.total());
  const std::uint64_t per = walk.chunk_size();
  parallel_for(walk.chunks(), [&](std::size_t c) {
    walk.run_chunk(c, [&](std::uint64_t idx, int, double logw) { w[c * per + idx] = std::exp(logw); });
  });
  CompensatedSum z;
  for (double v : w) z.add(v);
  for (double& v : w) v /= z.value();
  return w;
}

double lclt_gap(const PmfTable& table) {
  const double d = table.variance();
  if (!(d > 1e-300)) throw DomainError("degenerate distribution: variance of S is zero");
  const double root = std::sqrt(d);
  const double mu = table.mean();
  double gap = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double z = (table.value(i) - mu) / root;
    gap = std::max(gap, std::abs(root * table.probabilities()[i] - gaussian_density(z)));
  }
  return gap;
}

double lclt_gap(const LocalSystem& sys, const EnumerationOptions& opts) { return lclt_gap(pmf(sys, opts)); }

// --- decimated measure ------------------------------------------------------

std::vector<LabeledBoundary> omega_family(const GibbsModel& model, int samples, std::uint64_t seed,
                                          bool include_conditional, std::uint64_t conditional_budget) {
  const SpinInterval& spins = model.spins();
  std::vector<LabeledBoundary> out;
  out.push_back({"constant_lo", Boundary::constant(spins.lo())});
  out.push_back({"constant_hi", Boundary::constant(spins.hi())});
  for (int k = 0; k < samples; ++k) {
    out.push_back({"random_" + std::to_string(k), Boundary::random(splitmix(seed ^ splitmix(k + 1)))});
  }
  if (!include_conditional) return out;

  const Region decimated = model.region(RegionKind::decimated);
  std::vector<Site> inner;
  for (const Site& x : model.box().sites())
    if (!decimated.contains(x)) inner.push_back(x);
  const double count = std::pow(static_cast<double>(spins.card()), static_cast<double>(inner.size()));
  if (count > static_cast<double>(conditional_budget)) return out;
  std::vector<int> digit(inner.size(), 0);
  for (std::uint64_t idx = 0; idx < static_cast<std::uint64_t>(count); ++idx) {
    std::map<Site, int> assign;
    for (std::size_t i = 0; i < inner.size(); ++i) assign[inner[i]] = spins.value(digit[i]);
    out.push_back({"conditional_" + std::to_string(idx), model.boundary().with_overrides(assign)});
    for (std::size_t i = inner.size(); i-- > 0;) {
      if (++digit[i] < spins.card()) break;
      digit[i] = 0;
    }
  }
  return out;
}

DecimatedSup decimated_char_fn_sup(const GibbsModel& model, double t, int omega_samples, std::uint64_t seed,
                                   const EnumerationOptions& opts) {
  const Region decimated = model.region(RegionKind::decimated);
  DecimatedSup out;
  const auto family = omega_family(model, omega_samples, seed, true);
  for (const auto& omega : family) {
    const double v = std::abs(char_fn(model.local_system(decimated, omega.boundary), t, opts));
    if (omega.label.rfind("conditional_", 0) == 0) {
      out.conditional_sup = std::max(out.conditional_sup.value_or(0.0), v);
    } else {
      out.sampled_sup = std::max(out.sampled_sup, v);
    }
  }
  out.omega_count = family.size();
  out.sup = std::max(out.sampled_sup, out.conditional_sup.value_or(0.0));
  const LocalSystem full = model.local_system(RegionKind::full);
  const double states = std::pow(static_cast<double>(full.spins.card()), static_cast<double>(full.size()));
  if (states <= static_cast<double>(opts.budget)) out.full_box_abs = std::abs(char_fn(full, t, opts));
  return out;
}

}  // namespace lclt
