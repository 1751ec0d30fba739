#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lclt/model.hpp"

namespace lclt {

struct EnumerationOptions {
  std::uint64_t budget = std::uint64_t{1} << 24;
};

/// |I|^n, or throws CapacityError when it exceeds the budget.
std::uint64_t state_count(const LocalSystem& sys, const EnumerationOptions& opts);

struct Statistics {
  double mean_S = 0.0;
  double variance_S = 0.0;
  double variance_density = 0.0;
  std::size_t site_count = 0;
};

/// Distribution of S on its lattice {first, first + step, ...}.
class PmfTable {
 public:
  PmfTable(int first, int step, std::vector<double> probabilities);

  int first() const { return first_; }
  int step() const { return step_; }
  int last() const { return first_ + step_ * static_cast<int>(probabilities_.size() - 1); }
  std::size_t size() const { return probabilities_.size(); }
  int value(std::size_t i) const { return first_ + step_ * static_cast<int>(i); }
  const std::vector<double>& probabilities() const { return probabilities_; }
  /// P(S = p); zero off the lattice.
  double at(int p) const;
  double total() const;
  double mean() const;
  double variance() const;
  /// sum_p P(p) e^{itp}
  std::complex<double> char_fn(double t) const;

 private:
  int first_;
  int step_;
  std::vector<double> probabilities_;
};

double partition_function(const LocalSystem& sys, const EnumerationOptions& opts = {});
double log_partition_function(const LocalSystem& sys, const EnumerationOptions& opts = {});
Statistics statistics(const LocalSystem& sys, const EnumerationOptions& opts = {});
/// E[e^{itS}] accumulated configuration by configuration.
std::complex<double> char_fn(const LocalSystem& sys, double t, const EnumerationOptions& opts = {});
PmfTable pmf(const LocalSystem& sys, const EnumerationOptions& opts = {});
/// Gibbs probability of every configuration, mixed-radix order with the
/// last site fastest.
std::vector<double> gibbs_probabilities(const LocalSystem& sys, const EnumerationOptions& opts = {});

/// sup_p |sqrt(D) P(S = p) - phi(z(p))| over the lattice of S.
double lclt_gap(const PmfTable& table);
double lclt_gap(const LocalSystem& sys, const EnumerationOptions& opts = {});

struct LabeledBoundary {
  std::string label;
  Boundary boundary;
};

/// Exterior conditions for the decimated measure: all-lo and all-hi constants,
/// `samples` seeded random fields and, when requested and at most
/// `conditional_budget` of them exist, every configuration of the non-decimated
/// box sites combined with the model's own boundary outside the box.
std::vector<LabeledBoundary> omega_family(const GibbsModel& model, int samples, std::uint64_t seed,
                                          bool include_conditional = false,
                                          std::uint64_t conditional_budget = 4096);

struct DecimatedSup {
  double sup = 0.0;          // max over everything evaluated
  double sampled_sup = 0.0;  // extremal + random omegas only
  std::optional<double> conditional_sup;
  std::optional<double> full_box_abs;  // |E^omega_n e^{itS_n}| for the model
  std::size_t omega_count = 0;
};

/// Lower estimate of sup_omega |E~^omega e^{itS~}| under the decimated measure.
DecimatedSup decimated_char_fn_sup(const GibbsModel& model, double t, int omega_samples,
                                   std::uint64_t seed, const EnumerationOptions& opts = {});

}  // namespace lclt
