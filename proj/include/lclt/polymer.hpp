#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "lclt/exact.hpp"
#include "lclt/model.hpp"

namespace lclt {

/// Nonempty set of region sites, as a bitset over PolymerSystem indices.
using Polymer = std::uint64_t;

inline constexpr int kMaxPolymerSize = 8;
inline constexpr int kMaxPolymerRegion = 8;

/// Plain activities carry single-site polymers; dressed ones (weight
/// e^{c|R|}) exist only for |R| >= 2. At c = 0 the two differ in exactly
/// that respect.
struct ActivityParams {
  double t = 0.0;
  double c = 0.0;
  bool dressed = false;

  static ActivityParams plain(double t);
  static ActivityParams with_dressing(double t, double c);
};

struct ActivityJet {
  std::complex<double> value;
  std::complex<double> d1;
  std::complex<double> d2;
};

enum class PartitionMode { direct, polymer_sum };
enum class WeightKind { w0, w1, wc };

/// xi_t(R) = sum over S of coefficient(S) e^{itS}; t-independent.
struct PolymerSpectrum {
  std::vector<std::pair<int, double>> terms;
  /// sum over spin configurations of prod p_x |connected graph sum| (|R| >= 2)
  double abs_mass = 0.0;
};

/// A region of decimated sites together with its single-spin distributions
/// p_x and internal couplings. Spectra are memoized per polymer.
class PolymerSystem {
 public:
  explicit PolymerSystem(LocalSystem sys, EnumerationOptions opts = {});
  /// The decimated box of `model` under exterior condition `omega`.
  static PolymerSystem decimated(const GibbsModel& model, const Boundary& omega, EnumerationOptions opts = {});

  const LocalSystem& local() const { return sys_; }
  std::size_t size() const { return sys_.size(); }
  int sigma() const { return sys_.spins.sigma(); }
  Polymer all_sites() const;
  Polymer polymer(const std::vector<Site>& sites) const;
  /// Sites of `region` keep their distributions p_x; couplings to the rest
  /// of the system are dropped.
  PolymerSystem restrict_to(Polymer region) const;
  /// p_x(s) for value index 0..card-1.
  const std::vector<double>& single_site(std::size_t i) const { return single_[i]; }

  const PolymerSpectrum& spectrum(Polymer R) const;
  std::complex<double> activity(const ActivityParams& params, Polymer R) const;
  ActivityJet activity_jet(const ActivityParams& params, Polymer R) const;

  double weight_w0(Polymer R, double delta) const;
  double weight_w1(Polymer R, double delta) const;
  double weight_wc(Polymer R, double delta, double c) const;
  double weight(WeightKind kind, Polymer R, double delta, double c) const;
  /// sup_x sum_{R containing x, |R| = k} w(R).
  double weight_norm(int k, WeightKind kind, double delta, double c) const;
  /// Same with |activity| in place of the weight; dressed polymers of size 1
  /// contribute nothing.
  double activity_norm(int k, const ActivityParams& params) const;

  std::complex<double> partition(const ActivityParams& params, PartitionMode mode) const;
  /// Xi(t) / Xi(0) from the polymer representation.
  std::complex<double> char_fn_ratio(double t) const;

  /// log Xi along the segment from 0 to params.t, following the branch
  /// that is real at 0 (Xi(0) must be positive).
  std::complex<double> continuous_log(const ActivityParams& params, int min_steps = 64) const;

  const EnumerationOptions& options() const { return opts_; }

 private:
  LocalSystem sys_;
  EnumerationOptions opts_;
  std::vector<std::vector<double>> single_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

int polymer_size(Polymer R);
std::vector<std::size_t> polymer_sites(Polymer R);

struct ConvergenceResult {
  bool satisfied = false;
  double lhs = 0.0;
  double rhs = 0.0;
  /// false when the norms beyond the listed orders were not bounded
  bool tail_certified = false;
};

/// sum_k w^(k) e^{ak} <= e^a - 1. When `tail_base` is given, w^(k) <=
/// tail_base^k is assumed for k beyond the largest listed order and the
/// geometric remainder is added (infinite when tail_base e^a >= 1).
ConvergenceResult convergence_check(const std::map<int, double>& weight_norms, double a,
                                    std::optional<double> tail_base = std::nullopt);

struct ClusterSeriesResult {
  int truncation_order = 0;
  std::vector<std::complex<double>> order_terms;
  std::vector<std::complex<double>> partial_sums;
  /// bound on the sum of the absolute series beyond the truncation order;
  /// infinite when no convergence certificate was found
  double dominating_tail = 0.0;
  std::uint64_t clusters_evaluated = 0;
};

inline constexpr std::uint64_t kMaxClusterTuples = 60'000'000;
inline constexpr int kMaxClusterOrder = 6;

/// Truncated cluster expansion of log Xi over all polymers of the system.
/// With `absolute` every factor is replaced by its modulus.
ClusterSeriesResult truncated_log_partition(const PolymerSystem& sys, const ActivityParams& params, int K,
                                            bool absolute = false);

/// Tail of the absolute cluster series beyond order K: if the scaled
/// activities rho|xi| satisfy the convergence criterion with exponent a, the
/// order-k absolute terms are at most a N rho^{-k}. Minimized over (a, rho).
double cluster_tail_bound(const PolymerSystem& sys, const ActivityParams& params, int K);

/// Sum of the absolute cluster series, -log of the hard-core partition
/// function at activities -|xi|. nullopt if that function is not positive
/// along the whole segment (the series then diverges).
std::optional<double> absolute_log_resummed(const PolymerSystem& sys, const ActivityParams& params);

struct TreeGraphCheck {
  // values at the spin configuration with the smallest margin
  double lhs = 0.0;
  double rhs_trees = 0.0;
  double rhs_J = 0.0;
  double min_margin_trees = 0.0;  // min over configs of rhs_trees - lhs
  double min_margin_J = 0.0;      // min over configs of rhs_J - rhs_trees
  std::uint64_t configurations = 0;
  std::uint64_t violations = 0;
};

/// Tree-graph inequality chain for every spin configuration on R (|R| <= 6).
TreeGraphCheck tree_graph_bound_check(const PolymerSystem& sys, Polymer R, double J_r0);

struct StabilityCheck {
  double min_energy = 0.0;  // min over configs of sum_{pairs in R} J s s
  double bound = 0.0;       // -|R| J_r0 sigma^2 / 2
  bool holds = false;
};
StabilityCheck stability_check(const PolymerSystem& sys, Polymer R, double J_r0);

enum class Bo2Form {
  tree_sum,   // e^{ck}(1+ds)^k e^{kJs^2/2} s^{2k-2} J^{k-1} k^{k-2}/(k-1)!
  factored,   // [(1+ds) e^{1+c} e^{Js^2/2} s^2 sqrt(J)]^k
  majorized   // [2 e^{1+c} e^{Js^2/2} s^2 sqrt(J)]^k
};

/// Bound on the size-k weight norm of e^{c|R|} w0(R); c = 1 bounds w1.
double norm_bound_bo2(int k, double delta, double sigma, double J_r0, double c, Bo2Form form);

/// CSV rows "k,partial_re,partial_im,tail".
void write_cluster_series_csv(std::ostream& out, const ClusterSeriesResult& series);

}  // namespace lclt
