#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "lclt/exact.hpp"
#include "lclt/model.hpp"
#include "lclt/montecarlo.hpp"
#include "lclt/verifier.hpp"

namespace lclt {

/// Shared settings of the randomized check families.
struct SuiteOptions {
  std::uint64_t seed = 1;
  CVariant variant = CVariant::proved;
  int t_points = 64;
  int omega_samples = 8;
  EnumerationOptions enumeration;

  CheckOptions check_options() const;
};

/// Generator for the index-th member of a randomized family.
std::mt19937_64 family_rng(std::uint64_t seed, std::uint64_t family, std::uint64_t index);

/// Random explicit couplings |J| <= max_J between all pairs of box sites,
/// plus a ring of exterior sites coupled through the nearest face and
/// carrying random spins; the rest of the exterior is random too.
GibbsModel random_explicit_model(std::mt19937_64& rng, int dimension, int radius, const SpinInterval& spins,
                                 double max_J, int r0 = 1);

VerificationReport make_report(std::string check, nlohmann::ordered_json parameters, double lhs, double rhs,
                               double tolerance, bool enforced = true);

/// Xi computed directly against the polymer sum on random decimated
/// systems with at most five sites, one report per (model, t).
std::vector<VerificationReport> identity_suite(const SuiteOptions& opts, int models = 10, int t_values = 20);

/// Connected-graph counts, Cayley counts and the alternating-factorial
/// identity for the complete overlap graph.
std::vector<VerificationReport> graph_table_suite();

/// Single-spin characteristic-function bound on random models with
/// consecutive spins, one report per model.
std::vector<VerificationReport> prop1_suite(const SuiteOptions& opts, int models = 30);

/// Models satisfying the decimation condition: finite-range couplings
/// decimated beyond their range, and weak couplings at r0 = 1.
std::vector<GibbsModel> lemma_models();

std::vector<VerificationReport> lemma_a_suite(const std::vector<GibbsModel>& models, const SuiteOptions& opts);
std::vector<VerificationReport> lemma_b_suite(const std::vector<GibbsModel>& models, const SuiteOptions& opts);

/// Analytic first and second t-derivatives of activities against
/// five-point differences, and the weight bounds on activities and their
/// derivatives, on random systems with at most four sites.
std::vector<VerificationReport> derivative_suite(const SuiteOptions& opts, int systems = 100);

/// Tree-graph inequality chain on random systems with at most five sites.
std::vector<VerificationReport> tree_graph_suite(const SuiteOptions& opts, int systems = 50);

/// Enumerated w1 norms of decimated long-range chains against the bound.
std::vector<VerificationReport> norm_bound_suite();

/// Cluster series on weak-coupling decimated models.
std::vector<VerificationReport> cluster_suite(const SuiteOptions& opts);

/// Four-integral decomposition of one model (A defaults to delta sqrt(D) / 2).
/// The bounds on the middle integrals are enforced only when the decimation
/// condition and both lemma checks hold.
std::vector<VerificationReport> integral_reports(const GibbsModel& model, std::optional<double> A,
                                                 const SuiteOptions& opts);

/// integral_reports for every model whose full box is enumerable.
std::vector<VerificationReport> integral_suite(const std::vector<GibbsModel>& models, const SuiteOptions& opts);

/// Exact gap and variance-density reports for a family of growing boxes.
/// With `strict` every step must decrease; otherwise one rise is allowed
/// and the last two variance densities must agree to three figures.
std::vector<VerificationReport> exact_trend_suite(const std::vector<GibbsModel>& models, bool strict,
                                                  const EnumerationOptions& enumeration = {});

/// The sampled gap of `large` lies below that of `small` by more than two
/// combined standard errors.
VerificationReport mc_trend_report(const GibbsModel& small, const GibbsModel& large, const ChainSpec& spec);

/// Sampled mean and variance against the exact engine on random enumerable
/// models; one report per trial plus the agreement rate (at least 0.95).
std::vector<VerificationReport> mc_agreement_suite(const SuiteOptions& opts, int trials = 40);

/// The {0,1} chains used for the trend checks.
GibbsModel trend_chain(int sites, double J);

}  // namespace lclt
