#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace lclt {

/// A lattice point of Z^d.
using Site = std::vector<int>;

/// Spin values {lo, lo + step, ..., hi}. step == 1 is an integer interval;
/// step == 2 with lo = -1, hi = 1 gives Ising spins.
class SpinInterval {
 public:
  SpinInterval(int lo, int hi, int step = 1);

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  int step() const { return step_; }
  /// max |s|
  int sigma() const;
  /// number of admissible values
  int card() const { return (hi_ - lo_) / step_ + 1; }
  bool consecutive() const { return step_ == 1; }
  bool contains(int s) const;
  int value(int index) const { return lo_ + index * step_; }
  std::vector<int> values() const;

  friend bool operator==(const SpinInterval&, const SpinInterval&) = default;

 private:
  int lo_;
  int hi_;
  int step_;
};

/// The cube {-radius..radius}^dimension and its sublattice of step r0.
class Box {
 public:
  Box(int dimension, int radius, int r0 = 1);

  int dimension() const { return dimension_; }
  int radius() const { return radius_; }
  int r0() const { return r0_; }
  std::size_t site_count() const;

  /// All sites in lexicographic order.
  std::vector<Site> sites() const;
  /// Sites whose coordinates are all multiples of r0.
  std::vector<Site> decimated_sites() const;
  bool contains(const Site& x) const;

 private:
  int dimension_;
  int radius_;
  int r0_;
};

struct NearestNeighbor {
  double strength;
};

/// J(x, y) = strength / |x - y|^exponent (Euclidean norm), exponent > d.
struct PowerLaw {
  double strength;
  double exponent;
};

/// Finite list of pair couplings; unlisted pairs are uncoupled.
struct ExplicitPairs {
  std::vector<std::tuple<Site, Site, double>> pairs;
};

class Coupling {
 public:
  using Kind = std::variant<NearestNeighbor, PowerLaw, ExplicitPairs>;

  Coupling(Kind kind, int dimension);

  const Kind& kind() const { return kind_; }
  int dimension() const { return dimension_; }
  double operator()(const Site& x, const Site& y) const;
  bool translation_invariant() const;
  /// Upper bound on the sum of |J(x, y)| over |y - x|_inf > radius.
  double tail_bound(int radius) const;
  /// Smallest radius whose tail_bound times `scale` is <= tolerance.
  int radius_for_tail(double scale, double tolerance) const;
  /// Sum over y on the sublattice of step `step` (y != x) of |J(x, y)|,
  /// supremum over lattice sites x. Power-law sums are truncated with a
  /// tail below 1e-13.
  double lattice_norm(int step) const;

  /// Calls f(y, J(x, y)) for every y != x with J(x, y) != 0 and
  /// |y - x|_inf <= window (the window only matters for power laws).
  template <class F>
  void for_each_partner(const Site& x, int window, F&& f) const;

 private:
  Kind kind_;
  int dimension_;
  std::map<Site, std::vector<std::pair<Site, double>>> adjacency_;
  // power-law sum over m != 0 of |J(0, m)|, computed on first use
  struct NormCache {
    std::once_flag once;
    double value = 0.0;
  };
  std::shared_ptr<NormCache> norm_cache_ = std::make_shared<NormCache>();
};

/// Exterior spin assignment omega. A base rule (free, constant, or a seeded
/// random field) plus explicit per-site overrides.
class Boundary {
 public:
  enum class Base { free, constant, random };

  static Boundary free();
  static Boundary constant(int value);
  static Boundary random(std::uint64_t seed);
  static Boundary explicit_sites(std::map<Site, int> assignments);

  Boundary with_overrides(const std::map<Site, int>& overrides) const;

  Base base() const { return base_; }
  int constant_value() const { return value_; }
  std::uint64_t seed() const { return seed_; }
  const std::map<Site, int>& overrides() const { return overrides_; }

  /// Spin at an exterior site, or nullopt when the site carries no spin
  /// (free boundary: the site contributes no field).
  std::optional<int> spin_at(const Site& y, const SpinInterval& spins) const;

 private:
  Base base_ = Base::free;
  int value_ = 0;
  std::uint64_t seed_ = 0;
  std::map<Site, int> overrides_;
};

/// Finite set of sites with O(log n) membership.
class Region {
 public:
  Region() = default;
  explicit Region(std::vector<Site> sites);

  const std::vector<Site>& sites() const { return sites_; }
  std::size_t size() const { return sites_.size(); }
  bool contains(const Site& x) const { return index_.count(x) != 0; }
  std::optional<std::size_t> index_of(const Site& x) const;

 private:
  std::vector<Site> sites_;
  std::map<Site, std::size_t> index_;
};

enum class RegionKind { full, decimated };

/// A region compiled against a coupling and a boundary: dense couplings
/// between region sites and the linear boundary field h_x(s) = s * field[x].
struct LocalSystem {
  std::vector<Site> sites;
  std::vector<double> couplings;  // n x n, row-major, zero diagonal
  std::vector<double> field;
  SpinInterval spins{-1, 1, 2};

  std::size_t size() const { return sites.size(); }
  double coupling(std::size_t i, std::size_t j) const { return couplings[i * size() + j]; }
  /// Single-spin distribution p_x(s) for value index 0..card-1.
  std::vector<double> single_site_probabilities(std::size_t i) const;
  /// sup_i sum_j |J_ij| restricted to the region.
  double internal_norm() const;
};

/// A spin configuration on a region.
struct SpinConfig {
  Region region;
  std::vector<int> values;  // aligned with region.sites()
};

class GibbsModel {
 public:
  /// Validates the model; for power-law couplings selects the truncation
  /// radius so the neglected exterior tail of sum |J| sigma^2 is below 1e-12.
  GibbsModel(Box box, SpinInterval spins, Coupling coupling, Boundary boundary);

  const Box& box() const { return box_; }
  const SpinInterval& spins() const { return spins_; }
  const Coupling& coupling() const { return coupling_; }
  const Boundary& boundary() const { return boundary_; }
  int truncation_radius() const { return truncation_radius_; }

  GibbsModel with_boundary(Boundary boundary) const;
  GibbsModel with_box(Box box) const;

  Region region(RegionKind kind) const;

  /// h^omega_x(s) for x in `region` (exterior = complement of the region).
  double boundary_field(const Region& region, const Boundary& omega, const Site& x, int s) const;
  double boundary_field(RegionKind kind, const Site& x, int s) const;

  /// -H = sum over unordered pairs J s_x s_y + sum_x h_x(s_x).
  double hamiltonian(const SpinConfig& config) const;
  double hamiltonian(const SpinConfig& config, const Boundary& omega) const;

  /// sup_x sum_{y != x} |J(x, y)| over the sublattice of step `step`.
  double interaction_norm(int step) const;

  std::map<int, double> single_spin_distribution(RegionKind kind, const Site& x) const;

  LocalSystem local_system(const Region& region, const Boundary& omega) const;
  LocalSystem local_system(RegionKind kind) const;

 private:
  double field_coefficient(const Region& region, const Boundary& omega, const Site& x) const;

  Box box_;
  SpinInterval spins_;
  Coupling coupling_;
  Boundary boundary_;
  int truncation_radius_ = 1;
  // sum of J(x, y) over all partners in the window (translation-invariant kinds)
  double partner_sum_ = 0.0;
};

/// Lower bound e^{-2 J sigma^2} / |I| on single-spin probabilities.
double kappa(double J, int sigma, int card);

// ---------------------------------------------------------------------------

template <class F>
void Coupling::for_each_partner(const Site& x, int window, F&& f) const {
  if (const auto* nn = std::get_if<NearestNeighbor>(&kind_)) {
    if (nn->strength == 0.0) return;
    Site y = x;
    for (int axis = 0; axis < dimension_; ++axis) {
      for (int dir : {-1, 1}) {
        y[axis] = x[axis] + dir;
        f(static_cast<const Site&>(y), nn->strength);
      }
      y[axis] = x[axis];
    }
  } else if (const auto* pl = std::get_if<PowerLaw>(&kind_)) {
    if (pl->strength == 0.0) return;
    Site offset(dimension_, -window);
    Site y(dimension_);
    while (true) {
      bool origin = true;
      long long norm2 = 0;
      for (int a = 0; a < dimension_; ++a) {
        y[a] = x[a] + offset[a];
        origin = origin && offset[a] == 0;
        norm2 += static_cast<long long>(offset[a]) * offset[a];
      }
      if (!origin) {
        f(static_cast<const Site&>(y),
          pl->strength / std::pow(static_cast<double>(norm2), 0.5 * pl->exponent));
      }
      int a = dimension_ - 1;
      while (a >= 0 && offset[a] == window) offset[a--] = -window;
      if (a < 0) break;
      ++offset[a];
    }
  } else {
    auto it = adjacency_.find(x);
    if (it == adjacency_.end()) return;
    for (const auto& [y, j] : it->second) f(y, j);
  }
}

}  // namespace lclt
