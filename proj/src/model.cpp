#include "lclt/model.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

#include "lclt/errors.hpp"
#include "lclt/numeric.hpp"
#include "lclt/random.hpp"

namespace lclt {

namespace {

constexpr double kFieldTailTolerance = 1e-12;
constexpr double kNormTailTolerance = 1e-13;
constexpr double kMaxWindowSites = 6.7e7;

std::string site_text(const Site& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(x[i]);
  }
  return out + ")";
}

Site ordered_first(const Site& a, const Site& b) { return std::min(a, b); }

// sum over z in Z^d with |z|_inf > radius of |z|_2^{-p}, bounded by shells:
// #{|z|_inf = k} <= 2d (2k+1)^{d-1} <= 2d 3^{d-1} k^{d-1}.
double power_tail(int d, double p, double radius) {
  if (radius < 1.0) return std::numeric_limits<double>::infinity();
  return 2.0 * d * std::pow(3.0, d - 1) * std::pow(radius, d - p) / (p - d);
}

double window_sites(int d, long long radius) { return std::pow(2.0 * radius + 1.0, d); }

}  // namespace

// --- SpinInterval ----------------------------------------------------------

SpinInterval::SpinInterval(int lo, int hi, int step) : lo_(lo), hi_(hi), step_(step) {
  if (step < 1) throw DomainError("spin interval step must be >= 1");
  if (lo >= hi) throw DomainError("spin interval needs lo < hi");
  if ((hi - lo) % step != 0) throw DomainError("spin interval: hi - lo must be a multiple of step");
}

int SpinInterval::sigma() const { return std::max(std::abs(lo_), std::abs(hi_)); }

bool SpinInterval::contains(int s) const {
  return s >= lo_ && s <= hi_ && (s - lo_) % step_ == 0;
}

std::vector<int> SpinInterval::values() const {
  std::vector<int> out;
  for (int s = lo_; s <= hi_; s += step_) out.push_back(s);
  return out;
}

// --- Box --------------------------------------------------------------------

Box::Box(int dimension, int radius, int r0) : dimension_(dimension), radius_(radius), r0_(r0) {
  if (dimension < 1) throw DomainError("box dimension must be >= 1");
  if (radius < 0) throw DomainError("box radius must be >= 0");
  if (r0 < 1) throw DomainError("decimation step r0 must be >= 1");
}

std::size_t Box::site_count() const {
  std::size_t n = 1;
  for (int a = 0; a < dimension_; ++a) n *= static_cast<std::size_t>(2 * radius_ + 1);
  return n;
}

namespace {
std::vector<Site> cube(int d, const std::vector<int>& coords) {
  std::vector<Site> out;
  if (coords.empty()) return out;
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    Site x(d);
    for (int a = 0; a < d; ++a) x[a] = coords[idx[a]];
    out.push_back(std::move(x));
    int a = d - 1;
    while (a >= 0 && idx[a] + 1 == coords.size()) idx[a--] = 0;
    if (a < 0) break;
    ++idx[a];
  }
  return out;
}
}  // namespace

std::vector<Site> Box::sites() const {
  std::vector<int> coords;
  for (int c = -radius_; c <= radius_; ++c) coords.push_back(c);
  return cube(dimension_, coords);
}

std::vector<Site> Box::decimated_sites() const {
  std::vector<int> coords;
  for (int c = -radius_; c <= radius_; ++c)
    if (c % r0_ == 0) coords.push_back(c);
  return cube(dimension_, coords);
}

bool Box::contains(const Site& x) const {
  if (static_cast<int>(x.size()) != dimension_) return false;
  return std::all_of(x.begin(), x.end(), [&](int c) { return c >= -radius_ && c <= radius_; });
}

// --- Coupling ---------------------------------------------------------------

Coupling::Coupling(Kind kind, int dimension) : kind_(std::move(kind)), dimension_(dimension) {
  if (dimension < 1) throw DomainError("coupling dimension must be >= 1");
  if (const auto* pl = std::get_if<PowerLaw>(&kind_)) {
    if (!(pl->exponent > dimension))
      throw DomainError("power-law exponent must exceed the dimension for absolute summability");
  }
  if (const auto* ex = std::get_if<ExplicitPairs>(&kind_)) {
    std::map<std::pair<Site, Site>, double> seen;
    for (const auto& [x, y, j] : ex->pairs) {
      if (static_cast<int>(x.size()) != dimension || static_cast<int>(y.size()) != dimension)
        throw DomainError("explicit coupling site has wrong dimension");
      if (x == y) throw DomainError("explicit coupling on a self pair " + site_text(x));
      auto key = std::make_pair(ordered_first(x, y), std::max(x, y));
      if (auto it = seen.find(key); it != seen.end()) {
        if (it->second != j) throw DomainError("explicit coupling lists a pair twice with different values");
        continue;
      }
      seen.emplace(key, j);
      if (j == 0.0) continue;
      adjacency_[x].emplace_back(y, j);
      adjacency_[y].emplace_back(x, j);
    }
  }
}

double Coupling::operator()(const Site& x, const Site& y) const {
  if (x == y) return 0.0;
  if (const auto* nn = std::get_if<NearestNeighbor>(&kind_)) {
    int l1 = 0;
    for (int a = 0; a < dimension_; ++a) l1 += std::abs(x[a] - y[a]);
    return l1 == 1 ? nn->strength : 0.0;
  }
  if (const auto* pl = std::get_if<PowerLaw>(&kind_)) {
    double n2 = 0.0;
    for (int a = 0; a < dimension_; ++a) n2 += static_cast<double>(x[a] - y[a]) * (x[a] - y[a]);
    return pl->strength / std::pow(n2, 0.5 * pl->exponent);
  }
  auto it = adjacency_.find(x);
  if (it == adjacency_.end()) return 0.0;
  for (const auto& [z, j] : it->second)
    if (z == y) return j;
  return 0.0;
}

bool Coupling::translation_invariant() const { return !std::holds_alternative<ExplicitPairs>(kind_); }

double Coupling::tail_bound(int radius) const {
  if (const auto* nn = std::get_if<NearestNeighbor>(&kind_)) {
    return radius >= 1 ? 0.0 : 2.0 * dimension_ * std::abs(nn->strength);
  }
  if (const auto* pl = std::get_if<PowerLaw>(&kind_)) {
    return std::abs(pl->strength) * power_tail(dimension_, pl->exponent, radius);
  }
  return 0.0;  // explicit partners are always enumerated in full
}

int Coupling::radius_for_tail(double scale, double tolerance) const {
  const auto* pl = std::get_if<PowerLaw>(&kind_);
  if (!pl) return 1;
  if (pl->strength == 0.0 || scale == 0.0) return 1;
  const double d = dimension_;
  const double c = std::abs(pl->strength) * scale * 2.0 * d * std::pow(3.0, d - 1) / (pl->exponent - d);
  double r = std::ceil(std::pow(c / tolerance, 1.0 / (pl->exponent - d)));
  r = std::max(r, 1.0);
  while (r > 1.0 && scale * tail_bound(static_cast<int>(r) - 1) <= tolerance) r -= 1.0;
  if (window_sites(dimension_, static_cast<long long>(r)) > kMaxWindowSites)
    throw CapacityError("power-law truncation needs radius " + std::to_string(static_cast<long long>(r)) +
                        " in d=" + std::to_string(dimension_) + ", window too large");
  return static_cast<int>(r);
}

double Coupling::lattice_norm(int step) const {
  if (step < 1) throw DomainError("lattice step must be >= 1");
  if (const auto* nn = std::get_if<NearestNeighbor>(&kind_)) {
    return step == 1 ? 2.0 * dimension_ * std::abs(nn->strength) : 0.0;
  }
  if (const auto* pl = std::get_if<PowerLaw>(&kind_)) {
    if (pl->strength == 0.0) return 0.0;
    // sum over m != 0 of |strength| step^{-p} |m|^{-p}
    const double scale = std::pow(static_cast<double>(step), -pl->exponent);
    std::call_once(norm_cache_->once, [&] {
      const int window = radius_for_tail(1.0, kNormTailTolerance);
      std::vector<double> terms;
      for_each_partner(Site(dimension_, 0), window, [&](const Site&, double j) { terms.push_back(std::abs(j)); });
      // accumulate from the far shells inwards for accuracy
      std::sort(terms.begin(), terms.end());
      CompensatedSum sum;
      for (double t : terms) sum.add(t);
      norm_cache_->value = sum.value();
    });
    return norm_cache_->value * scale;
  }
  double best = 0.0;
  for (const auto& [x, partners] : adjacency_) {
    if (std::any_of(x.begin(), x.end(), [&](int c) { return c % step != 0; })) continue;
    CompensatedSum s;
    for (const auto& [y, j] : partners) {
      if (std::all_of(y.begin(), y.end(), [&](int c) { return c % step == 0; })) s.add(std::abs(j));
    }
    best = std::max(best, s.value());
  }
  return best;
}

// --- Boundary ---------------------------------------------------------------

Boundary Boundary::free() { return Boundary{}; }

Boundary Boundary::constant(int value) {
  Boundary b;
  b.base_ = Base::constant;
  b.value_ = value;
  return b;
}

Boundary Boundary::random(std::uint64_t seed) {
  Boundary b;
  b.base_ = Base::random;
  b.seed_ = seed;
  return b;
}

Boundary Boundary::explicit_sites(std::map<Site, int> assignments) {
  Boundary b;
  b.overrides_ = std::move(assignments);
  return b;
}

Boundary Boundary::with_overrides(const std::map<Site, int>& overrides) const {
  Boundary b = *this;
  for (const auto& [x, v] : overrides) b.overrides_[x] = v;
  return b;
}

std::optional<int> Boundary::spin_at(const Site& y, const SpinInterval& spins) const {
  if (auto it = overrides_.find(y); it != overrides_.end()) return it->second;
  switch (base_) {
    case Base::free:
      return std::nullopt;
    case Base::constant:
      return value_;
    case Base::random: {
      std::uint64_t h = 0x9E3779B97F4A7C15ull ^ y.size();
      for (int c : y) {
        h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
      }
      const Philox4x32 gen(seed_);
      const auto u = gen.uniforms(static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                                  0xB0B0u, static_cast<std::uint32_t>(y.size()));
      const int idx = std::min(spins.card() - 1, static_cast<int>(u[0] * spins.card()));
      return spins.value(idx);
    }
  }
  return std::nullopt;
}

// --- Region / LocalSystem ---------------------------------------------------

Region::Region(std::vector<Site> sites) : sites_(std::move(sites)) {
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (!index_.emplace(sites_[i], i).second) throw DomainError("region lists a site twice: " + site_text(sites_[i]));
  }
}

std::optional<std::size_t> Region::index_of(const Site& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> LocalSystem::single_site_probabilities(std::size_t i) const {
  const int m = spins.card();
  std::vector<double> p(m);
  // shift by the largest exponent to keep every term <= 1
  double top = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k) top = std::max(top, field[i] * spins.value(k));
  CompensatedSum z;
  for (int k = 0; k < m; ++k) {
    p[k] = std::exp(field[i] * spins.value(k) - top);
    z.add(p[k]);
  }
  for (double& v : p) v /= z.value();
  return p;
}

double LocalSystem::internal_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < size(); ++j) s += std::abs(coupling(i, j));
    best = std::max(best, s);
  }
  return best;
}

// --- GibbsModel -------------------------------------------------------------

GibbsModel::GibbsModel(Box box, SpinInterval spins, Coupling coupling, Boundary boundary)
    : box_(std::move(box)), spins_(spins), coupling_(std::move(coupling)), boundary_(std::move(boundary)) {
  if (coupling_.dimension() != box_.dimension()) throw DomainError("coupling and box dimensions differ");
  if (boundary_.base() == Boundary::Base::constant && !spins_.contains(boundary_.constant_value()))
    throw DomainError("constant boundary value lies outside the spin interval");
  for (const auto& [x, v] : boundary_.overrides()) {
    if (!spins_.contains(v)) throw DomainError("boundary spin at " + site_text(x) + " lies outside the spin interval");
    if (static_cast<int>(x.size()) != box_.dimension()) throw DomainError("boundary site has wrong dimension");
  }
  const double s2 = static_cast<double>(spins_.sigma()) * spins_.sigma();
  truncation_radius_ = coupling_.radius_for_tail(s2, kFieldTailTolerance);
  if (coupling_.translation_invariant()) {
    CompensatedSum sum;
    coupling_.for_each_partner(Site(box_.dimension(), 0), truncation_radius_,
                               [&](const Site&, double j) { sum.add(j); });
    partner_sum_ = sum.value();
  }
}

GibbsModel GibbsModel::with_boundary(Boundary boundary) const {
  GibbsModel m = *this;
  m.boundary_ = std::move(boundary);
  return m;
}

GibbsModel GibbsModel::with_box(Box box) const {
  return GibbsModel(std::move(box), spins_, coupling_, boundary_);
}

Region GibbsModel::region(RegionKind kind) const {
  return Region(kind == RegionKind::full ? box_.sites() : box_.decimated_sites());
}

double GibbsModel::field_coefficient(const Region& region, const Boundary& omega, const Site& x) const {
  if (omega.base() == Boundary::Base::free && omega.overrides().empty()) return 0.0;
  if (omega.base() == Boundary::Base::constant && omega.overrides().empty() &&
      coupling_.translation_invariant()) {
    // c * (all partners - partners inside the region)
    CompensatedSum inside;
    for (const Site& y : region.sites()) {
      if (y == x) continue;
      int dist = 0;
      for (std::size_t a = 0; a < y.size(); ++a) dist = std::max(dist, std::abs(y[a] - x[a]));
      if (dist <= truncation_radius_) inside.add(coupling_(x, y));
    }
    return omega.constant_value() * (partner_sum_ - inside.value());
  }
  CompensatedSum sum;
  coupling_.for_each_partner(x, truncation_radius_, [&](const Site& y, double j) {
    if (region.contains(y)) return;
    if (auto s = omega.spin_at(y, spins_)) sum.add(j * *s);
  });
  return sum.value();
}

double GibbsModel::boundary_field(const Region& region, const Boundary& omega, const Site& x, int s) const {
  if (!region.contains(x)) throw DomainError("site " + site_text(x) + " is outside the region");
  return s * field_coefficient(region, omega, x);
}

double GibbsModel::boundary_field(RegionKind kind, const Site& x, int s) const {
  return boundary_field(region(kind), boundary_, x, s);
}

double GibbsModel::hamiltonian(const SpinConfig& config) const { return hamiltonian(config, boundary_); }

double GibbsModel::hamiltonian(const SpinConfig& config, const Boundary& omega) const {
  const auto& sites = config.region.sites();
  auto same_set = [&](RegionKind kind) {
    const Region r = region(kind);
    if (r.size() != sites.size()) return false;
    return std::all_of(sites.begin(), sites.end(), [&](const Site& x) { return r.contains(x); });
  };
  if (!same_set(RegionKind::full) && !same_set(RegionKind::decimated))
    throw DomainError("configuration region is neither the box nor its decimated sublattice");
  if (config.values.size() != sites.size()) throw DomainError("configuration has the wrong number of values");
  for (int v : config.values)
    if (!spins_.contains(v)) throw DomainError("configuration value outside the spin interval");

  const LocalSystem sys = local_system(config.region, omega);
  CompensatedSum minus_h;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    for (std::size_t j = i + 1; j < sys.size(); ++j)
      minus_h.add(sys.coupling(i, j) * config.values[i] * config.values[j]);
    minus_h.add(sys.field[i] * config.values[i]);
  }
  return minus_h.value();
}

double GibbsModel::interaction_norm(int step) const { return coupling_.lattice_norm(step); }

std::map<int, double> GibbsModel::single_spin_distribution(RegionKind kind, const Site& x) const {
  const Region r = region(kind);
  if (!r.contains(x)) throw DomainError("site " + site_text(x) + " is outside the region");
  LocalSystem one;
  one.sites = {x};
  one.couplings = {0.0};
  one.field = {field_coefficient(r, boundary_, x)};
  one.spins = spins_;
  const auto p = one.single_site_probabilities(0);
  std::map<int, double> out;
  for (int k = 0; k < spins_.card(); ++k) out[spins_.value(k)] = p[k];
  return out;
}

LocalSystem GibbsModel::local_system(const Region& region, const Boundary& omega) const {
  LocalSystem sys;
  sys.sites = region.sites();
  sys.spins = spins_;
  const std::size_t n = sys.sites.size();
  sys.couplings.assign(n * n, 0.0);
  sys.field.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = coupling_(sys.sites[i], sys.sites[j]);
      sys.couplings[i * n + j] = v;
      sys.couplings[j * n + i] = v;
    }
    sys.field[i] = field_coefficient(region, omega, sys.sites[i]);
  }
  return sys;
}

LocalSystem GibbsModel::local_system(RegionKind kind) const { return local_system(region(kind), boundary_); }

double kappa(double J, int sigma, int card) {
  if (J < 0.0 || sigma < 1 || card < 2) throw DomainError("kappa needs J >= 0, sigma >= 1, |I| >= 2");
  return std::exp(-2.0 * J * sigma * sigma) / card;
}

}  // namespace lclt
