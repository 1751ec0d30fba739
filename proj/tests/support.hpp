#pragma once

#include <cstdint>
#include <random>

#include "lclt/model.hpp"

namespace lclt::testing {

inline GibbsModel chain(int radius, double J, SpinInterval spins, Boundary omega = Boundary::free(), int r0 = 1) {
  return GibbsModel(Box(1, radius, r0), spins, Coupling(NearestNeighbor{J}, 1), std::move(omega));
}

inline GibbsModel square(int radius, double J, SpinInterval spins, Boundary omega = Boundary::free(), int r0 = 1) {
  return GibbsModel(Box(2, radius, r0), spins, Coupling(NearestNeighbor{J}, 2), std::move(omega));
}

inline SpinInterval ising() { return SpinInterval(-1, 1, 2); }

/// Small random model with arbitrary explicit couplings on a d-dimensional box.
inline GibbsModel random_model(std::mt19937_64& rng, int dimension, int radius, SpinInterval spins, double max_J,
                               int r0 = 1) {
  Box box(dimension, radius, r0);
  std::uniform_real_distribution<double> u(-max_J, max_J);
  std::vector<std::tuple<Site, Site, double>> pairs;
  const auto sites = box.sites();
  for (std::size_t i = 0; i < sites.size(); ++i)
    for (std::size_t j = i + 1; j < sites.size(); ++j) pairs.emplace_back(sites[i], sites[j], u(rng));
  std::uniform_int_distribution<int> pick(0, spins.card() - 1);
  std::map<Site, int> assign;
  // a ring of exterior sites coupled to the box through the nearest face
  for (const Site& x : sites) {
    Site y = x;
    y[0] = x[0] + (x[0] >= 0 ? radius + 1 : -radius - 1);
    pairs.emplace_back(x, y, u(rng));
    assign[y] = spins.value(pick(rng));
  }
  return GibbsModel(box, spins, Coupling(ExplicitPairs{pairs}, dimension), Boundary::explicit_sites(assign));
}

}  // namespace lclt::testing
