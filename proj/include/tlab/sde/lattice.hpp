#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "tlab/error.hpp"

namespace tlab::sde {

/// Nearest-neighbour graph on {0..L-1}^d, sites in lexicographic order.
struct LatticeGraph {
  int dimension = 1;
  int side = 0;
  bool periodic = true;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> bonds;  ///< each unordered pair once, first < second

  std::size_t sites() const {
    std::size_t n = 1;
    for (int k = 0; k < dimension; ++k) n *= static_cast<std::size_t>(side);
    return n;
  }

  static LatticeGraph make(int dimension, int side, bool periodic = true) {
    require(dimension >= 1 && side >= 1, ErrorKind::invalid_params, "lattice: dimension, side >= 1");
    LatticeGraph g;
    g.dimension = dimension;
    g.side = side;
    g.periodic = periodic;
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    const std::size_t n = g.sites();
    for (std::size_t s = 0; s < n; ++s) {
      std::size_t stride = 1;
      for (int k = 0; k < dimension; ++k) {
        const std::size_t coord = (s / stride) % static_cast<std::size_t>(side);
        std::size_t nb_coord = coord + 1;
        if (nb_coord == static_cast<std::size_t>(side)) {
          if (!periodic) {
            stride *= static_cast<std::size_t>(side);
            continue;
          }
          nb_coord = 0;
        }
        const std::size_t t = s + (nb_coord - coord) * stride;
        if (t != s) {
          const auto a = static_cast<std::uint32_t>(std::min(s, t)), b = static_cast<std::uint32_t>(std::max(s, t));
          if (seen.insert({a, b}).second) g.bonds.emplace_back(a, b);
        }
        stride *= static_cast<std::size_t>(side);
      }
    }
    return g;
  }

  static LatticeGraph chain(int L, bool periodic = true) { return make(1, L, periodic); }

  std::vector<int> degrees() const {
    std::vector<int> d(sites(), 0);
    for (auto [a, b] : bonds) {
      ++d[a];
      ++d[b];
    }
    return d;
  }
};

/// Site energies E_x >= 0.
struct EnergyConfig {
  std::vector<double> E;

  double total() const { return std::accumulate(E.begin(), E.end(), 0.0); }
};

}  // namespace tlab::sde
