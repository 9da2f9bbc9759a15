#pragma once

// Test-only oracles, kept independent of the implementation paths they check:
// brute-force quadruple enumeration, an exact greedy minimal interval cover,
// and deterministic random-set helpers.

#include "splab/exact.hpp"
#include "splab/grid.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace splab::testing {

// Minimal number of closed length-t intervals covering X. Left-to-right
// greedy placement is optimal for interval covering.
inline std::int64_t greedy_interval_cover(const GridSet& x, Scale t) {
  const std::int64_t w = 1ll << (x.scale().log_inv - t.log_inv);
  const auto& idx = x.indices();
  std::int64_t count = 0;
  std::size_t i = 0;
  while (i < idx.size()) {
    ++count;
    std::int64_t end = idx[i] + w;
    while (i < idx.size() && idx[i] <= end) ++i;
  }
  return count;
}

// O(n^4) enumeration of quadruples with |d2(a1-a2) + d1(a4-a3)| <= window.
inline std::int64_t naive_quadruple_count(const GridSet& a, const Rat& d1,
                                          const Rat& d2, const Rat& window) {
  Rat delta = a.scale().delta();
  const auto& idx = a.indices();
  std::int64_t count = 0;
  for (auto a1 : idx)
    for (auto a2 : idx)
      for (auto a3 : idx)
        for (auto a4 : idx) {
          Rat v = d2 * Rat(a1 - a2) * delta + d1 * Rat(a4 - a3) * delta;
          if (v < 0) v = -v;
          if (v <= window) ++count;
        }
  return count;
}

inline GridSet random_set(std::mt19937_64& rng, int L, int npoints) {
  const std::int64_t lo = 1ll << L, hi = 2ll << L;
  std::vector<std::int64_t> idx;
  while (static_cast<int>(idx.size()) < npoints) {
    idx.push_back(lo + static_cast<std::int64_t>(
                           splab::detail::uniform_below(rng, hi - lo)));
    idx = splab::detail::sorted_unique(std::move(idx));
  }
  return GridSet(Scale(L), lo, hi, std::move(idx), true);
}

}  // namespace splab::testing
