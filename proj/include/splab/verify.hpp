#pragma once

// Exhaustive and randomized oracle suites. The exhaustive runs enumerate
// every instance in a small universe, so a single failure would witness a
// false statement; they are the strongest tests in the repository.

#include "splab/exact.hpp"
#include "splab/findings.hpp"
#include "splab/grid.hpp"
#include "splab/oracles.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace splab {

struct OracleRunSummary {
  std::string suite;
  std::int64_t instances = 0;
  std::int64_t failures = 0;
  std::vector<Finding> findings;
};

namespace detail {

inline std::vector<std::int64_t> mask_to_elems(std::uint32_t mask) {
  std::vector<std::int64_t> v;
  for (int i = 0; i < 32; ++i)
    if (mask & (1u << i)) v.push_back(i);
  return v;
}

}  // namespace detail

// For every pair of nonempty X, Y inside {0..range-1} with K = #(X+Y)/#X:
// the plain refinement achieves ratio <= K^2 for the double sum, and the
// half-size refinement achieves #X' >= #X/2 with ratio <= 4 K^2.
inline OracleRunSummary verify_plunnecke_exhaustive(int range) {
  if (range < 1 || range > 10)
    throw Error("verify_plunnecke_exhaustive: range must be in 1..10");
  OracleRunSummary sum;
  sum.suite = "plunnecke_exhaustive_range_" + std::to_string(range);
  const std::uint32_t full = (1u << range) - 1;
  for (std::uint32_t xm = 1; xm <= full; ++xm) {
    auto xe = detail::mask_to_elems(xm);
    FiniteGroupSet X = FiniteGroupSet::integers(xe);
    for (std::uint32_t ym = 1; ym <= full; ++ym) {
      FiniteGroupSet Y = FiniteGroupSet::integers(detail::mask_to_elems(ym));
      auto xy = detail::group_sum(X, Y);
      Rat k(static_cast<std::int64_t>(xy.size()),
            static_cast<std::int64_t>(X.size()));
      ++sum.instances;
      try {
        auto plain = plunnecke_refinement(X, {Y, Y}, {k, k}, false);
        if (plain.ratio > k * k) throw TheoremViolation("plain ratio above K^2");
        auto half = plunnecke_refinement(X, {Y, Y}, {k, k}, true);
        if (2 * half.subset.size() < X.size())
          throw TheoremViolation("half-size refinement below #X/2");
        if (half.ratio > Rat(4) * k * k)
          throw TheoremViolation("half-size ratio above 4K^2");
      } catch (const TheoremViolation& e) {
        ++sum.failures;
        sum.findings.push_back({Finding::Severity::theorem_violation,
                                "arithmetic_oracles",
                                "X=" + std::to_string(xm) + " Y=" + std::to_string(ym) +
                                    ": " + e.what()});
      }
    }
  }
  return sum;
}

// Ruzsa triangle inequality over every triple of nonempty subsets of
// {0..range-1}, constant exactly 1.
inline OracleRunSummary verify_ruzsa_exhaustive(int range) {
  if (range < 1 || range > 8)
    throw Error("verify_ruzsa_exhaustive: range must be in 1..8");
  OracleRunSummary sum;
  sum.suite = "ruzsa_exhaustive_range_" + std::to_string(range);
  const std::uint32_t full = (1u << range) - 1;
  std::vector<FiniteGroupSet> sets;
  sets.push_back(FiniteGroupSet::integers({}));
  for (std::uint32_t m = 1; m <= full; ++m)
    sets.push_back(FiniteGroupSet::integers(detail::mask_to_elems(m)));
  for (std::uint32_t xm = 1; xm <= full; ++xm)
    for (std::uint32_t ym = 1; ym <= full; ++ym)
      for (std::uint32_t zm = 1; zm <= full; ++zm) {
        ++sum.instances;
        try {
          ruzsa_triangle_check(sets[xm], sets[ym], sets[zm]);
        } catch (const TheoremViolation& e) {
          ++sum.failures;
          sum.findings.push_back({Finding::Severity::theorem_violation,
                                  "arithmetic_oracles",
                                  "X=" + std::to_string(xm) + " Y=" + std::to_string(ym) +
                                      " Z=" + std::to_string(zm) + ": " + e.what()});
        }
      }
  return sum;
}

namespace detail {

inline GridSet random_grid_set(std::mt19937_64& rng, int L, int npoints) {
  const std::int64_t lo = 1ll << L, hi = 2ll << L;
  std::vector<std::int64_t> idx;
  while (static_cast<int>(idx.size()) < npoints) {
    idx.push_back(lo + static_cast<std::int64_t>(uniform_below(rng, hi - lo)));
    idx = sorted_unique(std::move(idx));
  }
  return GridSet(Scale(L), lo, hi, std::move(idx), true);
}

}  // namespace detail

// Randomized covering-number triangle inequality trials.
inline OracleRunSummary verify_triangle_random(int trials, std::uint64_t seed,
                                               int L, int npoints) {
  OracleRunSummary sum;
  sum.suite = "discretized_triangle_random";
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    GridSet x = detail::random_grid_set(rng, L, npoints);
    GridSet y = detail::random_grid_set(rng, L, npoints);
    GridSet z = detail::random_grid_set(rng, L, npoints);
    ++sum.instances;
    try {
      discretized_triangle(x, y, z, Scale(L));
    } catch (const TheoremViolation& e) {
      ++sum.failures;
      sum.findings.push_back({Finding::Severity::theorem_violation,
                              "arithmetic_oracles",
                              "trial " + std::to_string(t) + ": " + e.what()});
    }
  }
  return sum;
}

}  // namespace splab
