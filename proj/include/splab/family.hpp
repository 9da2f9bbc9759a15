#pragma once

// Set-family generators. All families live on the grid of [1,2) and are
// deterministic given the seed; random draws use a fixed 64-bit engine with
// explicit rejection sampling so results do not depend on the platform.

#include "splab/exact.hpp"
#include "splab/grid.hpp"

#include <cstdint>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace splab {

enum class FamilyKind { cantor, random_nc, ap, gp, custom_file };

inline const char* family_kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::cantor: return "cantor";
    case FamilyKind::random_nc: return "random_nc";
    case FamilyKind::ap: return "ap";
    case FamilyKind::gp: return "gp";
    case FamilyKind::custom_file: return "custom-file";
  }
  return "?";
}

inline FamilyKind family_kind_from_name(const std::string& s) {
  if (s == "cantor") return FamilyKind::cantor;
  if (s == "random_nc") return FamilyKind::random_nc;
  if (s == "ap") return FamilyKind::ap;
  if (s == "gp") return FamilyKind::gp;
  if (s == "custom-file" || s == "custom") return FamilyKind::custom_file;
  throw Error("unknown family kind '" + s + "'");
}

struct FamilySpec {
  std::string name;
  FamilyKind kind = FamilyKind::cantor;
  Rat sigma_target = Rat(1, 2);
  int L = 8;
  std::uint64_t seed = 1;
  // cantor: keep-pattern on 2^arity_log-adic children
  int arity_log = 2;
  std::vector<int> keep = {0, 3};
  // ap
  std::int64_t step = 4;
  // gp
  Rat ratio = Rat(33, 32);
  // random_nc
  Rat nc_threshold = Rat(4);
  int max_attempts = 64;
  // custom-file
  std::string path;
};

inline GridSet generate_family(const FamilySpec& spec) {
  const int L = spec.L;
  if (L < 1) throw Error("generate_family: L must be positive");
  const std::int64_t lo = 1ll << L, hi = 2ll << L;

  switch (spec.kind) {
    case FamilyKind::cantor: {
      const int j = spec.arity_log;
      if (j < 1 || L % j != 0)
        throw Error("generate_family: cantor needs arity_log dividing L");
      if (spec.keep.empty()) throw Error("generate_family: empty keep pattern");
      for (int d : spec.keep)
        if (d < 0 || d >= (1 << j))
          throw Error("generate_family: keep digit out of range");
      const int m = L / j;
      std::vector<std::int64_t> idx = {0};
      for (int level = 0; level < m; ++level) {
        std::vector<std::int64_t> next;
        next.reserve(idx.size() * spec.keep.size());
        if (next.capacity() > (1u << 22))
          throw Error("generate_family: cantor family too large");
        for (auto base : idx)
          for (int d : spec.keep)
            next.push_back((base << j) + d);
        idx = std::move(next);
      }
      for (auto& k : idx) k += lo;
      return GridSet(Scale(L), lo, hi, std::move(idx));
    }

    case FamilyKind::ap: {
      if (spec.step < 1) throw Error("generate_family: step must be positive");
      std::vector<std::int64_t> idx;
      for (std::int64_t k = lo; k < hi; k += spec.step) idx.push_back(k);
      return GridSet(Scale(L), lo, hi, std::move(idx), true);
    }

    case FamilyKind::gp: {
      if (spec.ratio <= 1) throw Error("generate_family: ratio must exceed 1");
      std::vector<std::int64_t> idx;
      Rat v(1);
      while (v < 2) {
        std::int64_t k = to_i64(round_half_up(v * pow2(L)));
        if (k >= hi) break;
        idx.push_back(k);
        v *= spec.ratio;
      }
      return GridSet(Scale(L), lo, hi, std::move(idx));
    }

    case FamilyKind::random_nc: {
      // uniform sampling without replacement, rejected until the observed
      // non-concentration constant clears the threshold; #A = round(2^(L*sigma))
      Int tenths = Pow2Scaled(Rat(1), spec.sigma_target * L).floor_scaled_pow10(1);
      std::int64_t n = to_i64((tenths + 5) / 10);
      if (n < 1) n = 1;
      if (n > hi - lo) n = hi - lo;
      std::mt19937_64 rng(spec.seed);
      Pow2Scaled best_c;
      bool have_best = false;
      for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
        std::set<std::int64_t> chosen;
        while (static_cast<std::int64_t>(chosen.size()) < n)
          chosen.insert(lo + static_cast<std::int64_t>(
                                 detail::uniform_below(rng, hi - lo)));
        GridSet cand(Scale(L), lo, hi,
                     std::vector<std::int64_t>(chosen.begin(), chosen.end()), true);
        auto prof = non_concentration_constant(cand, spec.sigma_target);
        if (prof.c_observed <= Pow2Scaled::from_rational(spec.nc_threshold))
          return cand;
        if (!have_best || prof.c_observed < best_c) {
          best_c = prof.c_observed;
          have_best = true;
        }
      }
      throw Error("generate_family: rejection budget exhausted; best c_observed = " +
                  (have_best ? best_c.decimal(6) : std::string("n/a")));
    }

    case FamilyKind::custom_file: {
      std::ifstream in(spec.path);
      if (!in) throw Error("generate_family: cannot open '" + spec.path + "'");
      GridSet g = GridSet::read(in);
      // re-verify generator postconditions on load
      if (g.empty()) throw Error("generate_family: custom set is empty");
      const std::int64_t glo = 1ll << g.scale().log_inv;
      if (g.ambient_lo() != glo || g.ambient_hi() != 2 * glo)
        throw Error("generate_family: custom set must declare ambient [1,2]");
      return g;
    }
  }
  throw Error("generate_family: unreachable");
}

}  // namespace splab
