#pragma once

// Executable verification of the additive-combinatorics toolbox: Plunnecke's
// sumset inequality, its half-size refinement, the Ruzsa triangle inequality,
// and delta-covering versions of all three. On small instances the subset
// searches are exhaustive and double as theorem oracles.

#include "splab/exact.hpp"
#include "splab/findings.hpp"
#include "splab/grid.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

namespace splab {

// A finite subset of Z_n (modulus set) or of the integers (modulus empty).
struct FiniteGroupSet {
  std::optional<std::int64_t> modulus;
  std::vector<std::int64_t> elems;  // sorted, unique, reduced mod n

  static FiniteGroupSet integers(std::vector<std::int64_t> v) {
    return FiniteGroupSet{std::nullopt, detail::sorted_unique(std::move(v))};
  }
  static FiniteGroupSet modular(std::int64_t n, std::vector<std::int64_t> v) {
    if (n <= 0) throw Error("FiniteGroupSet: modulus must be positive");
    for (auto& e : v) e = ((e % n) + n) % n;
    return FiniteGroupSet{n, detail::sorted_unique(std::move(v))};
  }
  std::size_t size() const { return elems.size(); }
  bool empty() const { return elems.empty(); }
};

namespace detail {

inline void require_same_group(const FiniteGroupSet& a, const FiniteGroupSet& b,
                               const char* op) {
  if (a.modulus != b.modulus) throw Error(std::string(op) + ": group mismatch");
}

inline FiniteGroupSet group_sum(const FiniteGroupSet& a, const FiniteGroupSet& b) {
  require_same_group(a, b, "group_sum");
  std::vector<std::int64_t> out;
  out.reserve(a.size() * b.size());
  for (auto x : a.elems)
    for (auto y : b.elems)
      out.push_back(a.modulus ? (x + y) % *a.modulus : x + y);
  return FiniteGroupSet{a.modulus, sorted_unique(std::move(out))};
}

inline FiniteGroupSet group_difference(const FiniteGroupSet& a, const FiniteGroupSet& b) {
  require_same_group(a, b, "group_difference");
  std::vector<std::int64_t> out;
  out.reserve(a.size() * b.size());
  for (auto x : a.elems)
    for (auto y : b.elems)
      out.push_back(a.modulus ? ((x - y) % *a.modulus + *a.modulus) % *a.modulus
                              : x - y);
  return FiniteGroupSet{a.modulus, sorted_unique(std::move(out))};
}

// Flat bitmask words over a fixed value window; used by the subset searches.
struct MaskSpace {
  std::int64_t lo = 0;
  std::size_t nwords = 0;
  std::vector<std::uint64_t> build(const std::vector<std::int64_t>& values) const {
    std::vector<std::uint64_t> w(nwords, 0);
    for (auto v : values) {
      std::uint64_t off = static_cast<std::uint64_t>(v - lo);
      w[off >> 6] |= 1ull << (off & 63);
    }
    return w;
  }
};

inline std::int64_t popcount_words(const std::uint64_t* w, std::size_t n) {
  std::int64_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += __builtin_popcountll(w[i]);
  return c;
}

}  // namespace detail

struct PlunneckeOptions {
  std::size_t exhaustive_max = 20;    // exhaustive subset search up to this #X
  Rat half_budget = Rat(4);           // slack constant for the half-size form
  Rat cell_budget_per_set = Rat(8);   // covering-proxy slack, per summand set
};

struct RefinementResult {
  FiniteGroupSet subset;
  Rat ratio;                          // #(subset + Y1 + ... + Yk) / #subset
  enum class Method { exhaustive, ratio_greedy } method;
  bool half_size = false;
  std::vector<std::size_t> peel_sizes;  // piece sizes, greedy path only
  std::vector<Finding> findings;
};

namespace detail {

// Shifted masks S + x for every x in X over a common window; the k-fold sum
// of a subset is the OR of its masks.
struct SubsetSumKernel {
  MaskSpace space;
  std::vector<std::vector<std::uint64_t>> shifted;  // one mask per element of X

  SubsetSumKernel(const FiniteGroupSet& X, const FiniteGroupSet& S) {
    if (X.modulus) {
      space.lo = 0;
      space.nwords = static_cast<std::size_t>((*X.modulus + 63) / 64);
      for (auto x : X.elems) {
        std::vector<std::int64_t> vals;
        vals.reserve(S.size());
        for (auto s : S.elems) vals.push_back((x + s) % *X.modulus);
        shifted.push_back(space.build(vals));
      }
    } else {
      std::int64_t lo = X.elems.front() + S.elems.front();
      std::int64_t hi = X.elems.back() + S.elems.back();
      space.lo = lo;
      space.nwords = static_cast<std::size_t>((hi - lo) / 64 + 1);
      for (auto x : X.elems) {
        std::vector<std::int64_t> vals;
        vals.reserve(S.size());
        for (auto s : S.elems) vals.push_back(x + s);
        shifted.push_back(space.build(vals));
      }
    }
  }

  // #(P + S) for the subset encoded by bits of `mask`.
  std::int64_t sum_count(std::uint32_t mask, std::vector<std::uint64_t>& scratch) const {
    std::fill(scratch.begin(), scratch.end(), 0);
    while (mask) {
      unsigned i = static_cast<unsigned>(__builtin_ctz(mask));
      const auto& w = shifted[i];
      for (std::size_t j = 0; j < w.size(); ++j) scratch[j] |= w[j];
      mask &= mask - 1;
    }
    return popcount_words(scratch.data(), scratch.size());
  }
};

inline FiniteGroupSet subset_from_mask(const FiniteGroupSet& X, std::uint32_t mask) {
  std::vector<std::int64_t> e;
  for (std::size_t i = 0; i < X.size(); ++i)
    if (mask & (1u << i)) e.push_back(X.elems[i]);
  return FiniteGroupSet{X.modulus, std::move(e)};
}

// Minimal #(P+S)/#P over all subsets P of X with #P >= min_size. Returns the
// first minimizer in ascending mask order.
inline std::pair<std::uint32_t, Rat> exhaustive_min_ratio(
    const FiniteGroupSet& X, const FiniteGroupSet& S, std::size_t min_size) {
  SubsetSumKernel kernel(X, S);
  std::vector<std::uint64_t> scratch(kernel.space.nwords, 0);
  const std::uint32_t full = (1u << X.size()) - 1;  // callers cap #X <= 25
  std::uint32_t best_mask = 0;
  Rat best_ratio;
  for (std::uint32_t m = 1; m <= full; ++m) {
    std::size_t sz = static_cast<std::size_t>(__builtin_popcount(m));
    if (sz < min_size) continue;
    Rat ratio(kernel.sum_count(m, scratch), static_cast<std::int64_t>(sz));
    if (best_mask == 0 || ratio < best_ratio) {
      best_mask = m;
      best_ratio = ratio;
    }
  }
  return {best_mask, best_ratio};
}

// Petridis-style deterministic sampling: prefixes of X in ascending order,
// minimizing the ratio against Y1 only. The running union (prefix + Y1)
// grows incrementally, one shifted mask per added element.
inline FiniteGroupSet greedy_min_ratio_piece(const FiniteGroupSet& X,
                                             const FiniteGroupSet& Y1) {
  MaskSpace space;
  if (X.modulus) {
    space.lo = 0;
    space.nwords = static_cast<std::size_t>((*X.modulus + 63) / 64);
  } else {
    space.lo = X.elems.front() + Y1.elems.front();
    std::int64_t hi = X.elems.back() + Y1.elems.back();
    space.nwords = static_cast<std::size_t>((hi - space.lo) / 64 + 1);
  }
  std::vector<std::uint64_t> acc(space.nwords, 0);
  std::int64_t filled = 0;
  std::size_t best_len = 1;
  Rat best_ratio;
  bool first = true;
  for (std::size_t len = 1; len <= X.size(); ++len) {
    std::int64_t x = X.elems[len - 1];
    for (auto y : Y1.elems) {
      std::int64_t v = X.modulus ? (x + y) % *X.modulus : x + y;
      std::uint64_t off = static_cast<std::uint64_t>(v - space.lo);
      std::uint64_t bit = 1ull << (off & 63);
      if (!(acc[off >> 6] & bit)) {
        acc[off >> 6] |= bit;
        ++filled;
      }
    }
    Rat ratio(filled, static_cast<std::int64_t>(len));
    if (first || ratio < best_ratio) {
      first = false;
      best_ratio = ratio;
      best_len = len;
    }
  }
  return FiniteGroupSet{X.modulus,
                        {X.elems.begin(), X.elems.begin() + best_len}};
}

}  // namespace detail

// Plunnecke refinement. With require_half = false this realizes the plain
// form: some nonempty X' in X has #(X' + Y1 + ... + Yk) <= (prod K_i) #X'.
// With require_half = true it additionally demands #X' >= #X/2; the subset
// search is then guaranteed to succeed at constant 2^k (peeling argument),
// and results beyond the configured half_budget are reported as findings.
inline RefinementResult plunnecke_refinement(const FiniteGroupSet& X,
                                             const std::vector<FiniteGroupSet>& Ys,
                                             const std::vector<Rat>& Ks,
                                             bool require_half,
                                             const PlunneckeOptions& opts = {}) {
  if (X.empty()) throw Error("plunnecke_refinement: X is empty");
  if (Ys.empty() || Ys.size() != Ks.size())
    throw Error("plunnecke_refinement: need one K per Y");
  Rat prod_k(1);
  for (std::size_t i = 0; i < Ys.size(); ++i) {
    detail::require_same_group(X, Ys[i], "plunnecke_refinement");
    if (Ys[i].empty()) throw Error("plunnecke_refinement: empty Y");
    auto sum = detail::group_sum(X, Ys[i]);
    if (Rat(static_cast<std::int64_t>(sum.size())) >
        Ks[i] * static_cast<std::int64_t>(X.size()))
      throw HypothesisViolation(
          "plunnecke_refinement: #(X+Y_" + std::to_string(i + 1) + ") = " +
          std::to_string(sum.size()) + " exceeds K*#X = " +
          format_rational(Ks[i] * static_cast<std::int64_t>(X.size())));
    prod_k *= Ks[i];
  }
  FiniteGroupSet S = Ys[0];
  for (std::size_t i = 1; i < Ys.size(); ++i) S = detail::group_sum(S, Ys[i]);
  const unsigned k = static_cast<unsigned>(Ys.size());

  RefinementResult res;
  res.half_size = require_half;
  if (X.size() <= opts.exhaustive_max && X.size() <= 25) {
    std::size_t min_size = require_half ? (X.size() + 1) / 2 : 1;
    auto [mask, ratio] = detail::exhaustive_min_ratio(X, S, min_size);
    res.subset = detail::subset_from_mask(X, mask);
    res.ratio = ratio;
    res.method = RefinementResult::Method::exhaustive;
    Rat provable = require_half ? Rat(pow2(k)) * prod_k : prod_k;
    if (ratio > provable)
      throw TheoremViolation(
          "plunnecke_refinement: exhaustive minimum ratio " +
          format_rational(ratio) + " exceeds provable bound " +
          format_rational(provable));
    if (require_half && ratio > opts.half_budget * prod_k)
      res.findings.push_back(
          {Finding::Severity::budget_violation, "arithmetic_oracles",
           "half-size refinement ratio " + format_rational(ratio) +
               " exceeds budget " + format_rational(opts.half_budget * prod_k)});
    return res;
  }

  // Greedy path: minimal-ratio piece selection with iterative peeling.
  res.method = RefinementResult::Method::ratio_greedy;
  if (!require_half) {
    res.subset = detail::greedy_min_ratio_piece(X, Ys[0]);
  } else {
    std::vector<std::int64_t> accumulated;
    FiniteGroupSet rest = X;
    while (accumulated.size() * 2 < X.size()) {
      FiniteGroupSet piece = detail::greedy_min_ratio_piece(rest, Ys[0]);
      res.peel_sizes.push_back(piece.size());
      accumulated.insert(accumulated.end(), piece.elems.begin(), piece.elems.end());
      std::vector<std::int64_t> remain;
      std::set_difference(rest.elems.begin(), rest.elems.end(),
                          piece.elems.begin(), piece.elems.end(),
                          std::back_inserter(remain));
      rest = FiniteGroupSet{X.modulus, std::move(remain)};
    }
    res.subset = FiniteGroupSet{X.modulus, detail::sorted_unique(std::move(accumulated))};
  }
  auto sum = detail::group_sum(res.subset, S);
  res.ratio = Rat(static_cast<std::int64_t>(sum.size()),
                  static_cast<std::int64_t>(res.subset.size()));
  Rat budget = (require_half ? opts.half_budget : Rat(1)) * prod_k;
  if (res.ratio > budget)
    res.findings.push_back({Finding::Severity::budget_violation,
                            "arithmetic_oracles",
                            "greedy refinement ratio " + format_rational(res.ratio) +
                                " exceeds budget " + format_rational(budget)});
  return res;
}

// Ruzsa triangle inequality, constant exactly 1:
// #(X-Z) * #Y <= #(X-Y) * #(Y-Z). Returns (lhs, rhs) = (#(X-Z), rhs/|Y|).
inline std::pair<std::int64_t, Rat> ruzsa_triangle_check(const FiniteGroupSet& X,
                                                         const FiniteGroupSet& Y,
                                                         const FiniteGroupSet& Z) {
  if (Y.empty()) throw Error("ruzsa_triangle_check: Y is empty");
  auto xz = detail::group_difference(X, Z);
  auto xy = detail::group_difference(X, Y);
  auto yz = detail::group_difference(Y, Z);
  std::int64_t lhs = static_cast<std::int64_t>(xz.size());
  Rat rhs(static_cast<std::int64_t>(xy.size() * yz.size()),
          static_cast<std::int64_t>(Y.size()));
  if (Rat(lhs) > rhs)
    throw TheoremViolation("ruzsa_triangle_check: #(X-Z) = " + std::to_string(lhs) +
                           " exceeds " + format_rational(rhs));
  return {lhs, rhs};
}

namespace detail {

inline FiniteGroupSet cell_set(const GridSet& x, Scale delta) {
  std::int64_t w = 1ll << (x.scale().log_inv - delta.log_inv);
  std::vector<std::int64_t> cells;
  cells.reserve(x.size());
  for (auto k : x.indices()) cells.push_back(floor_div(k, w));
  return FiniteGroupSet::integers(std::move(cells));
}

}  // namespace detail

struct GridRefinementResult {
  GridSet refined;              // points of X whose delta-cell survived
  std::int64_t cells_before = 0, cells_after = 0;
  Rat ratio;                    // E_delta(X' + Y1 + ... + Yk) / E_delta(X')
  RefinementResult::Method method = RefinementResult::Method::exhaustive;
  std::vector<Finding> findings;
};

// Covering-number Plunnecke: hypotheses and conclusion are stated for the
// aligned-cell proxy. The refinement keeps at least half the delta-cells of X
// exactly; the conclusion carries budget 8k for the proxy slack, and budget
// excesses are reported as findings rather than errors.
inline GridRefinementResult discretized_plunnecke(const GridSet& X,
                                                  const std::vector<GridSet>& Ys,
                                                  const std::vector<Rat>& Ks,
                                                  Scale delta,
                                                  const PlunneckeOptions& opts = {}) {
  if (X.empty()) throw Error("discretized_plunnecke: X is empty");
  if (Ys.empty() || Ys.size() != Ks.size())
    throw Error("discretized_plunnecke: need one K per Y");
  if (delta.log_inv > X.scale().log_inv)
    throw Error("discretized_plunnecke: delta finer than the sets' scale");
  std::int64_t ex = covering_number(X, delta);
  Rat prod_k(1);
  for (std::size_t i = 0; i < Ys.size(); ++i) {
    detail::require_common_scale(X, Ys[i], "discretized_plunnecke");
    std::int64_t es = covering_number(sumset(X, Ys[i]), delta);
    if (Rat(es) > Ks[i] * ex)
      throw HypothesisViolation("discretized_plunnecke: E(X+Y_" +
                                std::to_string(i + 1) + ") = " + std::to_string(es) +
                                " exceeds K*E(X) = " + format_rational(Ks[i] * ex));
    prod_k *= Ks[i];
  }
  FiniteGroupSet xc = detail::cell_set(X, delta);
  std::vector<FiniteGroupSet> ycs;
  std::vector<Rat> inner_ks;
  for (const auto& y : Ys) {
    ycs.push_back(detail::cell_set(y, delta));
    auto s = detail::group_sum(xc, ycs.back());
    inner_ks.push_back(Rat(static_cast<std::int64_t>(s.size()),
                           static_cast<std::int64_t>(xc.size())));
  }
  RefinementResult inner = plunnecke_refinement(xc, ycs, inner_ks, true, opts);

  std::int64_t w = 1ll << (X.scale().log_inv - delta.log_inv);
  std::vector<std::int64_t> kept;
  for (auto k : X.indices())
    if (std::binary_search(inner.subset.elems.begin(), inner.subset.elems.end(),
                           floor_div(k, w)))
      kept.push_back(k);
  GridRefinementResult out{GridSet(X.scale(), X.ambient_lo(), X.ambient_hi(),
                                   std::move(kept), true),
                           ex,
                           static_cast<std::int64_t>(inner.subset.size()),
                           Rat(0),
                           inner.method,
                           inner.findings};

  GridSet total = out.refined;
  for (const auto& y : Ys) total = sumset(total, y);
  out.ratio = Rat(covering_number(total, delta), covering_number(out.refined, delta));
  Rat budget = opts.cell_budget_per_set * static_cast<std::int64_t>(Ys.size()) * prod_k;
  if (out.ratio > budget)
    out.findings.push_back({Finding::Severity::budget_violation,
                            "arithmetic_oracles",
                            "discretized refinement ratio " + format_rational(out.ratio) +
                                " exceeds budget " + format_rational(budget)});
  return out;
}

// Covering-number triangle inequality with budget 8 for the proxy slack:
// E(X-Z) <= 8 * E(X-Y) E(Y-Z) / E(Y). The default budget is derivable
// (factor 2 per cell conversion), so a failure is a genuine violation.
inline std::pair<std::int64_t, Rat> discretized_triangle(const GridSet& X,
                                                         const GridSet& Y,
                                                         const GridSet& Z,
                                                         Scale delta,
                                                         const Rat& budget = Rat(8)) {
  if (Y.empty()) throw Error("discretized_triangle: Y is empty");
  std::int64_t lhs = covering_number(difference_set(X, Z), delta);
  Rat rhs(covering_number(difference_set(X, Y), delta) *
              covering_number(difference_set(Y, Z), delta),
          covering_number(Y, delta));
  if (Rat(lhs) > budget * rhs)
    throw TheoremViolation("discretized_triangle: E(X-Z) = " + std::to_string(lhs) +
                           " exceeds " + format_rational(budget) + " * " +
                           format_rational(rhs));
  return {lhs, rhs};
}

}  // namespace splab
