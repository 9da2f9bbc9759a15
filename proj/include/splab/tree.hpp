#pragma once

// Tree preprocessing: extract from a delta-separated subset of [1,2) a large
// subset that is an essentially uniform 2^j-adic tree, with a certificate
// that can be re-checked by walking the output's interval tree.

#include "splab/exact.hpp"
#include "splab/grid.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

namespace splab {

struct TreeParams {
  int branch_log;  // j: each interval splits into 2^j children
  int depth;       // m: tree depth; requires j*m == L of the grid
  TreeParams(int j, int m) : branch_log(j), depth(m) {
    if (j < 1 || m < 1) throw Error("TreeParams: j and m must be positive");
  }
};

// Branching classes are half-open dyadic ranges [2^(k-1), 2^k); a fully
// branching interval (2^j children) falls in class k = j+1.
struct UniformTreeCertificate {
  std::vector<int> class_per_level;            // k_l for l = 0..m-1
  std::vector<std::int64_t> survivors_per_level;  // #Z_l for l = 0..m
  std::int64_t final_size = 0;                 // #X~
};

namespace detail {

inline int branch_class(std::int64_t count) {
  int k = 1;
  while ((1ll << k) <= count) ++k;  // count in [2^(k-1), 2^k)
  return k;
}

}  // namespace detail

struct UniformizeResult {
  GridSet subset;
  UniformTreeCertificate certificate;
};

// The tree algorithm, bottom-up: Z_m = occupied leaf cells; at each level
// bucket occupied intervals by the dyadic class of their child count in
// Z_{l+1}, keep the class with the largest total child count (ties to the
// smaller class), and finally keep the points whose interval chain survives
// at every level.
inline UniformizeResult uniformize(const GridSet& x, const TreeParams& params) {
  if (x.empty()) throw Error("uniformize: empty set");
  const int L = x.scale().log_inv;
  const int j = params.branch_log, m = params.depth;
  if (j * m != L)
    throw Error("uniformize: depth * branch_log must equal the scale exponent");
  const std::int64_t lo = x.ambient_lo();
  if (x.ambient_hi() - lo != (1ll << L))
    throw Error("uniformize: ambient interval must have unit length");
  if (!x.empty() && x.indices().back() >= x.ambient_hi())
    throw Error("uniformize: right endpoint of the ambient interval is not allowed");

  // level-l cell of a point: (index - lo) >> (L - l*j)
  std::vector<std::vector<std::int64_t>> z(m + 1);
  z[m].reserve(x.size());
  for (auto k : x.indices()) z[m].push_back(k - lo);

  UniformTreeCertificate cert;
  cert.class_per_level.assign(m, 0);
  cert.survivors_per_level.assign(m + 1, 0);
  cert.survivors_per_level[m] = static_cast<std::int64_t>(z[m].size());

  for (int l = m - 1; l >= 0; --l) {
    // child counts per occupied level-l interval (children are consecutive
    // in the sorted cell list)
    std::vector<std::pair<std::int64_t, std::int64_t>> counts;  // (parent, count)
    for (std::size_t i = 0; i < z[l + 1].size();) {
      std::int64_t parent = z[l + 1][i] >> j;
      std::size_t i0 = i;
      while (i < z[l + 1].size() && (z[l + 1][i] >> j) == parent) ++i;
      counts.emplace_back(parent, static_cast<std::int64_t>(i - i0));
    }
    std::vector<std::int64_t> class_total(j + 2, 0);
    for (auto [parent, c] : counts) class_total[detail::branch_class(c)] += c;
    int best_k = 1;
    for (int k = 2; k <= j + 1; ++k)
      if (class_total[k] > class_total[best_k]) best_k = k;
    cert.class_per_level[l] = best_k;
    for (auto [parent, c] : counts)
      if (detail::branch_class(c) == best_k) z[l].push_back(parent);
    cert.survivors_per_level[l] = static_cast<std::int64_t>(z[l].size());
  }

  // prune to full chains, top-down
  std::vector<std::vector<std::int64_t>> surv(m + 1);
  surv[0] = z[0];
  for (int l = 0; l < m; ++l) {
    for (auto cell : z[l + 1])
      if (std::binary_search(surv[l].begin(), surv[l].end(), cell >> j))
        surv[l + 1].push_back(cell);
  }
  std::vector<std::int64_t> kept;
  for (auto k : x.indices())
    if (std::binary_search(surv[m].begin(), surv[m].end(), k - lo))
      kept.push_back(k);
  cert.final_size = static_cast<std::int64_t>(kept.size());
  return {GridSet(x.scale(), x.ambient_lo(), x.ambient_hi(), std::move(kept), true),
          cert};
}

// Walk the subset's own occupied-interval tree and confirm that every
// interval's child count lies in the certified class, that the subset is
// contained in x, and that the size bound #X~ >= (2j)^-m #X holds.
inline bool validate_tree_certificate(const GridSet& x, const GridSet& subset,
                                      const TreeParams& params,
                                      const UniformTreeCertificate& cert) {
  const int j = params.branch_log, m = params.depth;
  if (j * m != x.scale().log_inv) return false;
  if (subset.empty() || cert.final_size != static_cast<std::int64_t>(subset.size()))
    return false;
  if (!std::includes(x.indices().begin(), x.indices().end(),
                     subset.indices().begin(), subset.indices().end()))
    return false;
  const std::int64_t lo = x.ambient_lo();
  std::vector<std::int64_t> cells;
  for (auto k : subset.indices()) cells.push_back(k - lo);
  for (int l = m - 1; l >= 0; --l) {
    std::vector<std::int64_t> parents;
    for (std::size_t i = 0; i < cells.size();) {
      std::int64_t parent = cells[i] >> j;
      std::size_t i0 = i;
      while (i < cells.size() && (cells[i] >> j) == parent) ++i;
      std::int64_t c = static_cast<std::int64_t>(i - i0);
      int k = cert.class_per_level[l];
      if (c < (1ll << (k - 1)) || c >= (1ll << k)) return false;
      parents.push_back(parent);
    }
    cells = std::move(parents);
  }
  // size bound, exact in rationals
  Rat bound(Int(x.size()),
            boost::multiprecision::pow(Int(2 * j), static_cast<unsigned>(m)));
  return Rat(Int(subset.size())) >= bound;
}

struct DoublingEntry {
  std::int64_t cover_sum = 0;  // E_t(X+X)
  std::int64_t cover = 0;      // E_t(X)
  Rat ratio;
};

// E_t(X+X)/E_t(X) for every dyadic t = 2^-l, 1 <= l <= L.
inline std::map<int, DoublingEntry> doubling_profile(const GridSet& x) {
  if (x.empty()) throw Error("doubling_profile: empty set");
  GridSet ss = sumset(x, x);
  std::map<int, DoublingEntry> out;
  for (int l = 1; l <= x.scale().log_inv; ++l) {
    DoublingEntry e;
    e.cover_sum = covering_number(ss, Scale(l));
    e.cover = covering_number(x, Scale(l));
    e.ratio = Rat(e.cover_sum, e.cover);
    out[l] = e;
  }
  return out;
}

// Smallest j with 2j <= 2^(j*eps); such a j keeps the per-level loss (2j)^m
// below 2^(j*m*eps) for every depth.
inline int suggest_branch_log(const Rat& eps) {
  if (eps <= 0) throw Error("suggest_branch_log: eps must be positive");
  Int p = numerator(eps);
  unsigned q = denominator(eps).convert_to<unsigned>();
  for (int j = 1; j <= 64; ++j) {
    // (2j)^q <= 2^(j*p)
    Int lhs = boost::multiprecision::pow(Int(2 * j), q);
    Int jp = Int(j) * p;
    if (jp.convert_to<long>() >= 0 && lhs <= (Int(1) << jp.convert_to<unsigned>()))
      return j;
  }
  throw Error("suggest_branch_log: eps too small (no j <= 64 suffices)");
}

// Derivable multi-scale doubling budget: with c_l the minimal and C_l the
// maximal point count per surviving interval one gets, for every dyadic t,
// E_t(X~+X~) <= 9 * 2^(j+m) * (#X / #X~) * K * E_t(X~).
inline Rat doubling_budget(const TreeParams& params, std::size_t size_before,
                           std::size_t size_after) {
  return Rat(9) * pow2(params.branch_log + params.depth) *
         Rat(static_cast<std::int64_t>(size_before),
             static_cast<std::int64_t>(size_after));
}

}  // namespace splab
