#pragma once

// Quantitative expansion machinery: popular-dilate selection with dyadic
// pigeonholing, exact quadruple-energy counting (two-pointer over the value
// multiset, never the naive fourth power), Cauchy-Schwarz lower bounds,
// upper-bound measurements for dilated sums, and the exact rational exponent
// bookkeeping behind the target exponent c(sigma) = sigma(1-sigma)/(4(7+3sigma)).

#include "splab/exact.hpp"
#include "splab/findings.hpp"
#include "splab/grid.hpp"
#include "splab/oracles.hpp"
#include "splab/quotient.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace splab {

// ---------------------------------------------------------------------------
// Exact exponent arithmetic

struct TheoreticalConstants {
  Rat sigma;
  Rat gamma;                 // the cutoff exponent actually used
  Rat gamma_star;            // 7(1-sigma) / (2(7+3sigma))
  Rat c_max;                 // sigma(1-sigma) / (4(7+3sigma))
  Rat dense_exponent_far;    // (2*gamma + sigma - 1)/12, nonpositive at gamma_star
  Rat dense_exponent_near;   // -gamma*sigma/12
  Rat gap_exponent;          // -gamma*sigma/14
  Rat guaranteed_exponent;   // min of the three magnitudes: K >~ delta^-this
  Rat measure_exponent;      // measure form: |A+A|+|A.A| >~ |A|^this
  Rat cardinality_exponent;  // counting form: delta^-c * #A = (#A)^this
};

inline TheoreticalConstants theoretical_constants(const Rat& sigma,
                                                  std::optional<Rat> gamma = {}) {
  if (sigma <= 0 || sigma >= 1)
    throw Error("theoretical_constants: sigma must lie in (0,1)");
  TheoreticalConstants tc;
  tc.sigma = sigma;
  tc.gamma_star = Rat(7) * (1 - sigma) / (2 * (7 + 3 * sigma));
  tc.gamma = gamma.value_or(tc.gamma_star);
  if (tc.gamma <= 0 || tc.gamma >= Rat(1, 2))
    throw Error("theoretical_constants: gamma must lie in (0, 1/2)");
  tc.c_max = sigma * (1 - sigma) / (4 * (7 + 3 * sigma));
  tc.dense_exponent_far = (2 * tc.gamma + sigma - 1) / 12;
  tc.dense_exponent_near = -tc.gamma * sigma / 12;
  tc.gap_exponent = -tc.gamma * sigma / 14;
  Rat a = tc.dense_exponent_far < 0 ? Rat(-tc.dense_exponent_far) : tc.dense_exponent_far;
  Rat b = Rat(-tc.dense_exponent_near);
  Rat g = Rat(-tc.gap_exponent);
  tc.guaranteed_exponent = std::min(a, std::min(b, g));
  tc.measure_exponent = 1 - tc.c_max / (1 - sigma);
  tc.cardinality_exponent = 1 + tc.c_max / sigma;
  return tc;
}

// Exact identity behind the choice of gamma_star: at gamma = gamma_star the
// far dense exponent and the gap exponent balance, and both equal c_max.
inline bool constants_balanced(const TheoreticalConstants& tc) {
  if (!(tc.gamma == tc.gamma_star)) return false;
  Rat far_mag = Rat(-tc.dense_exponent_far);
  Rat gap_mag = Rat(-tc.gap_exponent);
  return far_mag == tc.c_max && gap_mag == tc.c_max &&
         tc.guaranteed_exponent == tc.c_max;
}

// ---------------------------------------------------------------------------
// Popular dilate and dyadic pigeonholing

struct PopularPair {
  std::int64_t b_index = 0;     // grid index of the selected b
  GridSet abar;                 // elements whose intersection count falls in
                                // the selected dyadic class
  Rat rho;                      // dyadic normalization in [1/K, 1]
  Rat doubling;                 // K of the input set
  int class_log = 0;            // selected class [2^t, 2^(t+1))
  std::int64_t class_max = 0;   // largest intersection count in the class
  std::int64_t sum_total = 0;   // sum of intersection counts over all of A'
};

namespace detail {

inline std::vector<std::int64_t> dilate_cells(std::int64_t factor_index,
                                              const GridSet& a) {
  // delta-cells of (x*A) where x = factor_index * delta: floor(x*k / delta)
  const int L = a.scale().log_inv;
  std::vector<std::int64_t> cells;
  cells.reserve(a.size());
  for (auto k : a.indices()) cells.push_back(floor_div(factor_index * k, 1ll << L));
  return sorted_unique(std::move(cells));
}

inline std::int64_t sorted_intersection_size(const std::vector<std::int64_t>& a,
                                             const std::vector<std::int64_t>& b) {
  std::int64_t n = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else { ++n; ++i; ++j; }
  }
  return n;
}

}  // namespace detail

// b maximizes the total delta-cell intersection of x*A' with b*A' over x in
// A' (ties to the smallest b); Abar and rho come from the dyadic class of
// intersection counts maximizing count * class-maximum (ties to the smaller
// class).
inline PopularPair select_popular_pair(const GridSet& aprime) {
  if (aprime.empty()) throw Error("select_popular_pair: empty set");
  const Scale delta = aprime.scale();
  const std::int64_t n = static_cast<std::int64_t>(aprime.size());
  std::vector<std::vector<std::int64_t>> cells;
  cells.reserve(aprime.size());
  for (auto k : aprime.indices()) cells.push_back(detail::dilate_cells(k, aprime));

  std::size_t best_b = 0;
  std::int64_t best_sum = -1;
  for (std::size_t b = 0; b < cells.size(); ++b) {
    std::int64_t sum = 0;
    for (const auto& cx : cells)
      sum += detail::sorted_intersection_size(cx, cells[b]);
    if (sum > best_sum) {  // first maximum = smallest b under ascending order
      best_sum = sum;
      best_b = b;
    }
  }

  std::vector<std::int64_t> counts(aprime.size());
  for (std::size_t i = 0; i < cells.size(); ++i)
    counts[i] = detail::sorted_intersection_size(cells[i], cells[best_b]);

  // dyadic classes [2^t, 2^(t+1)); counts are >= 1 since x*b is shared
  int best_t = -1;
  std::int64_t best_score = -1, best_classmax = 0;
  for (int t = 0; t < 40; ++t) {
    std::int64_t lo = 1ll << t, hi = 2ll << t;
    std::int64_t cnt = 0, mx = 0;
    for (auto v : counts)
      if (v >= lo && v < hi) { ++cnt; mx = std::max(mx, v); }
    if (cnt == 0) continue;
    std::int64_t score = cnt * mx;
    if (score > best_score) {  // ties keep the smaller class
      best_score = score;
      best_t = t;
      best_classmax = mx;
    }
  }

  std::int64_t sum_total = 0;
  for (auto v : counts) sum_total += v;
  std::vector<std::int64_t> abar_idx;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] >= (1ll << best_t) && counts[i] < (2ll << best_t))
      abar_idx.push_back(aprime.indices()[i]);

  std::int64_t esum = static_cast<std::int64_t>(sumset(aprime, aprime).size());
  std::int64_t eprod = static_cast<std::int64_t>(
      product_cover(aprime, aprime, delta).size());
  Rat doubling(esum + eprod, n);
  // class_max ~ #A' / (K * rho): rho is the largest power of two not above
  // the solved value, kept inside [1/K, 1]
  Rat raw = Rat(n) / (doubling * best_classmax);
  Rat rho(1);
  while (rho > raw) {
    Rat half = rho / 2;
    if (half * doubling < 1) break;  // halving again would cross below 1/K
    rho = half;
  }
  return PopularPair{aprime.indices()[best_b],
                     GridSet(delta, aprime.ambient_lo(), aprime.ambient_hi(),
                             std::move(abar_idx), true),
                     rho,
                     doubling,
                     best_t,
                     best_classmax,
                     sum_total};
}

// ---------------------------------------------------------------------------
// Quadruple energy

namespace detail {

// Integer-valued kernel for {d2*a + d1*a'} over X x Y: values are
// (c2*k + c1*k') in units of delta/(m1*m2), where d_i = n_i/m_i reduced.
struct PairValueKernel {
  std::int64_t c1, c2;     // integer coefficients in value units
  std::int64_t unit_den;   // value unit = delta / unit_den
  int scale_log;

  PairValueKernel(const Rat& d1, const Rat& d2, int L) : scale_log(L) {
    Int n1 = numerator(d1), m1 = denominator(d1);
    Int n2 = numerator(d2), m2 = denominator(d2);
    unit_den = to_i64(m1 * m2);
    c1 = to_i64(n1 * m2);
    c2 = to_i64(n2 * m1);
    // values are c2*k + c1*k' with |k|, |k'| < 2^(L+2); keep them in int64
    std::int64_t mag = std::max(c1 < 0 ? -c1 : c1, c2 < 0 ? -c2 : c2);
    if (mag > (1ll << (60 - L - 2)))
      throw Error("PairValueKernel: coefficients too large for exact int64 values");
  }
  std::int64_t value(std::int64_t ka, std::int64_t kb) const {
    return c2 * ka + c1 * kb;  // (a from the d2 slot, b from the d1 slot)
  }
  // |u - v| <= window  <=>  |U - V| <= window * unit_den * 2^L
  std::int64_t window_threshold(const Rat& window) const {
    return to_i64(floor_rat(window * unit_den * pow2(scale_log)));
  }
  std::int64_t delta_cell(std::int64_t v) const { return floor_div(v, unit_den); }
};

}  // namespace detail

struct QuadrupleCount {
  Rat d1, d2, window;
  std::int64_t total = 0;              // quadruples with
                                       // |d2(a1-a2) + d1(a4-a3)| <= window
  std::optional<std::int64_t> far;     // of those, |a3-a4| > delta^gamma
  std::optional<std::int64_t> near;    // and the complement
};

// Exact count over A^4 via the sorted value multiset V = {d2*a + d1*a'}:
// a quadruple satisfies the window condition iff its (a1,a4) and (a2,a3)
// values are within the window, so the count is the number of ordered pairs
// of V-entries at distance <= window. O(#A^2 log #A), never O(#A^4).
inline QuadrupleCount quadruple_count(const GridSet& a, const Rat& d1, const Rat& d2,
                                      const Rat& window,
                                      std::optional<Rat> gamma = {},
                                      std::int64_t split_budget = 300'000'000) {
  if (d2 == 0) throw Error("quadruple_count: d2 must be nonzero");
  if (a.empty()) throw Error("quadruple_count: empty set");
  const int L = a.scale().log_inv;
  detail::PairValueKernel kernel(d1, d2, L);
  const auto& idx = a.indices();
  struct Entry { std::int64_t v; std::int32_t second; };
  std::vector<Entry> entries;
  entries.reserve(idx.size() * idx.size());
  for (auto ka : idx)
    for (auto kb : idx)
      entries.push_back({kernel.value(ka, kb), static_cast<std::int32_t>(kb)});
  std::sort(entries.begin(), entries.end(),
            [](const Entry& x, const Entry& y) { return x.v < y.v; });
  const std::int64_t w = kernel.window_threshold(window);

  QuadrupleCount qc;
  qc.d1 = d1; qc.d2 = d2; qc.window = window;
  std::size_t lo = 0, hi = 0;
  std::int64_t total = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    while (entries[i].v - entries[lo].v > w) ++lo;
    if (hi < i) hi = i;
    while (hi + 1 < entries.size() && entries[hi + 1].v - entries[i].v <= w) ++hi;
    total += static_cast<std::int64_t>(hi - lo + 1);
  }
  qc.total = total;

  if (gamma) {
    if (total > split_budget)
      throw Error("quadruple_count: window population exceeds the split budget");
    std::int64_t cut = detail::min_admissible_diff(L, *gamma);
    std::int64_t far = 0;
    lo = 0; hi = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      while (entries[i].v - entries[lo].v > w) ++lo;
      if (hi < i) hi = i;
      while (hi + 1 < entries.size() && entries[hi + 1].v - entries[i].v <= w) ++hi;
      // entry i is the (a1,a4) slot, entry j the (a2,a3) slot
      std::int64_t k4 = entries[i].second;
      for (std::size_t j = lo; j <= hi; ++j) {
        std::int64_t diff = entries[j].second - k4;
        if (diff >= cut || -diff >= cut) ++far;
      }
    }
    qc.far = far;
    qc.near = total - far;
  }
  return qc;
}

struct EnergyBound {
  std::int64_t cover = 0;  // delta-cell count of d1*A + d2*A
  Rat lower;               // #A^4 / #Q
};

// Cauchy-Schwarz: cover(d1*A + d2*A) * #Q >= #A^4. Asserted with budget 4.
inline EnergyBound energy_lower_bound(const GridSet& a, const Rat& d1, const Rat& d2) {
  if (d2 == 0) throw Error("energy_lower_bound: d2 must be nonzero");
  const int L = a.scale().log_inv;
  detail::PairValueKernel kernel(d1, d2, L);
  std::vector<std::int64_t> cells;
  cells.reserve(a.size() * a.size());
  for (auto ka : a.indices())
    for (auto kb : a.indices())
      cells.push_back(kernel.delta_cell(kernel.value(ka, kb)));
  cells = detail::sorted_unique(std::move(cells));
  EnergyBound eb;
  eb.cover = static_cast<std::int64_t>(cells.size());
  QuadrupleCount qc = quadruple_count(a, d1, d2, a.scale().delta());
  Int n4 = boost::multiprecision::pow(Int(a.size()), 4);
  eb.lower = Rat(n4, Int(qc.total));
  if (Rat(4 * eb.cover) < eb.lower)
    throw TheoremViolation("energy_lower_bound: cover " + std::to_string(eb.cover) +
                           " is below #A^4 / (4 #Q) = " + format_rational(eb.lower / 4));
  return eb;
}

// ---------------------------------------------------------------------------
// Dense-case selection

struct DenseSelection {
  std::int64_t generators[4] = {0, 0, 0, 0};  // b1, b2, b3, b4 (grid indices)
  Rat b;                    // (b1-b2)/(b3-b4) in [0,1]
  std::int64_t cell = 0;    // its s-cell
  std::int64_t popularity = 0;   // quadruple mass in the 5-cell window
  std::int64_t total_mass = 0;   // all admissible quadruples
};

// Choose the admissible quadruple (with |b1-b2| <= |b3-b4|) whose
// delta^(1-2gamma)-neighborhood in quotient space carries the least
// quadruple mass, computed from the occupancy-mass table of B.
inline DenseSelection dense_case_select(const QuotientSet& B) {
  const std::int64_t two_m = 1ll << B.s_log;
  std::optional<std::int64_t> best_cell;
  std::int64_t best_mass = 0;
  std::size_t best_member = 0;
  std::int64_t last_cell = -1;
  for (std::size_t i = 0; i < B.members.size(); ++i) {
    const auto& mem = B.members[i];
    if (mem.num < 0 || mem.num > mem.den) continue;  // need b in [0,1]
    std::int64_t cell = std::min(floor_div(mem.num * two_m, mem.den), two_m - 1);
    if (cell == last_cell) continue;
    last_cell = cell;
    std::int64_t mass = 0;
    for (std::int64_t c = cell - 2; c <= cell + 2; ++c) mass += B.mass_at(c);
    if (!best_cell || mass < best_mass) {
      best_cell = cell;
      best_mass = mass;
      best_member = i;
    }
  }
  if (!best_cell) throw Error("dense_case_select: no candidate in [0,1]");
  const auto& mem = B.members[best_member];
  const DiffEntry* nd = B.find_diff(mem.src_num);
  const DiffEntry* dd = B.find_diff(mem.src_den);
  if (!nd || !dd) throw Error("dense_case_select: generator lookup failed");
  DenseSelection sel;
  sel.generators[0] = nd->wit_a;
  sel.generators[1] = nd->wit_b;
  sel.generators[2] = dd->wit_a;
  sel.generators[3] = dd->wit_b;
  sel.b = Rat(mem.num, mem.den);
  sel.cell = *best_cell;
  sel.popularity = best_mass;
  for (auto m : B.cell_mass) sel.total_mass += m;
  return sel;
}

inline DenseSelection dense_case_select(const GridSet& a1, const Rat& gamma,
                                        const QuotientBuildOptions& opts = {}) {
  return dense_case_select(build_quotient_set(a1, gamma, opts));
}

// ---------------------------------------------------------------------------
// Gap-case vectors

struct GapVectors {
  Rat e1, e2;
  int fold = 0;                      // k for the iterated-sum comparison
  enum class Case { a1, a2 } which;  // which half-point is isolated
  Rat d1, d2;                        // the underlying generator differences
};

// From a gap certificate b = (b1-b2)/(b3-b4): if b/2 is isolated, e1 = d1 and
// e2 = 2*d2 with k = 2; if (b+1)/2 is isolated, e1 = d1 + d2 and e2 = 2*d2
// with k = 3 (the worse case).
inline GapVectors gap_case_vectors(const GapCertificate& cert, Scale scale) {
  Rat delta = scale.delta();
  Rat d1 = Rat(cert.generators[0] - cert.generators[1]) * delta;
  Rat d2 = Rat(cert.generators[2] - cert.generators[3]) * delta;
  if (d2 == 0) throw Error("gap_case_vectors: degenerate denominator");
  GapVectors gv;
  gv.d1 = d1;
  gv.d2 = d2;
  gv.e2 = 2 * d2;
  if (cert.which == GapCertificate::Isolated::half) {
    gv.which = GapVectors::Case::a1;
    gv.e1 = d1;
    gv.fold = 2;
  } else {
    gv.which = GapVectors::Case::a2;
    gv.e1 = d1 + d2;
    gv.fold = 3;
  }
  if (gv.e1 / gv.e2 != cert.target)
    throw Error("gap_case_vectors: e1/e2 does not reproduce the isolated point");
  return gv;
}

// ---------------------------------------------------------------------------
// Upper-bound measurements for dilated sums

struct LemmaUpperBounds {
  std::int64_t cover_pair = 0;      // E_delta(d1*A' + d2*A')
  std::int64_t cover_iterated = 0;  // E_delta(d1*A2 + k-fold d2*A2)
  std::size_t a2_size = 0;          // #A2 >= #A1/4
  std::string comparison;           // max(|d1|,|d2|)^sigma * #A', decimal
  std::string ratio_pair;           // cover_pair / comparison, decimal
  std::string ratio_iterated;       // cover_iterated / comparison, decimal
  GridSet a2;
};

namespace detail {

// delta-cell count of {d2*a + d1*b : a in Y, b in X}; cells are marked in a
// bit vector sized by the corner extremes, so the cost is one pass over the
// pairs regardless of multiplicity.
inline std::int64_t dilated_pair_cover(const GridSet& x, const GridSet& y,
                                       const Rat& d1, const Rat& d2, int L) {
  PairValueKernel kernel(d1, d2, L);
  std::int64_t corners[4] = {
      kernel.value(y.indices().front(), x.indices().front()),
      kernel.value(y.indices().front(), x.indices().back()),
      kernel.value(y.indices().back(), x.indices().front()),
      kernel.value(y.indices().back(), x.indices().back())};
  std::int64_t lo = kernel.delta_cell(*std::min_element(corners, corners + 4));
  std::int64_t hi = kernel.delta_cell(*std::max_element(corners, corners + 4));
  BitCover bits(lo, hi);
  for (auto ka : y.indices())
    for (auto kb : x.indices())
      bits.set(kernel.delta_cell(kernel.value(ka, kb)));
  return bits.popcount();
}

// Lift a grid set to the product scale 2L; one point per delta-cell, so
// half-size cell refinements are half-size point refinements.
inline GridSet lift_to_product_scale(const GridSet& a) {
  const int L = a.scale().log_inv;
  std::vector<std::int64_t> idx;
  idx.reserve(a.size());
  for (auto k : a.indices()) idx.push_back(k << L);
  return GridSet(Scale(2 * L), a.ambient_lo() << L, a.ambient_hi() << L,
                 std::move(idx), true);
}

}  // namespace detail

// Measure E_delta(d1 A' + d2 A') and E_delta(d1 A2 + k-fold d2 A2), where A2
// comes from two successive half-size refinements of A1 (so #A2 >= #A1/4
// exactly), against the non-concentration comparison max(|d1|,|d2|)^sigma #A'.
// The prefactors hidden in the statements are measured, not asserted.
inline LemmaUpperBounds lemma_upper_bounds(const GridSet& aprime, const GridSet& a1,
                                           const Rat& d1, const Rat& d2, int fold,
                                           const Rat& sigma) {
  if (d1 == 0 && d2 == 0) throw Error("lemma_upper_bounds: degenerate differences");
  if (d2 == 0) throw Error("lemma_upper_bounds: d2 must be nonzero");
  if (fold < 2) throw Error("lemma_upper_bounds: fold must be at least 2");
  const int L = aprime.scale().log_inv;

  // refinement round 1: against additive doubling of A1 at its own scale
  Rat k1(static_cast<std::int64_t>(sumset(a1, a1).size()),
         static_cast<std::int64_t>(a1.size()));
  GridSet r1 = discretized_plunnecke(a1, {a1}, {k1}, a1.scale()).refined;

  // refinement round 2: against the d2-dilate, on the product-scale grid
  GridSet lifted = detail::lift_to_product_scale(r1);
  GridSet dilated = affine_image(r1, d2, Rat(0), Scale(2 * L));
  Rat k2(covering_number(sumset(lifted, dilated), a1.scale()),
         covering_number(lifted, a1.scale()));
  GridSet refined2 = discretized_plunnecke(lifted, {dilated}, {k2}, a1.scale()).refined;
  std::vector<std::int64_t> back;
  back.reserve(refined2.size());
  for (auto k : refined2.indices()) back.push_back(k >> L);
  GridSet a2(a1.scale(), a1.ambient_lo(), a1.ambient_hi(), std::move(back), true);

  LemmaUpperBounds lub{0, 0, 0, "", "", "", a2};
  lub.a2_size = a2.size();
  lub.cover_pair = detail::dilated_pair_cover(aprime, aprime, d1, d2, L);
  GridSet folded = iterated_sumset(a2, fold);
  lub.cover_iterated = detail::dilated_pair_cover(a2, folded, d1, d2, L);

  Rat m = std::max(d1 < 0 ? Rat(-d1) : d1, d2 < 0 ? Rat(-d2) : d2);
  Rat msig = pow_rational_approx(m, sigma, 12);
  Rat comparison = msig * static_cast<std::int64_t>(aprime.size());
  lub.comparison = decimal_string(comparison, 6);
  lub.ratio_pair = decimal_string(Rat(lub.cover_pair) / comparison, 6);
  lub.ratio_iterated = decimal_string(Rat(lub.cover_iterated) / comparison, 6);
  return lub;
}

// ---------------------------------------------------------------------------
// Per-experiment report row

struct ExpansionReport {
  std::string family;
  int L = 0;
  Rat sigma_target;
  std::int64_t n = 0;              // #A
  std::string c_observed;          // non-concentration constant, decimal
  std::int64_t cover_sum = 0;      // E_delta(A+A)
  std::int64_t cover_prod = 0;     // E_delta(A.A)
  Rat doubling;                    // K = (cover_sum + cover_prod)/n
  std::string verdict;             // dense | gap | error
  std::optional<Rat> gap_b, e1, e2;
  std::optional<std::int64_t> q_total, q_far, q_near;
  Rat c_theory;                    // target exponent c(sigma)
  std::string error;               // populated when the row failed
};

inline std::string expansion_csv_header() {
  return "family,L,sigma_target,n,c_observed_concentration,cover_sum,cover_prod,"
         "K,verdict,gap_b,e1,e2,q_total,q_far,q_near,c_theory";
}

inline std::string expansion_csv_row(const ExpansionReport& r) {
  auto opt_rat = [](const std::optional<Rat>& v) {
    return v ? format_rational(*v) : std::string();
  };
  auto opt_int = [](const std::optional<std::int64_t>& v) {
    return v ? std::to_string(*v) : std::string();
  };
  std::string row = r.family;
  row += "," + std::to_string(r.L);
  row += "," + format_rational(r.sigma_target);
  row += "," + std::to_string(r.n);
  row += "," + r.c_observed;
  row += "," + std::to_string(r.cover_sum);
  row += "," + std::to_string(r.cover_prod);
  row += "," + format_rational(r.doubling);
  row += "," + r.verdict;
  row += "," + opt_rat(r.gap_b);
  row += "," + opt_rat(r.e1);
  row += "," + opt_rat(r.e2);
  row += "," + opt_int(r.q_total);
  row += "," + opt_int(r.q_far);
  row += "," + opt_int(r.q_near);
  row += "," + format_rational(r.c_theory);
  return row;
}

}  // namespace splab
