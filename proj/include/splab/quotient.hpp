#pragma once

// The quotient set B = {(a1-a2)/(a3-a4) : |a3-a4| > delta^gamma} and the
// dense-versus-gap dichotomy at resolution s = 2^-m ~ delta^(1-2*gamma).
//
// Differences are deduplicated exactly before pairing, so the pair loop runs
// over #D * #D_admissible values rather than #A^4 quadruples. Membership is
// tracked two ways: an occupancy mask over s-cells for the whole range of B,
// and exact rational members retained on a window around [0,1] -- the only
// region certificates ever query. Threshold comparisons against delta^gamma
// and delta^(1-2*gamma) are integer power comparisons, never logarithms.

#include "splab/exact.hpp"
#include "splab/findings.hpp"
#include "splab/grid.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

namespace splab {

struct QuotientBuildOptions {
  std::int64_t pair_budget = 40'000'000;  // cap on #D * #D_admissible
  int retention_pad = 3;                  // members kept on [-pad*s, 1+pad*s]
};

struct DiffEntry {
  std::int64_t value = 0;  // difference in grid units
  std::int64_t mult = 0;   // number of ordered pairs realizing it
  std::int64_t wit_a = 0, wit_b = 0;  // grid indices with wit_a - wit_b = value
};

struct QuotientMember {
  std::int64_t num = 0, den = 1;          // reduced, den > 0
  std::int64_t src_num = 0, src_den = 1;  // originating difference pair
};

class QuotientSet {
 public:
  Rat gamma;
  int scale_log = 0;   // L of the source grid
  int s_log = 0;       // m with s = 2^-m, the unique power of two in
                       // (delta^(1-2g)/2, delta^(1-2g)]
  std::int64_t min_admissible = 0;  // smallest |d| (grid units) with |d|*delta > delta^gamma
  std::int64_t source_size = 0;     // #A1
  std::vector<DiffEntry> diffs;     // sorted by value; sum of mult = #A1^2
  std::vector<QuotientMember> members;  // retained window, sorted by value
  std::int64_t mask_lo_cell = 0;
  std::vector<bool> mask;           // s-cell occupancy over all of B
  std::vector<std::int64_t> cell_mass;  // quadruple multiplicity per s-cell

  Rat s() const { return pow2r(-s_log); }
  Rat member_value(const QuotientMember& m) const { return Rat(m.num, m.den); }

  bool cell_occupied(std::int64_t cell) const {
    if (cell < mask_lo_cell ||
        cell >= mask_lo_cell + static_cast<std::int64_t>(mask.size()))
      return false;
    return mask[static_cast<std::size_t>(cell - mask_lo_cell)];
  }
  std::int64_t mass_at(std::int64_t cell) const {
    if (cell < mask_lo_cell ||
        cell >= mask_lo_cell + static_cast<std::int64_t>(mask.size()))
      return 0;
    return cell_mass[static_cast<std::size_t>(cell - mask_lo_cell)];
  }

  // members with value in cell [cell*s, (cell+1)*s), by index range
  std::pair<std::size_t, std::size_t> members_in_cell(std::int64_t cell) const {
    const std::int64_t two_m = 1ll << s_log;
    auto below = [two_m](const QuotientMember& m, std::int64_t c) {
      // m.num/m.den < c/2^m  <=>  m.num * 2^m < c * m.den   (den > 0)
      return static_cast<__int128>(m.num) * two_m <
             static_cast<__int128>(c) * m.den;
    };
    auto lo = std::partition_point(
        members.begin(), members.end(),
        [&](const QuotientMember& m) { return below(m, cell); });
    auto hi = std::partition_point(
        lo, members.end(),
        [&](const QuotientMember& m) { return below(m, cell + 1); });
    return {static_cast<std::size_t>(lo - members.begin()),
            static_cast<std::size_t>(hi - members.begin())};
  }

  const DiffEntry* find_diff(std::int64_t value) const {
    auto it = std::partition_point(
        diffs.begin(), diffs.end(),
        [&](const DiffEntry& d) { return d.value < value; });
    if (it == diffs.end() || it->value != value) return nullptr;
    return &*it;
  }
};

namespace detail {

// smallest k >= 1 with (k * 2^-L)^q > (2^-L)^p, i.e. k^q > 2^(L(q-p))
inline std::int64_t min_admissible_diff(int L, const Rat& gamma) {
  Int p = numerator(gamma);
  unsigned q = denominator(gamma).convert_to<unsigned>();
  Int rhs = Int(1) << (Int(L) * (Int(q) - p)).convert_to<unsigned>();
  std::int64_t lo = 1, hi = 2ll << L;  // k = 2^(L+1) always admissible (q > p)
  while (lo < hi) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (boost::multiprecision::pow(Int(mid), q) > rhs) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

inline bool member_value_less(const QuotientMember& a, const QuotientMember& b) {
  return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

}  // namespace detail

inline QuotientSet build_quotient_set(const GridSet& a1, const Rat& gamma,
                                      const QuotientBuildOptions& opts = {}) {
  if (a1.empty()) throw Error("build_quotient_set: empty source set");
  if (gamma <= 0 || gamma >= Rat(1, 2))
    throw Error("build_quotient_set: gamma must lie in (0, 1/2)");
  const int L = a1.scale().log_inv;
  if (a1.ambient_hi() - a1.ambient_lo() > (1ll << L))
    throw Error("build_quotient_set: source must lie in a unit interval");

  QuotientSet B;
  B.gamma = gamma;
  B.scale_log = L;
  B.source_size = static_cast<std::int64_t>(a1.size());
  {
    // s = 2^-m with m = ceil(L(q-2p)/q), the unique power of two in
    // (delta^(1-2g)/2, delta^(1-2g)]
    std::int64_t p = numerator(gamma).convert_to<std::int64_t>();
    std::int64_t q = denominator(gamma).convert_to<std::int64_t>();
    B.s_log = static_cast<int>(ceil_div(L * (q - 2 * p), q));
  }
  B.min_admissible = detail::min_admissible_diff(L, gamma);

  // exact difference multiset, deduplicated, with one witness pair per value
  {
    const auto& idx = a1.indices();
    std::int64_t span = idx.back() - idx.front();
    std::vector<DiffEntry> table(static_cast<std::size_t>(2 * span + 1));
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t jj = 0; jj < idx.size(); ++jj) {
        std::int64_t v = idx[i] - idx[jj];
        auto& e = table[static_cast<std::size_t>(v + span)];
        if (e.mult == 0) {
          e.value = v;
          e.wit_a = idx[i];
          e.wit_b = idx[jj];
        }
        ++e.mult;
      }
    for (auto& e : table)
      if (e.mult > 0) B.diffs.push_back(e);
  }

  std::vector<std::int64_t> adm;  // positive admissible denominators
  for (const auto& d : B.diffs)
    if (d.value >= B.min_admissible) adm.push_back(d.value);
  if (adm.empty())
    throw Error("build_quotient_set: no admissible denominator (every pairwise "
                "difference is at most delta^gamma)");
  if (static_cast<std::int64_t>(B.diffs.size()) *
          static_cast<std::int64_t>(adm.size()) >
      opts.pair_budget)
    throw Error("build_quotient_set: pair count " +
                std::to_string(B.diffs.size() * adm.size()) +
                " exceeds budget; use a coarser delta");

  // mask extent: |n/d| < delta^-gamma <= 2^ceil(L*gamma)
  {
    std::int64_t p = numerator(gamma).convert_to<std::int64_t>();
    std::int64_t q = denominator(gamma).convert_to<std::int64_t>();
    std::int64_t vbound_log = ceil_div(L * p, q);
    std::int64_t hi_cell = 1ll << (vbound_log + B.s_log);
    if (hi_cell > (1ll << 26))
      throw Error("build_quotient_set: mask too large; use a coarser delta");
    B.mask_lo_cell = -hi_cell;
    B.mask.assign(static_cast<std::size_t>(2 * hi_cell + 1), false);
    B.cell_mass.assign(static_cast<std::size_t>(2 * hi_cell + 1), 0);
  }

  const std::int64_t twoM = 1ll << B.s_log;
  const std::int64_t ret_lo_num = -opts.retention_pad;           // -pad*s
  const std::int64_t ret_hi_num = twoM + opts.retention_pad;     // 1 + pad*s
  std::vector<QuotientMember> retained;
  for (const auto& nd : B.diffs) {
    std::int64_t d = nd.value;
    if (d < B.min_admissible) continue;
    std::int64_t dm = nd.mult;
    for (const auto& ne : B.diffs) {
      std::int64_t n = ne.value;
      std::int64_t cell = floor_div(n * twoM, d);
      auto& massed = B.cell_mass[static_cast<std::size_t>(cell - B.mask_lo_cell)];
      massed += 2 * ne.mult * dm;  // the pair and its (-n,-d) twin
      B.mask[static_cast<std::size_t>(cell - B.mask_lo_cell)] = true;
      // retention: n/d in [-pad*s, 1+pad*s]
      if (n * twoM >= ret_lo_num * d && n * twoM <= ret_hi_num * d) {
        std::int64_t g = std::gcd(n < 0 ? -n : n, d);  // gcd(0,d) = d
        retained.push_back({n / g, d / g, n, d});
      }
    }
  }
  std::sort(retained.begin(), retained.end(),
            [](const QuotientMember& a, const QuotientMember& b) {
              if (detail::member_value_less(a, b)) return true;
              if (detail::member_value_less(b, a)) return false;
              if (a.src_den != b.src_den) return a.src_den < b.src_den;
              return a.src_num < b.src_num;
            });
  retained.erase(std::unique(retained.begin(), retained.end(),
                             [](const QuotientMember& a, const QuotientMember& b) {
                               return a.num == b.num && a.den == b.den;
                             }),
                 retained.end());
  B.members = std::move(retained);
  return B;
}

struct GapCertificate {
  Rat b;                        // witness quotient in [0,1]
  std::int64_t generators[4];   // grid indices a1,a2,a3,a4 with b=(a1-a2)/(a3-a4)
  enum class Isolated { half, half_plus_one } which;
  Rat target;                   // b/2 or (b+1)/2
  Rat distance;                 // exact dist(target, B), at least s
};

struct DenseCertificate {
  std::int64_t occupied_cells = 0;  // s-cells of B meeting [0,1]
  Rat coverage;                     // occupied_cells * s
};

struct Classification {
  enum class Verdict { dense, gap } verdict = Verdict::dense;
  std::optional<GapCertificate> gap;
  std::optional<DenseCertificate> dense;
  std::vector<Finding> findings;
};

namespace detail {

// Exact distance from x to the nearest member in the cells adjacent to x.
// Members farther than one cell away are more than s from x, so a local
// minimum of at least s certifies dist(x, B) >= s.
inline std::optional<Rat> local_min_distance(const QuotientSet& B, const Rat& x) {
  std::int64_t cell = to_i64(floor_rat(x * pow2(B.s_log)));
  std::optional<Rat> best;
  for (std::int64_t c = cell - 1; c <= cell + 1; ++c) {
    auto [lo, hi] = B.members_in_cell(c);
    for (std::size_t i = lo; i < hi; ++i) {
      Rat d = B.member_value(B.members[i]) - x;
      if (d < 0) d = -d;
      if (!best || d < *best) best = d;
    }
  }
  return best;
}

}  // namespace detail

// Exact dist(x, B) by a full scan over the admissible difference pairs.
// Used to pin the distance recorded in gap certificates. A set without
// source differences is synthetic; its members are then all of B.
inline Rat quotient_exact_distance(const QuotientSet& B, const Rat& x) {
  if (B.diffs.empty()) {
    std::optional<Rat> best;
    for (const auto& m : B.members) {
      Rat d = B.member_value(m) - x;
      if (d < 0) d = -d;
      if (!best || d < *best) best = d;
    }
    if (!best) throw Error("quotient_exact_distance: empty synthetic set");
    return *best;
  }
  __int128 xn = to_i64(numerator(x));
  __int128 xd = to_i64(denominator(x));
  bool have = false;
  __int128 bn = 0, bd = 1;  // best distance bn/bd
  for (const auto& de : B.diffs) {
    std::int64_t d = de.value;
    if (d < B.min_admissible) continue;
    for (const auto& ne : B.diffs) {
      // |n/d - x| = |n*xd - xn*d| / (d*xd)
      __int128 num = static_cast<__int128>(ne.value) * xd - xn * d;
      if (num < 0) num = -num;
      __int128 den = static_cast<__int128>(d) * xd;
      if (!have || num * bd < bn * den) {
        have = true;
        bn = num;
        bd = den;
        if (bn == 0) break;
      }
    }
    if (have && bn == 0) break;
  }
  if (!have) throw Error("quotient_exact_distance: no admissible pair");
  return Rat(static_cast<std::int64_t>(bn), static_cast<std::int64_t>(bd));
}

// The dichotomy: scan one representative per occupied s-cell of B cap [0,1]
// from the top of [0,1] downward; for each, test b/2 and then (b+1)/2 for
// s-isolation by mask prefilter plus exact confirmation. If no gap is found,
// the occupied-cell count must satisfy count * s >= c0.
inline Classification classify(const QuotientSet& B, const Rat& c0 = Rat(1, 4)) {
  Classification out;
  const Rat s = B.s();
  const std::int64_t twoM = 1ll << B.s_log;

  // representatives: members sorted ascending; first member whose clamped
  // cell equals c is the smallest member of that cell
  std::vector<std::pair<std::int64_t, std::size_t>> reps;  // (cell, member idx)
  {
    std::int64_t last_cell = -1;
    for (std::size_t i = 0; i < B.members.size(); ++i) {
      const auto& mem = B.members[i];
      if (mem.num < 0 || mem.num > mem.den) continue;  // keep values in [0,1]
      std::int64_t cell = std::min(floor_div(mem.num * twoM, mem.den), twoM - 1);
      if (cell != last_cell) {
        reps.emplace_back(cell, i);
        last_cell = cell;
      }
    }
  }
  for (auto it = reps.rbegin(); it != reps.rend(); ++it) {
    const auto& mem = B.members[it->second];
    Rat b = B.member_value(mem);
    for (int which = 0; which < 2; ++which) {
      Rat target = which == 0 ? Rat(b / 2) : Rat((b + 1) / 2);
      auto local = detail::local_min_distance(B, target);
      if (local && *local < s) continue;
      GapCertificate cert;
      cert.b = b;
      if (B.diffs.empty()) {  // synthetic set: the value pair is the generator
        cert.generators[0] = mem.src_num;
        cert.generators[1] = 0;
        cert.generators[2] = mem.src_den;
        cert.generators[3] = 0;
      } else {
        const DiffEntry* num_diff = B.find_diff(mem.src_num);
        const DiffEntry* den_diff = B.find_diff(mem.src_den);
        if (!num_diff || !den_diff)
          throw Error("classify: member generator lookup failed");
        cert.generators[0] = num_diff->wit_a;
        cert.generators[1] = num_diff->wit_b;
        cert.generators[2] = den_diff->wit_a;
        cert.generators[3] = den_diff->wit_b;
      }
      cert.which = which == 0 ? GapCertificate::Isolated::half
                              : GapCertificate::Isolated::half_plus_one;
      cert.target = target;
      cert.distance = quotient_exact_distance(B, target);
      if (cert.distance < s)
        throw Error("classify: local isolation contradicts the exact distance");
      out.verdict = Classification::Verdict::gap;
      out.gap = cert;
      return out;
    }
  }

  DenseCertificate dc;
  for (std::int64_t c = 0; c <= twoM; ++c)
    if (B.cell_occupied(c)) ++dc.occupied_cells;
  dc.coverage = Rat(dc.occupied_cells) * s;
  out.verdict = Classification::Verdict::dense;
  out.dense = dc;
  if (dc.coverage < c0)
    out.findings.push_back(
        {Finding::Severity::theorem_violation, "quotient_gap",
         "no gap found but occupancy " + format_rational(dc.coverage) +
             " is below the dichotomy budget " + format_rational(c0)});
  return out;
}

struct DyadicDensityResult {
  bool ok = true;
  int fail_level = -1;
  std::int64_t fail_p = 0;
  // halving ancestry of the failing point, from (0, p0) down
  std::vector<std::pair<int, std::int64_t>> chain;
};

// Run the dense-case induction forward: every dyadic rational p/2^n in [0,1],
// n <= m-1, must lie within 2s of a member of B.
inline DyadicDensityResult dyadic_density_check(const QuotientSet& B,
                                                const Classification& cls) {
  if (cls.verdict != Classification::Verdict::dense)
    throw Error("dyadic_density_check: requires a dense classification");
  DyadicDensityResult res;
  const Rat two_s = Rat(2) * B.s();
  for (int n = 0; n + 1 <= B.s_log; ++n) {
    for (std::int64_t p = 0; p <= (1ll << n); ++p) {
      Rat x(p, 1ll << n);
      bool ok = false;
      std::int64_t cell = to_i64(floor_rat(x * pow2(B.s_log)));
      for (std::int64_t c = cell - 2; c <= cell + 2 && !ok; ++c) {
        auto [lo, hi] = B.members_in_cell(c);
        for (std::size_t i = lo; i < hi; ++i) {
          Rat d = B.member_value(B.members[i]) - x;
          if (d < 0) d = -d;
          if (d <= two_s) { ok = true; break; }
        }
      }
      if (!ok) {
        res.ok = false;
        res.fail_level = n;
        res.fail_p = p;
        // ancestry: strip one halving per step
        std::vector<std::pair<int, std::int64_t>> chain;
        std::int64_t pp = p;
        for (int lvl = n; lvl >= 0; --lvl) {
          chain.emplace_back(lvl, pp);
          if (lvl > 0) pp = pp < (1ll << (lvl - 1)) ? pp : pp - (1ll << (lvl - 1));
        }
        std::reverse(chain.begin(), chain.end());
        res.chain = std::move(chain);
        return res;
      }
    }
  }
  return res;
}

}  // namespace splab
