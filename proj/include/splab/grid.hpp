#pragma once

// Dyadic grid sets: exact representation of delta-discretized subsets of a
// bounded interval as integer indices at scale 2^-L, with the covering,
// sumset, product and concentration primitives everything else builds on.
//
// Covering numbers are aligned-cell counts, not minimal covers. The cell
// partition is itself a valid cover and any length-t interval meets at most
// two aligned cells, so cell_count/2 <= E_t(X) <= cell_count; downstream
// inequality checks budget that factor of two explicitly.

#include "splab/exact.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace splab {

// Grid step delta = 2^-log_inv. Coarser scale = smaller log_inv.
struct Scale {
  int log_inv;
  explicit Scale(int L) : log_inv(L) {
    if (L < 1) throw Error("Scale: log_inv must be >= 1");
  }
  bool operator==(const Scale& o) const { return log_inv == o.log_inv; }
  Rat delta() const { return pow2r(-log_inv); }
};

namespace detail {

// Fixed-offset bit vector used by the sumset kernels.
class BitCover {
 public:
  BitCover(std::int64_t lo, std::int64_t hi) : lo_(lo) {
    if (hi < lo) throw Error("BitCover: empty range");
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span > (1ull << 28)) throw Error("BitCover: range too large");
    words_.assign((span + 63) / 64 + 1, 0);  // spare word absorbs carry writes
  }
  void set(std::int64_t v) {
    std::uint64_t off = static_cast<std::uint64_t>(v - lo_);
    words_[off >> 6] |= 1ull << (off & 63);
  }
  bool test(std::int64_t v) const {
    std::uint64_t off = static_cast<std::uint64_t>(v - lo_);
    return words_[off >> 6] & (1ull << (off & 63));
  }
  // *this |= other << shift, where shift is in bit positions of the common
  // value space (other's value v lands at v + shift).
  void or_shifted(const BitCover& other, std::int64_t shift) {
    std::int64_t bit0 = other.lo_ + shift - lo_;
    if (bit0 < 0) throw Error("BitCover: negative placement");
    std::uint64_t word0 = static_cast<std::uint64_t>(bit0) >> 6;
    unsigned rem = static_cast<unsigned>(bit0 & 63);
    for (std::size_t i = 0; i < other.words_.size(); ++i) {
      std::uint64_t w = other.words_[i];
      if (!w) continue;
      words_[word0 + i] |= w << rem;
      if (rem) words_[word0 + i + 1] |= w >> (64 - rem);
    }
  }
  std::int64_t popcount() const {
    std::int64_t c = 0;
    for (auto w : words_) c += __builtin_popcountll(w);
    return c;
  }
  std::vector<std::int64_t> to_indices() const {
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        unsigned b = static_cast<unsigned>(__builtin_ctzll(w));
        out.push_back(lo_ + static_cast<std::int64_t>(i * 64 + b));
        w &= w - 1;
      }
    }
    return out;
  }

 private:
  std::int64_t lo_;
  std::vector<std::uint64_t> words_;
};

inline std::vector<std::int64_t> sorted_unique(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace detail

// A delta-separated subset of [ambient_lo, ambient_hi] * 2^-L, stored as
// strictly increasing integer grid indices. Separation by at least 2^-L is
// automatic from integrality. Immutable after construction.
class GridSet {
 public:
  GridSet(Scale scale, std::int64_t ambient_lo, std::int64_t ambient_hi,
          std::vector<std::int64_t> indices, bool presorted = false)
      : scale_(scale), ambient_lo_(ambient_lo), ambient_hi_(ambient_hi),
        indices_(presorted ? std::move(indices)
                           : detail::sorted_unique(std::move(indices))) {
    if (ambient_hi_ < ambient_lo_) throw Error("GridSet: empty ambient interval");
    if (presorted) {
      for (std::size_t i = 1; i < indices_.size(); ++i)
        if (indices_[i - 1] >= indices_[i])
          throw Error("GridSet: indices not strictly increasing");
    }
    if (!indices_.empty() &&
        (indices_.front() < ambient_lo_ || indices_.back() > ambient_hi_))
      throw Error("GridSet: index outside ambient interval");
  }

  const Scale& scale() const { return scale_; }
  std::int64_t ambient_lo() const { return ambient_lo_; }
  std::int64_t ambient_hi() const { return ambient_hi_; }
  const std::vector<std::int64_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  Rat point(std::size_t i) const { return Rat(indices_[i]) * scale_.delta(); }

  bool operator==(const GridSet& o) const {
    return scale_ == o.scale_ && ambient_lo_ == o.ambient_lo_ &&
           ambient_hi_ == o.ambient_hi_ && indices_ == o.indices_;
  }

  // Text format: one header line "L ambient_lo ambient_hi n", then n indices,
  // newline separated, ASCII decimal. Round-trips exactly.
  void write(std::ostream& os) const {
    os << scale_.log_inv << ' ' << ambient_lo_ << ' ' << ambient_hi_ << ' '
       << indices_.size() << '\n';
    for (std::int64_t k : indices_) os << k << '\n';
  }
  static GridSet read(std::istream& is) {
    int L;
    std::int64_t lo, hi;
    std::size_t n;
    if (!(is >> L >> lo >> hi >> n)) throw Error("GridSet::read: bad header");
    std::vector<std::int64_t> idx(n);
    for (std::size_t i = 0; i < n; ++i)
      if (!(is >> idx[i])) throw Error("GridSet::read: truncated index list");
    return GridSet(Scale(L), lo, hi, std::move(idx));
  }
  std::string to_text() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }
  static GridSet from_text(const std::string& text) {
    std::istringstream is(text);
    return read(is);
  }

 private:
  Scale scale_;
  std::int64_t ambient_lo_, ambient_hi_;
  std::vector<std::int64_t> indices_;
};

// Snap exact rational points to the grid by round-half-up (ties upward, so
// certificates are stable). Collisions collapse.
inline GridSet discretize(const std::vector<Rat>& points, Scale scale,
                          const Rat& ambient_lo = Rat(1),
                          const Rat& ambient_hi = Rat(2)) {
  Rat step = pow2r(scale.log_inv);  // 2^L
  Rat lo_idx = ambient_lo * step, hi_idx = ambient_hi * step;
  if (denominator(lo_idx) != 1 || denominator(hi_idx) != 1)
    throw Error("discretize: ambient endpoints must lie on the grid");
  std::vector<std::int64_t> idx;
  idx.reserve(points.size());
  for (const Rat& x : points) {
    if (x < ambient_lo || x > ambient_hi)
      throw Error("discretize: point " + format_rational(x) +
                  " outside ambient interval [" + format_rational(ambient_lo) +
                  ", " + format_rational(ambient_hi) + "]");
    idx.push_back(to_i64(round_half_up(x * step)));
  }
  return GridSet(scale, to_i64(numerator(lo_idx)), to_i64(numerator(hi_idx)),
                 std::move(idx));
}

// Number of aligned 2^-L' cells occupied by X (the covering proxy E_t).
// If t is at least as long as the ambient interval the answer is clamped to 1.
inline std::int64_t covering_number(const GridSet& x, Scale t_scale) {
  if (x.empty()) throw Error("covering_number: empty set");
  if (t_scale.log_inv > x.scale().log_inv)
    throw Error("covering_number: t finer than the set's scale");
  std::int64_t w = 1ll << (x.scale().log_inv - t_scale.log_inv);
  if (x.ambient_hi() - x.ambient_lo() <= w) return 1;  // t covers the ambient
  std::int64_t count = 0;
  std::int64_t last = std::numeric_limits<std::int64_t>::min();
  for (std::int64_t k : x.indices()) {
    std::int64_t cell = floor_div(k, w);
    if (cell != last) {
      ++count;
      last = cell;
    }
  }
  return count;
}

namespace detail {

inline void require_common_scale(const GridSet& x, const GridSet& y,
                                 const char* op) {
  if (!(x.scale() == y.scale()))
    throw Error(std::string(op) + ": scale mismatch (" +
                std::to_string(x.scale().log_inv) + " vs " +
                std::to_string(y.scale().log_inv) + ")");
}

}  // namespace detail

// Exact Minkowski sum; the grid is closed under addition of indices. Dense
// ranges go through the word-shifted bitset kernel, sparse wide-range inputs
// through pairwise enumeration.
inline GridSet sumset(const GridSet& x, const GridSet& y) {
  detail::require_common_scale(x, y, "sumset");
  std::int64_t lo = x.ambient_lo() + y.ambient_lo();
  std::int64_t hi = x.ambient_hi() + y.ambient_hi();
  if (x.empty() || y.empty()) return GridSet(x.scale(), lo, hi, {});
  std::int64_t range = (x.indices().back() + y.indices().back()) -
                       (x.indices().front() + y.indices().front());
  if (range <= (1ll << 26)) {
    detail::BitCover ybits(y.indices().front(), y.indices().back());
    for (std::int64_t k : y.indices()) ybits.set(k);
    detail::BitCover acc(x.indices().front() + y.indices().front(),
                         x.indices().back() + y.indices().back());
    for (std::int64_t k : x.indices()) acc.or_shifted(ybits, k);
    return GridSet(x.scale(), lo, hi, acc.to_indices(), true);
  }
  if (x.size() * y.size() > (1ull << 26))
    throw Error("sumset: input too large for exact enumeration");
  std::vector<std::int64_t> sums;
  sums.reserve(x.size() * y.size());
  for (std::int64_t a : x.indices())
    for (std::int64_t b : y.indices()) sums.push_back(a + b);
  return GridSet(x.scale(), lo, hi, std::move(sums));
}

inline GridSet negate(const GridSet& x) {
  std::vector<std::int64_t> idx(x.indices().size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    idx[i] = -x.indices()[x.indices().size() - 1 - i];
  return GridSet(x.scale(), -x.ambient_hi(), -x.ambient_lo(), std::move(idx), true);
}

inline GridSet difference_set(const GridSet& x, const GridSet& y) {
  return sumset(x, negate(y));
}

inline GridSet iterated_sumset(const GridSet& x, int k) {
  if (k < 1) throw Error("iterated_sumset: k must be >= 1");
  GridSet acc = x;
  for (int i = 1; i < k; ++i) acc = sumset(acc, x);
  return acc;
}

// Union of two sets at a common scale; ambient is the hull.
inline GridSet set_union(const GridSet& x, const GridSet& y) {
  detail::require_common_scale(x, y, "set_union");
  std::vector<std::int64_t> idx = x.indices();
  idx.insert(idx.end(), y.indices().begin(), y.indices().end());
  return GridSet(x.scale(), std::min(x.ambient_lo(), y.ambient_lo()),
                 std::max(x.ambient_hi(), y.ambient_hi()), std::move(idx));
}

// Products k1*k2 are exact integers at scale 2^-2L; they are collapsed to
// aligned cells at out_scale by floor division. The returned cardinality is
// the cell-count proxy for E_out(X*Y).
inline GridSet product_cover(const GridSet& x, const GridSet& y, Scale out_scale) {
  detail::require_common_scale(x, y, "product_cover");
  int L = x.scale().log_inv;
  if (out_scale.log_inv > 2 * L)
    throw Error("product_cover: out_scale finer than the exact product grid");
  int shift = 2 * L - out_scale.log_inv;
  std::int64_t w = 1ll << shift;
  auto corner_cells = [&](const GridSet& a, const GridSet& b) {
    std::int64_t c[4] = {a.ambient_lo() * b.ambient_lo(), a.ambient_lo() * b.ambient_hi(),
                         a.ambient_hi() * b.ambient_lo(), a.ambient_hi() * b.ambient_hi()};
    std::int64_t lo = *std::min_element(c, c + 4), hi = *std::max_element(c, c + 4);
    return std::pair<std::int64_t, std::int64_t>(floor_div(lo, w), floor_div(hi, w));
  };
  auto [alo, ahi] = corner_cells(x, y);
  if (x.empty() || y.empty()) return GridSet(out_scale, alo, ahi, {});
  std::vector<std::int64_t> cells;
  cells.reserve(x.size() * y.size());
  for (std::int64_t k1 : x.indices())
    for (std::int64_t k2 : y.indices()) cells.push_back(floor_div(k1 * k2, w));
  return GridSet(out_scale, alo, ahi, std::move(cells));
}

// x -> lambda*x + shift in exact rational arithmetic, then round-half-up
// discretization at out_scale. lambda != 0.
inline GridSet affine_image(const GridSet& x, const Rat& lambda, const Rat& shift,
                            Scale out_scale) {
  if (lambda == 0) throw Error("affine_image: lambda must be nonzero");
  Rat in_step = x.scale().delta();
  Rat factor = lambda * in_step * pow2r(out_scale.log_inv);
  Rat offset = shift * pow2r(out_scale.log_inv);
  auto map_index = [&](std::int64_t k) {
    return to_i64(round_half_up(Rat(k) * factor + offset));
  };
  std::int64_t a = map_index(x.ambient_lo()), b = map_index(x.ambient_hi());
  std::vector<std::int64_t> idx;
  idx.reserve(x.size());
  for (std::int64_t k : x.indices()) idx.push_back(map_index(k));
  return GridSet(out_scale, std::min(a, b), std::max(a, b), std::move(idx));
}

// Count of t-cells occupied by both X and Y.
inline std::int64_t common_cells(const GridSet& x, const GridSet& y, Scale t_scale) {
  detail::require_common_scale(x, y, "common_cells");
  if (t_scale.log_inv > x.scale().log_inv)
    throw Error("common_cells: t finer than the sets' scale");
  std::int64_t w = 1ll << (x.scale().log_inv - t_scale.log_inv);
  std::int64_t count = 0;
  std::size_t i = 0, j = 0;
  std::int64_t last = std::numeric_limits<std::int64_t>::min();
  while (i < x.indices().size() && j < y.indices().size()) {
    std::int64_t cx = floor_div(x.indices()[i], w);
    std::int64_t cy = floor_div(y.indices()[j], w);
    if (cx < cy) ++i;
    else if (cy < cx) ++j;
    else {
      if (cx != last) { ++count; last = cx; }
      ++i;
    }
  }
  return count;
}

// Non-concentration profile: the exact maximum of #(X cap I) / (|I|^sigma #X)
// over closed dyadic intervals of length 2^-l, 0 <= l <= L, aligned and
// half-shifted. Any interval of dyadic length is contained in a scanned
// interval of twice the length, so the reported value is within a factor
// 2^sigma <= 2 of the supremum over all such intervals.
struct ConcentrationProfile {
  Rat sigma;
  Pow2Scaled c_observed;
  std::int64_t witness_lo = 0, witness_hi = 0;  // grid indices, closed interval
  int witness_level = 0;                        // |I| = 2^-witness_level
  std::int64_t witness_count = 0;
};

namespace detail {

inline std::int64_t count_in_closed(const std::vector<std::int64_t>& sorted,
                                    std::int64_t lo, std::int64_t hi) {
  auto a = std::lower_bound(sorted.begin(), sorted.end(), lo);
  auto b = std::upper_bound(sorted.begin(), sorted.end(), hi);
  return static_cast<std::int64_t>(b - a);
}

}  // namespace detail

inline ConcentrationProfile non_concentration_constant(const GridSet& x, const Rat& sigma) {
  if (x.empty()) throw Error("non_concentration_constant: empty set");
  if (sigma <= 0 || sigma >= 1)
    throw Error("non_concentration_constant: sigma must lie in (0,1)");
  const int L = x.scale().log_inv;
  const auto& idx = x.indices();
  const std::int64_t n = static_cast<std::int64_t>(idx.size());
  ConcentrationProfile best;
  best.sigma = sigma;
  auto consider = [&](std::int64_t count, int level, std::int64_t lo, std::int64_t hi) {
    if (count <= 0) return;
    Pow2Scaled cand(Rat(count, n), sigma * level);
    if (best.c_observed.is_zero() || best.c_observed < cand) {
      best.c_observed = cand;
      best.witness_lo = lo;
      best.witness_hi = hi;
      best.witness_level = level;
      best.witness_count = count;
    }
  };
  for (int l = 0; l <= L; ++l) {
    std::int64_t w = 1ll << (L - l);
    std::vector<std::int64_t> starts;
    starts.reserve(idx.size() * 3);
    for (std::int64_t k : idx) {
      std::int64_t m = floor_div(k, w);
      starts.push_back(m * w);
      starts.push_back((m - 1) * w);
      if (w >= 2) {
        std::int64_t h = floor_div(k - w / 2, w);
        starts.push_back(h * w + w / 2);
      }
    }
    starts = detail::sorted_unique(std::move(starts));
    for (std::int64_t s : starts)
      consider(detail::count_in_closed(idx, s, s + w), l, s, s + w);
  }
  return best;
}

// Re-evaluate a profile's witness; used by invariant checks.
inline bool concentration_witness_valid(const GridSet& x, const ConcentrationProfile& p) {
  std::int64_t count =
      detail::count_in_closed(x.indices(), p.witness_lo, p.witness_hi);
  if (count != p.witness_count) return false;
  std::int64_t width = p.witness_hi - p.witness_lo;
  if (width != (1ll << (x.scale().log_inv - p.witness_level))) return false;
  Pow2Scaled again(Rat(count, static_cast<std::int64_t>(x.size())),
                   p.sigma * p.witness_level);
  return again == p.c_observed;
}

}  // namespace splab
