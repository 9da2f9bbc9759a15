#include "splab/oracles.hpp"

#include "splab/verify.hpp"
#include "support/oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace splab;

TEST_CASE("plunnecke_refinement on the two-element subset of Z5") {
  auto x = FiniteGroupSet::modular(5, {0, 1});
  auto r = plunnecke_refinement(x, {x, x}, {Rat(3, 2), Rat(3, 2)}, false);
  CHECK(r.subset.elems == std::vector<std::int64_t>{0, 1});
  CHECK(r.ratio == Rat(2));  // #(X+X+X) = 4 over #X' = 2
  CHECK(r.ratio <= Rat(9, 4));
  CHECK(r.method == RefinementResult::Method::exhaustive);
}

TEST_CASE("plunnecke_refinement: translates and whole groups are lossless") {
  auto x = FiniteGroupSet::integers({3});
  auto y = FiniteGroupSet::integers({0, 4, 9});
  auto r = plunnecke_refinement(x, {y}, {Rat(3)}, false);
  CHECK(r.subset.size() == 1);
  CHECK(r.ratio == Rat(3));  // singleton: ratio = #Y = K

  auto g = FiniteGroupSet::modular(5, {0, 1, 2, 3, 4});
  auto rg = plunnecke_refinement(g, {g}, {Rat(1)}, true);
  CHECK(rg.ratio == Rat(1));
  CHECK(rg.subset.size() * 2 >= g.size());
}

TEST_CASE("plunnecke_refinement rejects a failed hypothesis") {
  auto x = FiniteGroupSet::integers({0, 1});
  auto y = FiniteGroupSet::integers({0, 2, 4});
  CHECK_THROWS_AS(plunnecke_refinement(x, {y}, {Rat(1)}, false), HypothesisViolation);
}

TEST_CASE("plunnecke plain form: exhaustive over subsets of {0..5}") {
  const std::uint32_t full = (1u << 6) - 1;
  for (std::uint32_t xm = 1; xm <= full; ++xm)
    for (std::uint32_t ym = 1; ym <= full; ++ym) {
      auto xe = detail::mask_to_elems(xm);
      auto ye = detail::mask_to_elems(ym);
      auto X = FiniteGroupSet::integers(xe);
      auto Y = FiniteGroupSet::integers(ye);
      Rat k(static_cast<std::int64_t>(detail::group_sum(X, Y).size()),
            static_cast<std::int64_t>(X.size()));
      auto r = plunnecke_refinement(X, {Y, Y}, {k, k}, false);
      REQUIRE(r.ratio <= k * k);
    }
}

TEST_CASE("greedy peeling covers at least half, first crossing at the last piece") {
  // 24 elements forces the ratio-greedy path
  std::vector<std::int64_t> xe;
  for (int i = 0; i < 20; ++i) xe.push_back(i);
  for (int i = 0; i < 4; ++i) xe.push_back(100 + 7 * i);
  auto X = FiniteGroupSet::integers(xe);
  auto Y = FiniteGroupSet::integers({0, 1, 2});
  Rat k(static_cast<std::int64_t>(detail::group_sum(X, Y).size()),
        static_cast<std::int64_t>(X.size()));
  auto r = plunnecke_refinement(X, {Y}, {k}, true);
  CHECK(r.method == RefinementResult::Method::ratio_greedy);
  CHECK(r.subset.size() * 2 >= X.size());
  std::size_t acc = 0;
  for (std::size_t i = 0; i < r.peel_sizes.size(); ++i) {
    bool last = i + 1 == r.peel_sizes.size();
    if (!last) CHECK(acc * 2 < X.size());  // peeling continues only below half
    acc += r.peel_sizes[i];
  }
  CHECK(acc * 2 >= X.size());
  CHECK(acc == r.subset.size());
}

TEST_CASE("ruzsa_triangle_check examples") {
  auto check = ruzsa_triangle_check(FiniteGroupSet::integers({0, 2}),
                                    FiniteGroupSet::integers({0, 1}),
                                    FiniteGroupSet::integers({0, 2}));
  CHECK(check.first == 3);
  CHECK(check.second == Rat(8));

  auto c2 = ruzsa_triangle_check(FiniteGroupSet::integers({0}),
                                 FiniteGroupSet::integers({0, 1, 2, 3, 4}),
                                 FiniteGroupSet::integers({5}));
  CHECK(c2.first == 1);
  CHECK(c2.second == Rat(5));

  CHECK_THROWS_AS(ruzsa_triangle_check(FiniteGroupSet::integers({0}),
                                       FiniteGroupSet::integers({}),
                                       FiniteGroupSet::integers({0})),
                  Error);
}

TEST_CASE("ruzsa triangle: self case never violates") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::int64_t> e;
    int n = 1 + static_cast<int>(detail::uniform_below(rng, 10));
    for (int i = 0; i < n; ++i)
      e.push_back(static_cast<std::int64_t>(detail::uniform_below(rng, 30)));
    auto X = FiniteGroupSet::integers(e);
    CHECK_NOTHROW(ruzsa_triangle_check(X, X, X));
  }
}

TEST_CASE("exhaustive ruzsa over {0..4} has zero failures") {
  auto sum = verify_ruzsa_exhaustive(5);
  CHECK(sum.instances == 31ll * 31 * 31);
  CHECK(sum.failures == 0);
}

TEST_CASE("discretized_plunnecke: singleton translates cost nothing") {
  GridSet x(Scale(6), 64, 128, {64, 70, 77, 90, 111});
  GridSet y(Scale(6), 64, 128, {73});
  auto r = discretized_plunnecke(x, {y}, {Rat(1)}, Scale(6));
  CHECK(r.refined.size() * 2 >= x.size());
  CHECK(r.ratio <= Rat(8));
  CHECK(r.findings.empty());
}

TEST_CASE("discretized_plunnecke: full grid doubling") {
  std::vector<std::int64_t> all;
  for (std::int64_t k = 64; k < 128; ++k) all.push_back(k);
  GridSet x(Scale(6), 64, 128, all);
  auto r = discretized_plunnecke(x, {x}, {Rat(2)}, Scale(6));
  CHECK(r.cells_after * 2 >= r.cells_before);
  CHECK(r.ratio <= Rat(8));  // well inside the 8k budget
  // refined output is a subset of x with at least half the delta-cells
  CHECK(std::includes(x.indices().begin(), x.indices().end(),
                      r.refined.indices().begin(), r.refined.indices().end()));
}

TEST_CASE("discretized_plunnecke: arithmetic progression at L=6") {
  std::vector<std::int64_t> ap;
  for (int i = 0; i < 16; ++i) ap.push_back(64 + 4 * i);
  GridSet x(Scale(6), 64, 128, ap);
  auto r = discretized_plunnecke(x, {x}, {Rat(2)}, Scale(6));
  CHECK(r.refined.size() * 2 >= x.size());
  CHECK(r.ratio <= Rat(2) * 8 * 2);
  CHECK_THROWS_AS(discretized_plunnecke(x, {x}, {Rat(1)}, Scale(6)),
                  HypothesisViolation);
}

TEST_CASE("discretized_triangle: singletons and full grids") {
  GridSet s(Scale(6), 64, 128, {77});
  auto r = discretized_triangle(s, s, s, Scale(6));
  CHECK(r.first == 1);
  CHECK(r.second == Rat(1));

  std::vector<std::int64_t> all;
  for (std::int64_t k = 64; k <= 128; ++k) all.push_back(k);
  GridSet f(Scale(6), 64, 128, all);
  auto rf = discretized_triangle(f, f, f, Scale(6));
  CHECK(rf.first <= 8 * to_i64(floor_rat(rf.second)) + 8);
}

TEST_CASE("discretized_triangle holds on 100 random 20-point sets at L=8") {
  auto sum = verify_triangle_random(100, 2024, 8, 20);
  CHECK(sum.instances == 100);
  CHECK(sum.failures == 0);
}
