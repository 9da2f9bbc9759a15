#pragma once

// JSON views of certificates, findings and report rows. Everything exact is
// rendered as a string ("num/den" for rationals) so bundles round-trip
// without loss; decimal fields are marked as such.

#include "splab/energy.hpp"
#include "splab/exact.hpp"
#include "splab/family.hpp"
#include "splab/findings.hpp"
#include "splab/grid.hpp"
#include "splab/quotient.hpp"
#include "splab/tree.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace splab {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::json;

inline Json to_json(const Finding& f) {
  return Json{{"severity", severity_name(f.severity)},
              {"module", f.module},
              {"message", f.message}};
}

inline Json to_json(const std::vector<Finding>& fs) {
  Json arr = Json::array();
  for (const auto& f : fs) arr.push_back(to_json(f));
  return arr;
}

inline Json to_json(const ConcentrationProfile& p) {
  return Json{{"sigma", format_rational(p.sigma)},
              {"c_observed_decimal", p.c_observed.decimal(9)},
              {"witness_lo", p.witness_lo},
              {"witness_hi", p.witness_hi},
              {"witness_level", p.witness_level},
              {"witness_count", p.witness_count}};
}

inline Json to_json(const UniformTreeCertificate& c) {
  return Json{{"class_per_level", c.class_per_level},
              {"survivors_per_level", c.survivors_per_level},
              {"final_size", c.final_size}};
}

inline Json quotient_summary(const QuotientSet& B) {
  std::int64_t occupied = 0;
  for (bool b : B.mask) occupied += b ? 1 : 0;
  // occupancy histogram: cells bucketed by floor(log2(mass))
  std::map<int, std::int64_t> hist;
  for (auto m : B.cell_mass) {
    if (m <= 0) continue;
    int bucket = 0;
    while ((1ll << (bucket + 1)) <= m) ++bucket;
    ++hist[bucket];
  }
  Json h = Json::object();
  for (auto [b, c] : hist) h[std::to_string(b)] = c;
  return Json{{"gamma", format_rational(B.gamma)},
              {"s_log", B.s_log},
              {"min_admissible", B.min_admissible},
              {"distinct_differences", B.diffs.size()},
              {"retained_members", B.members.size()},
              {"occupied_cells", occupied},
              {"mass_log2_histogram", h}};
}

inline Json to_json(const Classification& c) {
  Json j{{"verdict", c.verdict == Classification::Verdict::gap ? "gap" : "dense"},
         {"findings", to_json(c.findings)}};
  if (c.gap) {
    j["gap"] = Json{{"b", format_rational(c.gap->b)},
                    {"generators", {c.gap->generators[0], c.gap->generators[1],
                                    c.gap->generators[2], c.gap->generators[3]}},
                    {"isolated", c.gap->which == GapCertificate::Isolated::half
                                     ? "half"
                                     : "half_plus_one"},
                    {"target", format_rational(c.gap->target)},
                    {"distance", format_rational(c.gap->distance)}};
  }
  if (c.dense) {
    j["dense"] = Json{{"occupied_cells", c.dense->occupied_cells},
                      {"coverage", format_rational(c.dense->coverage)}};
  }
  return j;
}

inline Json to_json(const PopularPair& p) {
  return Json{{"b_index", p.b_index},
              {"abar_size", p.abar.size()},
              {"rho", format_rational(p.rho)},
              {"doubling", format_rational(p.doubling)},
              {"class_log", p.class_log},
              {"class_max", p.class_max},
              {"sum_total", p.sum_total}};
}

inline Json to_json(const TheoreticalConstants& tc) {
  return Json{{"sigma", format_rational(tc.sigma)},
              {"gamma", format_rational(tc.gamma)},
              {"gamma_star", format_rational(tc.gamma_star)},
              {"c_max", format_rational(tc.c_max)},
              {"dense_exponent_far", format_rational(tc.dense_exponent_far)},
              {"dense_exponent_near", format_rational(tc.dense_exponent_near)},
              {"gap_exponent", format_rational(tc.gap_exponent)},
              {"guaranteed_exponent", format_rational(tc.guaranteed_exponent)},
              {"measure_exponent", format_rational(tc.measure_exponent)},
              {"cardinality_exponent", format_rational(tc.cardinality_exponent)}};
}

inline Json to_json(const ExpansionReport& r) {
  Json j{{"family", r.family},
         {"L", r.L},
         {"sigma_target", format_rational(r.sigma_target)},
         {"n", r.n},
         {"c_observed_decimal", r.c_observed},
         {"cover_sum", r.cover_sum},
         {"cover_prod", r.cover_prod},
         {"K", format_rational(r.doubling)},
         {"verdict", r.verdict},
         {"c_theory", format_rational(r.c_theory)}};
  if (r.gap_b) j["gap_b"] = format_rational(*r.gap_b);
  if (r.e1) j["e1"] = format_rational(*r.e1);
  if (r.e2) j["e2"] = format_rational(*r.e2);
  if (r.q_total) j["q_total"] = *r.q_total;
  if (r.q_far) j["q_far"] = *r.q_far;
  if (r.q_near) j["q_near"] = *r.q_near;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

}  // namespace splab
