#pragma once

// Experiment orchestration: a declarative key = value config expands into
// (family, L) rows; each row runs the full pipeline
//   generate -> concentration profile -> covering numbers -> K
//            -> regularize -> popular pair -> regularize again
//            -> quotient set -> dense/gap classification
//            -> case-specific energy analysis
// and serializes into a CSV line plus a JSON record. Rows run independently
// (optionally in parallel); assembly is order-stable by (family, L).

#include "splab/energy.hpp"
#include "splab/exact.hpp"
#include "splab/family.hpp"
#include "splab/findings.hpp"
#include "splab/grid.hpp"
#include "splab/quotient.hpp"
#include "splab/report.hpp"
#include "splab/tree.hpp"

#include <atomic>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace splab {

struct SweepConfig {
  std::string csv_path;
  std::string json_path;
  int branch_log = 2;
  std::optional<Rat> gamma;        // defaults to gamma_star(sigma) per row
  int threads = 1;
  std::int64_t pair_budget = 40'000'000;
  Rat dichotomy_budget = Rat(1, 4);
  std::vector<std::pair<FamilySpec, std::vector<int>>> families;  // spec + L list
};

// ---------------------------------------------------------------------------
// Config file: '#' comments, [section] headers, key = value lines. Sections:
// one [sweep], any number of [family].

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, sep)) out.push_back(trim(tok));
  return out;
}

}  // namespace detail

inline SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig cfg;
  std::string section;
  FamilySpec cur;
  std::vector<int> cur_ls;
  bool in_family = false;
  auto flush_family = [&]() {
    if (!in_family) return;
    if (cur.name.empty()) cur.name = family_kind_name(cur.kind);
    if (cur_ls.empty()) cur_ls.push_back(cur.L);
    cfg.families.emplace_back(cur, cur_ls);
    cur = FamilySpec{};
    cur_ls.clear();
  };
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error("config line " + std::to_string(lineno) +
                                          ": malformed section header");
      flush_family();
      section = line.substr(1, line.size() - 2);
      in_family = section == "family";
      if (section != "family" && section != "sweep")
        throw Error("config line " + std::to_string(lineno) + ": unknown section [" +
                    section + "]");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string val = detail::trim(line.substr(eq + 1));
    if (section == "sweep") {
      if (key == "csv") cfg.csv_path = val;
      else if (key == "json") cfg.json_path = val;
      else if (key == "branch_log") cfg.branch_log = std::stoi(val);
      else if (key == "gamma") cfg.gamma = parse_rational(val);
      else if (key == "threads") cfg.threads = std::stoi(val);
      else if (key == "pair_budget") cfg.pair_budget = std::stoll(val);
      else if (key == "dichotomy_budget") cfg.dichotomy_budget = parse_rational(val);
      else throw Error("config line " + std::to_string(lineno) + ": unknown sweep key '" +
                       key + "'");
    } else if (section == "family") {
      if (key == "name") cur.name = val;
      else if (key == "kind") cur.kind = family_kind_from_name(val);
      else if (key == "sigma") cur.sigma_target = parse_rational(val);
      else if (key == "L") {
        cur_ls.clear();
        for (const auto& t : detail::split(val, ',')) cur_ls.push_back(std::stoi(t));
        if (!cur_ls.empty()) cur.L = cur_ls.front();
      } else if (key == "seed") cur.seed = std::stoull(val);
      else if (key == "arity_log") cur.arity_log = std::stoi(val);
      else if (key == "keep") {
        cur.keep.clear();
        for (const auto& t : detail::split(val, ',')) cur.keep.push_back(std::stoi(t));
      } else if (key == "step") cur.step = std::stoll(val);
      else if (key == "ratio") cur.ratio = parse_rational(val);
      else if (key == "nc_threshold") cur.nc_threshold = parse_rational(val);
      else if (key == "max_attempts") cur.max_attempts = std::stoi(val);
      else if (key == "path") cur.path = val;
      else throw Error("config line " + std::to_string(lineno) + ": unknown family key '" +
                       key + "'");
    } else {
      throw Error("config line " + std::to_string(lineno) + ": key outside any section");
    }
  }
  flush_family();
  return cfg;
}

inline SweepConfig parse_sweep_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  return parse_sweep_config(in);
}

// ---------------------------------------------------------------------------
// Single-set pipeline

struct RowResult {
  ExpansionReport report;
  Json detail = Json::object();
  std::vector<Finding> findings;
};

inline RowResult analyze_set(const std::string& name, const GridSet& a,
                             const Rat& sigma, std::optional<Rat> gamma_override,
                             int branch_log, std::int64_t pair_budget = 40'000'000,
                             const Rat& dichotomy_budget = Rat(1, 4)) {
  if (a.size() > 512)
    throw Error("analyze_set: #A = " + std::to_string(a.size()) +
                " exceeds the desk-scale budget of 512 points; use a sparser family");
  if (a.scale().log_inv > 20)
    throw Error("analyze_set: L = " + std::to_string(a.scale().log_inv) +
                " exceeds the desk-scale budget of 20");
  RowResult rr;
  ExpansionReport& r = rr.report;
  r.family = name;
  r.L = a.scale().log_inv;
  r.sigma_target = sigma;
  r.n = static_cast<std::int64_t>(a.size());

  TheoreticalConstants tc = theoretical_constants(sigma, gamma_override);
  r.c_theory = tc.c_max;
  rr.detail["constants"] = to_json(tc);

  auto profile = non_concentration_constant(a, sigma);
  r.c_observed = profile.c_observed.decimal(9);
  rr.detail["concentration"] = to_json(profile);

  const Scale delta = a.scale();
  r.cover_sum = static_cast<std::int64_t>(sumset(a, a).size());
  r.cover_prod = static_cast<std::int64_t>(product_cover(a, a, delta).size());
  r.doubling = Rat(r.cover_sum + r.cover_prod, r.n);

  if (a.scale().log_inv % branch_log != 0)
    throw Error("analyze_set: branch_log must divide L");
  TreeParams params(branch_log, a.scale().log_inv / branch_log);
  auto [aprime, cert] = uniformize(a, params);
  rr.detail["tree_certificate"] = to_json(cert);

  PopularPair pp = select_popular_pair(aprime);
  rr.detail["popular_pair"] = to_json(pp);

  // the quotient stage runs on the regularized set
  const GridSet& a1 = aprime;

  QuotientBuildOptions qopts;
  qopts.pair_budget = pair_budget;
  QuotientSet B = build_quotient_set(a1, tc.gamma, qopts);
  rr.detail["quotient"] = quotient_summary(B);
  Classification cls = classify(B, dichotomy_budget);
  rr.detail["classification"] = to_json(cls);
  for (const auto& f : cls.findings) rr.findings.push_back(f);

  if (cls.verdict == Classification::Verdict::dense) {
    r.verdict = "dense";
    auto dd = dyadic_density_check(B, cls);
    rr.detail["dyadic_density_ok"] = dd.ok;
    if (!dd.ok)
      rr.findings.push_back({Finding::Severity::theorem_violation, "quotient_gap",
                             "dense verdict but dyadic point " +
                                 std::to_string(dd.fail_p) + "/2^" +
                                 std::to_string(dd.fail_level) +
                                 " is farther than 2s from B"});
    DenseSelection sel = dense_case_select(B);
    rr.detail["dense_selection"] =
        Json{{"generators", {sel.generators[0], sel.generators[1], sel.generators[2],
                             sel.generators[3]}},
             {"b", format_rational(sel.b)},
             {"popularity", sel.popularity},
             {"total_mass", sel.total_mass}};
    Rat d1 = Rat(sel.generators[0] - sel.generators[1]) * delta.delta();
    Rat d2 = Rat(sel.generators[2] - sel.generators[3]) * delta.delta();
    auto qc = quadruple_count(a1, d1, d2, delta.delta(), tc.gamma);
    r.q_total = qc.total;
    r.q_far = qc.far;
    r.q_near = qc.near;
    auto eb = energy_lower_bound(a1, d1, d2);
    rr.detail["energy"] = Json{{"cover", eb.cover}, {"lower", format_rational(eb.lower)}};
    auto lub = lemma_upper_bounds(aprime, a1, d1, d2, 2, sigma);
    rr.detail["upper_bounds"] = Json{{"cover_pair", lub.cover_pair},
                                     {"cover_iterated", lub.cover_iterated},
                                     {"a2_size", lub.a2_size},
                                     {"comparison", lub.comparison},
                                     {"ratio_pair", lub.ratio_pair},
                                     {"ratio_iterated", lub.ratio_iterated}};
  } else {
    r.verdict = "gap";
    r.gap_b = cls.gap->b;
    GapVectors gv = gap_case_vectors(*cls.gap, delta);
    r.e1 = gv.e1;
    r.e2 = gv.e2;
    auto qc = quadruple_count(a1, gv.e1, gv.e2, delta.delta(), tc.gamma);
    r.q_total = qc.total;
    r.q_far = qc.far;
    r.q_near = qc.near;
    if (qc.far && *qc.far != 0)
      rr.findings.push_back({Finding::Severity::theorem_violation, "expansion_analysis",
                             "gap case produced " + std::to_string(*qc.far) +
                                 " quadruples with an admissible denominator"});
    auto eb = energy_lower_bound(a1, gv.e1, gv.e2);
    rr.detail["energy"] = Json{{"cover", eb.cover}, {"lower", format_rational(eb.lower)}};
    auto lub = lemma_upper_bounds(aprime, a1, gv.d1, gv.d2, gv.fold, sigma);
    rr.detail["upper_bounds"] = Json{{"cover_pair", lub.cover_pair},
                                     {"cover_iterated", lub.cover_iterated},
                                     {"a2_size", lub.a2_size},
                                     {"comparison", lub.comparison},
                                     {"ratio_pair", lub.ratio_pair},
                                     {"ratio_iterated", lub.ratio_iterated}};
  }
  rr.detail["row"] = to_json(r);
  return rr;
}

// ---------------------------------------------------------------------------
// Sweep driver

struct SweepResult {
  std::vector<RowResult> rows;  // ordered by (family position, L position)
  Json bundle;
  int exit_code = 0;  // 0 ok, 1 operational error in some row, 2 theorem violation

  std::string csv() const {
    std::string out = expansion_csv_header() + "\n";
    for (const auto& rr : rows) out += expansion_csv_row(rr.report) + "\n";
    return out;
  }
};

inline Json config_echo(const SweepConfig& cfg) {
  Json fams = Json::array();
  for (const auto& [spec, ls] : cfg.families) {
    Json f{{"name", spec.name},
           {"kind", family_kind_name(spec.kind)},
           {"sigma", format_rational(spec.sigma_target)},
           {"L", ls},
           {"seed", spec.seed}};
    if (spec.kind == FamilyKind::cantor) {
      f["arity_log"] = spec.arity_log;
      f["keep"] = spec.keep;
    } else if (spec.kind == FamilyKind::ap) {
      f["step"] = spec.step;
    } else if (spec.kind == FamilyKind::gp) {
      f["ratio"] = format_rational(spec.ratio);
    } else if (spec.kind == FamilyKind::random_nc) {
      f["nc_threshold"] = format_rational(spec.nc_threshold);
    } else if (spec.kind == FamilyKind::custom_file) {
      f["path"] = spec.path;
    }
    fams.push_back(f);
  }
  Json j{{"branch_log", cfg.branch_log},
         {"threads", cfg.threads},
         {"pair_budget", cfg.pair_budget},
         {"dichotomy_budget", format_rational(cfg.dichotomy_budget)},
         {"families", fams}};
  if (cfg.gamma) j["gamma"] = format_rational(*cfg.gamma);
  return j;
}

inline SweepResult run_sweep(const SweepConfig& cfg) {
  struct Task {
    FamilySpec spec;
    int L;
  };
  std::vector<Task> tasks;
  for (const auto& [spec, ls] : cfg.families)
    for (int L : ls) {
      Task t{spec, L};
      t.spec.L = L;
      tasks.push_back(t);
    }

  SweepResult result;
  result.rows.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      const Task& t = tasks[i];
      RowResult& slot = result.rows[i];
      try {
        GridSet a = generate_family(t.spec);
        slot = analyze_set(t.spec.name, a, t.spec.sigma_target, cfg.gamma,
                           cfg.branch_log, cfg.pair_budget, cfg.dichotomy_budget);
      } catch (const std::exception& e) {
        slot.report.family = t.spec.name;
        slot.report.L = t.L;
        slot.report.sigma_target = t.spec.sigma_target;
        slot.report.verdict = "error";
        slot.report.error = e.what();
        slot.report.c_theory =
            theoretical_constants(t.spec.sigma_target, cfg.gamma).c_max;
      }
    }
  };
  int nthreads = std::max(1, cfg.threads);
  if (nthreads == 1 || tasks.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<Finding> all_findings;
  Json rows = Json::array();
  for (const auto& rr : result.rows) {
    rows.push_back(rr.detail.contains("row") ? rr.detail : Json{{"row", to_json(rr.report)}});
    for (const auto& f : rr.findings) all_findings.push_back(f);
  }
  result.bundle = Json{{"version", kVersion},
                       {"config", config_echo(cfg)},
                       {"rows", rows},
                       {"findings", to_json(all_findings)}};
  for (const auto& rr : result.rows) {
    if (rr.report.verdict == "error") result.exit_code = std::max(result.exit_code, 1);
    if (has_theorem_violation(rr.findings)) result.exit_code = 2;
  }
  return result;
}

inline void write_sweep_outputs(const SweepResult& res, const SweepConfig& cfg) {
  if (!cfg.csv_path.empty()) {
    std::ofstream out(cfg.csv_path);
    if (!out) throw Error("cannot write CSV to '" + cfg.csv_path + "'");
    out << res.csv();
  }
  if (!cfg.json_path.empty()) {
    std::ofstream out(cfg.json_path);
    if (!out) throw Error("cannot write JSON to '" + cfg.json_path + "'");
    out << res.bundle.dump(2) << "\n";
  }
}

}  // namespace splab
