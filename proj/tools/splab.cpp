// splab: a desk-scale laboratory for sum/product expansion of discretized
// sets. Subcommands:
//   constants       exact exponent table for a given sigma
//   generate        write a set family to the GridSet text format
//   analyze         full pipeline on a single set
//   classify        quotient-set dense/gap dichotomy with certificate
//   verify-oracles  exhaustive and randomized inequality suites
//   sweep           run a declarative config of families and scales
//
// Exit codes: 0 success, 1 operational error, 2 theorem-violation finding.

#include "splab/energy.hpp"
#include "splab/family.hpp"
#include "splab/quotient.hpp"
#include "splab/report.hpp"
#include "splab/sweep.hpp"
#include "splab/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace splab;

int cmd_constants(const std::string& sigma_text, const std::string& gamma_text,
                  bool as_json) {
  std::optional<Rat> gamma;
  if (!gamma_text.empty()) gamma = parse_rational(gamma_text);
  TheoreticalConstants tc = theoretical_constants(parse_rational(sigma_text), gamma);
  if (as_json) {
    std::cout << to_json(tc).dump(2) << "\n";
    return 0;
  }
  std::cout << "sigma                 = " << format_rational(tc.sigma) << "\n"
            << "gamma                 = " << format_rational(tc.gamma) << "\n"
            << "gamma_star            = " << format_rational(tc.gamma_star) << "\n"
            << "c_max                 = " << format_rational(tc.c_max) << "\n"
            << "dense exponent (far)  = " << format_rational(tc.dense_exponent_far) << "\n"
            << "dense exponent (near) = " << format_rational(tc.dense_exponent_near) << "\n"
            << "gap exponent          = " << format_rational(tc.gap_exponent) << "\n"
            << "guaranteed exponent   = " << format_rational(tc.guaranteed_exponent) << "\n"
            << "measure exponent      = " << format_rational(tc.measure_exponent) << "\n"
            << "cardinality exponent  = " << format_rational(tc.cardinality_exponent) << "\n";
  return 0;
}

FamilySpec build_spec(const std::string& kind, const std::string& name,
                      const std::string& sigma, int L, std::uint64_t seed,
                      int arity_log, const std::string& keep, std::int64_t step,
                      const std::string& ratio, const std::string& nc_threshold,
                      const std::string& path) {
  FamilySpec spec;
  spec.kind = family_kind_from_name(kind);
  spec.name = name.empty() ? kind : name;
  spec.sigma_target = parse_rational(sigma);
  spec.L = L;
  spec.seed = seed;
  spec.arity_log = arity_log;
  if (!keep.empty()) {
    spec.keep.clear();
    for (const auto& t : detail::split(keep, ','))
      spec.keep.push_back(std::stoi(t));
  }
  spec.step = step;
  if (!ratio.empty()) spec.ratio = parse_rational(ratio);
  if (!nc_threshold.empty()) spec.nc_threshold = parse_rational(nc_threshold);
  spec.path = path;
  return spec;
}

GridSet load_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return GridSet::read(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"splab: exact-arithmetic sum/product expansion laboratory"};
  app.require_subcommand(1);

  // constants
  std::string c_sigma = "1/2", c_gamma;
  bool c_json = false;
  auto* constants = app.add_subcommand("constants", "exact exponent table");
  constants->add_option("--sigma", c_sigma, "dimension parameter in (0,1), e.g. 1/2");
  constants->add_option("--gamma", c_gamma, "override the denominator cutoff exponent");
  constants->add_flag("--json", c_json, "emit JSON");

  // generate
  std::string g_kind = "cantor", g_name, g_sigma = "1/2", g_keep, g_ratio,
              g_ncthr, g_path, g_out;
  int g_L = 12, g_arity = 2;
  std::uint64_t g_seed = 1;
  std::int64_t g_step = 4;
  auto* generate = app.add_subcommand("generate", "write a set family to a file");
  generate->add_option("--kind", g_kind, "cantor | random_nc | ap | gp | custom-file");
  generate->add_option("--name", g_name, "family label");
  generate->add_option("--sigma", g_sigma, "target dimension");
  generate->add_option("--L", g_L, "scale exponent (delta = 2^-L)");
  generate->add_option("--seed", g_seed, "random seed");
  generate->add_option("--arity-log", g_arity, "cantor: children per interval = 2^this");
  generate->add_option("--keep", g_keep, "cantor: comma-separated digits to keep");
  generate->add_option("--step", g_step, "ap: grid step");
  generate->add_option("--ratio", g_ratio, "gp: ratio > 1, e.g. 33/32");
  generate->add_option("--nc-threshold", g_ncthr, "random_nc: concentration bound");
  generate->add_option("--path", g_path, "custom-file: input path");
  generate->add_option("--out", g_out, "output path")->required();

  // analyze
  std::string a_in, a_sigma = "1/2", a_gamma, a_json_path;
  int a_branch = 2;
  auto* analyze = app.add_subcommand("analyze", "full pipeline on one set");
  analyze->add_option("--in", a_in, "GridSet text file")->required();
  analyze->add_option("--sigma", a_sigma, "dimension parameter");
  analyze->add_option("--gamma", a_gamma, "override the cutoff exponent");
  analyze->add_option("--branch-log", a_branch, "tree branching exponent j");
  analyze->add_option("--json", a_json_path, "write the detail record here");

  // classify
  std::string q_in, q_sigma = "1/2", q_gamma;
  auto* classify_cmd = app.add_subcommand("classify", "dense/gap dichotomy");
  classify_cmd->add_option("--in", q_in, "GridSet text file")->required();
  classify_cmd->add_option("--sigma", q_sigma, "dimension (sets gamma_star)");
  classify_cmd->add_option("--gamma", q_gamma, "cutoff exponent override");

  // verify-oracles
  int v_plu_range = 8, v_ruzsa_range = 6, v_trials = 100, v_L = 8, v_points = 20;
  std::uint64_t v_seed = 1;
  auto* verify = app.add_subcommand("verify-oracles", "exhaustive inequality suites");
  verify->add_option("--plunnecke-range", v_plu_range, "universe {0..range-1}");
  verify->add_option("--ruzsa-range", v_ruzsa_range, "universe {0..range-1}");
  verify->add_option("--triangle-trials", v_trials, "random triangle trials");
  verify->add_option("--triangle-scale", v_L, "scale for random trials");
  verify->add_option("--triangle-points", v_points, "points per random set");
  verify->add_option("--seed", v_seed, "random seed");

  // sweep
  std::string s_config;
  auto* sweep = app.add_subcommand("sweep", "run a sweep config");
  sweep->add_option("--config", s_config, "key = value config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*constants) return cmd_constants(c_sigma, c_gamma, c_json);

    if (*generate) {
      FamilySpec spec = build_spec(g_kind, g_name, g_sigma, g_L, g_seed, g_arity,
                                   g_keep, g_step, g_ratio, g_ncthr, g_path);
      GridSet set = generate_family(spec);
      std::ofstream out(g_out);
      if (!out) throw Error("cannot write '" + g_out + "'");
      set.write(out);
      std::cout << "wrote " << set.size() << " points at L=" << spec.L << " to "
                << g_out << "\n";
      return 0;
    }

    if (*analyze) {
      GridSet set = load_set(a_in);
      std::optional<Rat> gamma;
      if (!a_gamma.empty()) gamma = parse_rational(a_gamma);
      RowResult rr = analyze_set(a_in, set, parse_rational(a_sigma), gamma, a_branch);
      std::cout << expansion_csv_header() << "\n"
                << expansion_csv_row(rr.report) << "\n";
      if (!a_json_path.empty()) {
        std::ofstream out(a_json_path);
        if (!out) throw Error("cannot write '" + a_json_path + "'");
        out << rr.detail.dump(2) << "\n";
      }
      return has_theorem_violation(rr.findings) ? 2 : 0;
    }

    if (*classify_cmd) {
      GridSet set = load_set(q_in);
      Rat gamma = q_gamma.empty()
                      ? theoretical_constants(parse_rational(q_sigma)).gamma_star
                      : parse_rational(q_gamma);
      QuotientSet B = build_quotient_set(set, gamma);
      Classification cls = classify(B);
      Json j{{"quotient", quotient_summary(B)}, {"classification", to_json(cls)}};
      if (cls.verdict == Classification::Verdict::dense) {
        auto dd = dyadic_density_check(B, cls);
        j["dyadic_density_ok"] = dd.ok;
      }
      std::cout << j.dump(2) << "\n";
      return has_theorem_violation(cls.findings) ? 2 : 0;
    }

    if (*verify) {
      std::vector<OracleRunSummary> sums;
      sums.push_back(verify_plunnecke_exhaustive(v_plu_range));
      sums.push_back(verify_ruzsa_exhaustive(v_ruzsa_range));
      sums.push_back(verify_triangle_random(v_trials, v_seed, v_L, v_points));
      bool bad = false;
      Json findings = Json::array();
      for (const auto& s : sums) {
        std::cout << s.suite << ": " << s.instances << " instances, " << s.failures
                  << " failures\n";
        if (s.failures > 0) bad = true;
        for (const auto& f : s.findings) findings.push_back(to_json(f));
      }
      if (bad) std::cout << findings.dump(2) << "\n";
      return bad ? 2 : 0;
    }

    if (*sweep) {
      SweepConfig cfg = parse_sweep_config_file(s_config);
      SweepResult res = run_sweep(cfg);
      write_sweep_outputs(res, cfg);
      if (cfg.csv_path.empty()) std::cout << res.csv();
      for (const auto& rr : res.rows)
        if (!rr.report.error.empty())
          std::cerr << "row (" << rr.report.family << ", L=" << rr.report.L
                    << ") failed: " << rr.report.error << "\n";
      return res.exit_code;
    }
  } catch (const TheoremViolation& e) {
    std::cerr << "theorem violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
