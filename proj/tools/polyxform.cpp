#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "polyxform/admissibility.hpp"
#include "polyxform/family.hpp"
#include "polyxform/parallel.hpp"
#include "polyxform/sampled_function.hpp"
#include "polyxform/suites.hpp"
#include "polyxform/transform.hpp"
#include "polyxform/verification.hpp"
#include "polyxform/version.hpp"

namespace {

using nlohmann::ordered_json;
using namespace polyxform;

struct FamilySource {
  std::vector<int> full;  // --full n nprime d
  std::string file;
  std::string inline_json;
};

void attach_family_options(CLI::App* cmd, FamilySource& src) {
  cmd->add_option("--full", src.full, "full degree-d family: n nprime d")->expected(3);
  cmd->add_option("--family", src.file, "family JSON file");
  cmd->add_option("--family-json", src.inline_json, "family as inline JSON");
}

IndexFamily load_family(const FamilySource& src) {
  const int given = (src.full.size() == 3 ? 1 : 0) + (src.file.empty() ? 0 : 1) +
                    (src.inline_json.empty() ? 0 : 1);
  if (given != 1)
    throw std::invalid_argument("provide exactly one of --full, --family, --family-json");
  if (src.full.size() == 3) return full_family(src.full[0], src.full[1], src.full[2]);
  if (!src.inline_json.empty()) return IndexFamily::from_json(src.inline_json);
  std::ifstream in(src.file);
  if (!in) throw std::invalid_argument("cannot open family file: " + src.file);
  std::stringstream ss;
  ss << in.rdbuf();
  return IndexFamily::from_json(ss.str());
}

ordered_json family_config(const FamilySource& src) {
  ordered_json j;
  if (src.full.size() == 3) j["full"] = src.full;
  if (!src.file.empty()) j["family"] = src.file;
  if (!src.inline_json.empty()) j["family_json"] = src.inline_json;
  return j;
}

std::int64_t parse_samples(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size() || !(v >= 1.0) || !(v <= 1e9) || v != std::floor(v))
    throw std::invalid_argument("--samples must be a whole number between 1 and 1e9");
  return static_cast<std::int64_t>(v);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write: " + path);
  out << content;
}

// Every report carries the same envelope so reruns diff cleanly.
ordered_json report_envelope(const std::string& command, ordered_json config,
                             std::uint64_t seed) {
  ordered_json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = std::move(config);
  j["seed"] = seed;
  return j;
}

void print_suite(const SuiteResult& s) {
  for (const auto& l : s.lines)
    std::cout << (l.pass ? "PASS " : "FAIL ") << s.suite << ": " << l.name << " [" << l.detail
              << "]\n";
}

int run(int argc, char** argv) {
  CLI::App app{"polynomial-graph averaging toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "cap worker threads (results do not depend on this)");

  // admissible ------------------------------------------------------------
  auto* cmd_adm = app.add_subcommand("admissible", "analyze a family's structural conditions");
  FamilySource adm_src;
  attach_family_options(cmd_adm, adm_src);
  std::string adm_report;
  cmd_adm->add_option("--report", adm_report, "write the JSON report here");

  // exponents ---------------------------------------------------------------
  auto* cmd_exp = app.add_subcommand("exponents", "sharp (p, q) for a family");
  FamilySource exp_src;
  attach_family_options(cmd_exp, exp_src);
  bool exp_degenerate = false;
  cmd_exp->add_flag("--allow-degenerate", exp_degenerate,
                    "skip the nondegeneracy check (exponent formula only)");
  std::string exp_report;
  cmd_exp->add_option("--report", exp_report, "write the JSON report here");

  // polygon -----------------------------------------------------------------
  auto* cmd_poly = app.add_subcommand("polygon", "exact (1/p, 1/q) region of the full family");
  std::vector<int> poly_full;
  cmd_poly->add_option("--full", poly_full, "full degree-d family: n nprime d")
      ->expected(3)
      ->required();
  std::string poly_csv, poly_svg, poly_report;
  cmd_poly->add_option("--csv", poly_csv, "write the vertex table here");
  cmd_poly->add_option("--svg", poly_svg, "write the region plot here");
  cmd_poly->add_option("--report", poly_report, "write the JSON report here");

  // verify --------------------------------------------------------------
  auto* cmd_verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite_name;
  cmd_verify
      ->add_option("suite", suite_name,
                   "one of: measures, symmetrization, coercivity, cov-identity, symmetries, "
                   "sweeps, all")
      ->required()
      ->check(CLI::IsMember({"measures", "symmetrization", "coercivity", "cov-identity",
                             "symmetries", "sweeps", "all"}));
  std::uint64_t verify_seed = 1;
  cmd_verify->add_option("--seed", verify_seed, "random seed recorded in the report");
  int v_n = 1, v_nprime = 1, v_d = 1;
  cmd_verify->add_option("--n", v_n, "cov-identity family: t dimension");
  cmd_verify->add_option("--nprime", v_nprime, "cov-identity family: curve components");
  cmd_verify->add_option("--d", v_d, "cov-identity family: degree");
  std::string v_samples = "1000000";
  cmd_verify->add_option("--samples", v_samples, "cov-identity Monte Carlo samples (e.g. 1e6)");
  std::string verify_report;
  cmd_verify->add_option("--report", verify_report, "write the JSON report here");

  // transform apply -------------------------------------------------------
  auto* cmd_tr = app.add_subcommand("transform", "averaging transform operations");
  auto* cmd_apply = cmd_tr->add_subcommand("apply", "evaluate (T f)(u)");
  FamilySource tr_src;
  attach_family_options(cmd_apply, tr_src);
  std::string tr_function = "gauss";
  cmd_apply->add_option("--function", tr_function,
                        "preset name (gauss, box, bump) or SampledFunction binary file");
  int tr_res = 24;
  cmd_apply->add_option("--res", tr_res, "samples per axis for presets");
  std::vector<double> tr_u;
  cmd_apply->add_option("--u", tr_u, "coefficient vector, layer-major dictionary order");
  int tr_gl = 4, tr_cells = 0;
  cmd_apply->add_option("--gl", tr_gl, "Gauss-Legendre points per cell");
  cmd_apply->add_option("--t-cells", tr_cells, "integration cells per t axis (0 = grid)");
  std::string tr_report;
  cmd_apply->add_option("--report", tr_report, "write the JSON report here");

  // sweep --------------------------------------------------------------
  auto* cmd_sweep = app.add_subcommand("sweep", "extremal-family scaling sweep");
  std::string sweep_kind = "graded";
  cmd_sweep->add_option("--kind", sweep_kind, "graded or primed")
      ->check(CLI::IsMember({"graded", "primed"}));
  int s_n = 1, s_nprime = 1, s_d = 1, s_l = 1;
  cmd_sweep->add_option("--n", s_n, "t dimension");
  cmd_sweep->add_option("--nprime", s_nprime, "curve components");
  cmd_sweep->add_option("--d", s_d, "degree");
  cmd_sweep->add_option("--l", s_l, "graded level (1..d)");
  double s_c = 0.0;
  cmd_sweep->add_option("--c", s_c, "tube constant (<= 0 picks the default)");
  std::vector<double> s_deltas;
  cmd_sweep->add_option("--deltas", s_deltas, "delta grid, strictly decreasing in (0,1)");
  std::uint64_t sweep_seed = 1;
  cmd_sweep->add_option("--seed", sweep_seed, "seed for the quadrature cross-check");
  std::string sweep_csv, sweep_svg, sweep_report;
  cmd_sweep->add_option("--csv", sweep_csv, "write the sweep table here");
  cmd_sweep->add_option("--svg", sweep_svg, "write the log-log plot here");
  cmd_sweep->add_option("--report", sweep_report, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (threads > 0) {
    par::set_threads(threads);
  } else if (const char* env = std::getenv("POLYXFORM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) par::set_threads(n);
  }

  if (*cmd_adm) {
    const IndexFamily fam = load_family(adm_src);
    const AdmissibilityReport rep = analyze(fam);
    std::cout << rep.summary() << "\n";
    if (!adm_report.empty()) {
      ordered_json j = report_envelope("admissible", family_config(adm_src), 0);
      j["report"] = ordered_json::parse(rep.to_json());
      write_file(adm_report, j.dump(2) + "\n");
    }
    return rep.admissible() ? 0 : 1;
  }

  if (*cmd_exp) {
    const IndexFamily fam = load_family(exp_src);
    const ExponentPair pq = exponents(fam, exp_degenerate);
    std::cout << "p = " << pq.p.str() << ", q = " << pq.q.str() << "\n";
    if (!exp_report.empty()) {
      ordered_json cfg = family_config(exp_src);
      cfg["allow_degenerate"] = exp_degenerate;
      ordered_json j = report_envelope("exponents", std::move(cfg), 0);
      j["p"] = pq.p.str();
      j["q"] = pq.q.str();
      write_file(exp_report, j.dump(2) + "\n");
    }
    return 0;
  }

  if (*cmd_poly) {
    const RieszPolygon poly = riesz_polygon(poly_full[0], poly_full[1], poly_full[2]);
    std::cout << "vertices (1/p, 1/q):\n";
    for (const auto& v : poly.vertices)
      std::cout << "  (" << v[0].str() << ", " << v[1].str() << ")\n";
    if (!poly_csv.empty()) write_file(poly_csv, poly.to_csv());
    if (!poly_svg.empty()) write_file(poly_svg, poly.to_svg());
    if (!poly_report.empty()) {
      ordered_json cfg;
      cfg["full"] = poly_full;
      ordered_json j = report_envelope("polygon", std::move(cfg), 0);
      auto verts = ordered_json::array();
      for (const auto& v : poly.vertices) verts.push_back({v[0].str(), v[1].str()});
      j["vertices"] = verts;
      write_file(poly_report, j.dump(2) + "\n");
    }
    return 0;
  }

  if (*cmd_verify) {
    std::vector<SuiteResult> results;
    const CovIdentityConfig cov{v_n, v_nprime, v_d, parse_samples(v_samples), verify_seed};
    if (suite_name == "measures" || suite_name == "all")
      results.push_back(suite_measures(verify_seed));
    if (suite_name == "symmetrization" || suite_name == "all")
      results.push_back(suite_symmetrization(verify_seed));
    if (suite_name == "cov-identity" || suite_name == "all")
      results.push_back(suite_cov_identity(cov));
    if (suite_name == "symmetries" || suite_name == "all")
      results.push_back(suite_symmetries(verify_seed));
    if (suite_name == "sweeps" || suite_name == "all") results.push_back(suite_sweeps(verify_seed));
    if (suite_name == "coercivity" || suite_name == "all")
      results.push_back(suite_coercivity(verify_seed));
    if (suite_name == "all") {
      results.push_back(suite_polygon());
      results.push_back(suite_exponents());
    }

    bool all_pass = true;
    for (const auto& s : results) {
      print_suite(s);
      all_pass = all_pass && s.pass();
    }
    std::cout << (all_pass ? "PASS" : "FAIL") << " verify " << suite_name << "\n";
    if (!verify_report.empty()) {
      ordered_json cfg;
      cfg["suite"] = suite_name;
      cfg["n"] = v_n;
      cfg["nprime"] = v_nprime;
      cfg["d"] = v_d;
      cfg["samples"] = v_samples;
      ordered_json j = report_envelope("verify", std::move(cfg), verify_seed);
      j["pass"] = all_pass;
      auto arr = ordered_json::array();
      for (const auto& s : results) arr.push_back(ordered_json::parse(s.to_json()));
      j["suites"] = arr;
      write_file(verify_report, j.dump(2) + "\n");
    }
    return all_pass ? 0 : 1;
  }

  if (*cmd_tr) {
    if (!*cmd_apply) throw std::invalid_argument("transform requires the apply subcommand");
    const IndexFamily fam = load_family(tr_src);
    const CoefficientLayout layout(fam);
    if (static_cast<int>(tr_u.size()) != layout.size()) {
      std::ostringstream os;
      os << "--u needs " << layout.size() << " entries for this family, got " << tr_u.size();
      throw std::invalid_argument(os.str());
    }
    SampledFunction f;
    if (tr_function == "gauss" || tr_function == "box" || tr_function == "bump") {
      f = preset_function(tr_function, fam.n + fam.nprime, tr_res);
    } else {
      std::ifstream in(tr_function, std::ios::binary);
      if (!in) throw std::invalid_argument("cannot open function file: " + tr_function);
      f = SampledFunction::read_binary(in);
    }
    TransformOptions opts;
    opts.gl_order = tr_gl;
    opts.t_cells = tr_cells;
    const double value = apply_T(fam, f, tr_u, opts);
    std::cout.precision(17);
    std::cout << "T[f](u) = " << value << "\n";
    if (!tr_report.empty()) {
      ordered_json cfg = family_config(tr_src);
      cfg["function"] = tr_function;
      cfg["res"] = tr_res;
      cfg["u"] = tr_u;
      cfg["gl"] = tr_gl;
      cfg["t_cells"] = tr_cells;
      ordered_json j = report_envelope("transform apply", std::move(cfg), 0);
      j["value"] = value;
      write_file(tr_report, j.dump(2) + "\n");
    }
    return 0;
  }

  if (*cmd_sweep) {
    ExtremalFamily fam;
    fam.kind =
        sweep_kind == "primed" ? ExtremalFamily::Kind::primed : ExtremalFamily::Kind::graded;
    fam.n = s_n;
    fam.nprime = s_nprime;
    fam.d = s_d;
    fam.l = s_l;
    fam.C = s_c;
    fam.seed = sweep_seed;
    if (s_deltas.empty())
      for (int i = 0; i < 8; ++i) s_deltas.push_back(std::ldexp(0.5, -i));
    fam.deltas = s_deltas;
    const SweepReport rep = extremal_sweep(fam, full_exponents(s_n, s_nprime, s_d));

    std::cout.precision(12);
    std::cout << "pairing slope " << rep.pairing_slope << " (exact " << rep.pairing_slope_exact.str()
              << ")\nF slope " << rep.f_slope << " (exact " << rep.f_slope_exact.str()
              << ")\nG slope " << rep.g_slope << " (exact " << rep.g_slope_exact.str()
              << ")\nratio slope " << rep.ratio_slope << " (exact " << rep.ratio_slope_exact.str()
              << ")\n";
    bool pass = rep.max_mc_rel_err <= 1e-12;
    const auto near = [](double fit, const Rational& exact) {
      return std::abs(fit - exact.to_double()) <= 0.01 * std::max(1.0, std::abs(exact.to_double()));
    };
    pass = pass && near(rep.pairing_slope, rep.pairing_slope_exact) &&
           near(rep.f_slope, rep.f_slope_exact) && near(rep.g_slope, rep.g_slope_exact) &&
           near(rep.ratio_slope, rep.ratio_slope_exact);
    for (const auto& cc : rep.constraints) {
      std::cout << (cc.l == 0 ? "primed constraint" : "level " + std::to_string(cc.l)) << ": "
                << cc.lhs.str() << (cc.equality ? " = " : (cc.holds ? " >= " : " < "))
                << cc.rhs.str() << "\n";
      pass = pass && cc.holds;
    }
    if (!sweep_csv.empty()) write_file(sweep_csv, rep.to_csv());
    if (!sweep_svg.empty()) write_file(sweep_svg, rep.to_svg());
    if (!sweep_report.empty()) {
      ordered_json cfg;
      cfg["kind"] = sweep_kind;
      cfg["n"] = s_n;
      cfg["nprime"] = s_nprime;
      cfg["d"] = s_d;
      cfg["l"] = s_l;
      cfg["c"] = s_c;
      cfg["deltas"] = s_deltas;
      ordered_json j = report_envelope("sweep", std::move(cfg), sweep_seed);
      j["report"] = ordered_json::parse(rep.to_json());
      write_file(sweep_report, j.dump(2) + "\n");
    }
    return pass ? 0 : 1;
  }

  throw std::invalid_argument("no command given");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
