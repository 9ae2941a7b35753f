#pragma once

// Scenario-driven front end. A scenario is a JSON file with "schema": 1, a
// name, one action (catalog | eval | map | verify | integrate | simulate)
// and the blocks that action needs. Running a scenario executes the checks,
// writes the requested CSV/SVG artifacts plus a JSON report, and maps to the
// process exit contract: 0 all checks pass, 1 a check failed or a numerical
// error occurred, 2 invalid input.
//
// Reports are schema-stable with keys {scenario, checks, diagnostics, pass,
// wall_ms}. The wall_ms value in the report file is written as 0: artifacts
// are byte-reproducible across runs, and measured timing goes to stdout.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "solistat/catalog.hpp"
#include "solistat/core.hpp"
#include "solistat/distbridge.hpp"
#include "solistat/errors.hpp"
#include "solistat/io.hpp"
#include "solistat/numkit.hpp"
#include "solistat/simulate.hpp"
#include "solistat/verify.hpp"

namespace solistat::cli {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// JSON <-> domain objects
// ---------------------------------------------------------------------------

namespace detail {

inline const json& require(const json& j, const std::string& key,
                           const std::string& where) {
  if (!j.contains(key)) {
    throw schema_error(where + ": missing field '" + key + "'");
  }
  return j.at(key);
}

inline double require_number(const json& j, const std::string& key,
                             const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number()) throw schema_error(where + ": '" + key + "' must be a number");
  return v.get<double>();
}

inline double number_or(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw schema_error("'" + key + "' must be a number");
  return j.at(key).get<double>();
}

inline std::string require_string(const json& j, const std::string& key,
                                  const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_string()) throw schema_error(where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace detail

inline core::EquationSpec parse_equation(const json& j) {
  const std::string type = detail::require_string(j, "type", "equation");
  if (type == "power_law") {
    return core::PowerLaw{detail::require_number(j, "a", "power_law"),
                          detail::require_number(j, "b", "power_law"),
                          detail::require_number(j, "n", "power_law")};
  }
  if (type == "general_f") {
    core::GeneralF g;
    g.a = detail::require_number(j, "a", "general_f");
    const json& terms = detail::require(j, "terms", "general_f");
    if (!terms.is_array() || terms.empty()) {
      throw schema_error("general_f: 'terms' must be a non-empty array");
    }
    for (const json& t : terms) {
      const double coef = detail::require_number(t, "coef", "general_f term");
      if (t.contains("power")) {
        g.terms.push_back(core::FTerm::power(coef, t.at("power").get<double>()));
      } else if (t.value("kind", "") == "phi_sin_phi") {
        g.terms.push_back(core::FTerm::phi_sin_phi(coef));
      } else {
        throw schema_error("general_f term: need 'power' or kind 'phi_sin_phi'");
      }
    }
    return g;
  }
  if (type == "dirac_reduced") {
    const double n = detail::require_number(j, "n_stat", "dirac_reduced");
    if (n != 1.0 && n != -1.0 && n != 0.0) {
      throw schema_error("dirac_reduced: n_stat must be 1, -1 or 0");
    }
    return core::DiracReduced{detail::require_number(j, "m", "dirac_reduced"),
                              detail::require_number(j, "b", "dirac_reduced"),
                              static_cast<int>(n)};
  }
  throw schema_error("equation: unknown type '" + type + "'");
}

inline json to_json(const core::EquationSpec& spec) {
  json j;
  if (const auto* p = std::get_if<core::PowerLaw>(&spec)) {
    j["type"] = "power_law";
    j["a"] = p->a;
    j["b"] = p->b;
    j["n"] = p->n;
  } else if (const auto* g = std::get_if<core::GeneralF>(&spec)) {
    j["type"] = "general_f";
    j["a"] = g->a;
    json terms = json::array();
    for (const core::FTerm& t : g->terms) {
      json tj;
      tj["coef"] = t.coef;
      if (t.is_power()) {
        tj["power"] = t.exponent();
      } else {
        tj["kind"] = "phi_sin_phi";
      }
      terms.push_back(tj);
    }
    j["terms"] = terms;
  } else {
    const auto& d = std::get<core::DiracReduced>(spec);
    j["type"] = "dirac_reduced";
    j["m"] = d.m;
    j["b"] = d.b;
    j["n_stat"] = d.n_stat;
  }
  return j;
}

inline catalog::ClosedFormSolution parse_solution(const json& j) {
  const std::string v = detail::require_string(j, "variant", "solution");
  using namespace catalog;
  auto num = [&j, &v](const char* key) { return detail::require_number(j, key, v); };
  if (v == "rational_bell") return RationalBell{num("b"), num("c1"), num("c2")};
  if (v == "gauss_bell") return GaussBell{num("b"), num("c1"), num("c2")};
  if (v == "power_bell") return PowerBell{num("nu"), num("b"), num("c1"), num("c2")};
  if (v == "exp_profile") return ExpProfile{num("c0"), num("c")};
  if (v == "logistic") return Logistic{num("f"), num("b"), num("c2")};
  if (v == "sech_pulse") return SechPulse{num("f"), num("b"), num("c")};
  if (v == "tanh_kink") return TanhKink{num("f"), num("b"), num("c")};
  if (v == "sg_kink") return SGKink{num("c2")};
  if (v == "be_profile_sq") return BEProfileSq{num("m"), num("alpha"), num("c")};
  if (v == "quantum_rho") {
    const double n = num("n_stat");
    if (n != 1.0 && n != -1.0 && n != 0.0) {
      throw schema_error("quantum_rho: n_stat must be 1, -1 or 0");
    }
    return QuantumRho{num("m"), num("b"), static_cast<int>(n), num("c")};
  }
  throw schema_error("solution: unknown variant '" + v + "'");
}

inline json to_json(const catalog::ClosedFormSolution& sol) {
  using namespace catalog;
  json j;
  j["variant"] = variant_name(sol);
  struct V {
    json& j;
    void operator()(const RationalBell& s) const { j["b"] = s.b; j["c1"] = s.C1; j["c2"] = s.C2; }
    void operator()(const GaussBell& s) const { j["b"] = s.b; j["c1"] = s.C1; j["c2"] = s.C2; }
    void operator()(const PowerBell& s) const {
      j["nu"] = s.nu; j["b"] = s.b; j["c1"] = s.C1; j["c2"] = s.C2;
    }
    void operator()(const ExpProfile& s) const { j["c0"] = s.C0; j["c"] = s.c; }
    void operator()(const Logistic& s) const { j["f"] = s.f; j["b"] = s.b; j["c2"] = s.C2; }
    void operator()(const SechPulse& s) const { j["f"] = s.f; j["b"] = s.b; j["c"] = s.C; }
    void operator()(const TanhKink& s) const { j["f"] = s.f; j["b"] = s.b; j["c"] = s.C; }
    void operator()(const SGKink& s) const { j["c2"] = s.C2; }
    void operator()(const BEProfileSq& s) const { j["m"] = s.m; j["alpha"] = s.alpha; j["c"] = s.C; }
    void operator()(const QuantumRho& s) const {
      j["m"] = s.m; j["b"] = s.b; j["n_stat"] = s.n_stat; j["c"] = s.C;
    }
  };
  std::visit(V{j}, sol);
  return j;
}

inline dist::DistributionSpec parse_distribution(const json& j) {
  const std::string name = detail::require_string(j, "dist", "distribution");
  using namespace dist;
  auto num = [&j, &name](const char* key) {
    return detail::require_number(j, key, name);
  };
  if (name == "cauchy") return Cauchy{num("mu"), num("lambda")};
  if (name == "normal") return Normal{num("mu"), num("sigma")};
  if (name == "student_t") return StudentT{num("nu")};
  if (name == "exponential") return Exponential{num("c")};
  if (name == "fermi_dirac") return FermiDirac{num("m"), num("b")};
  if (name == "bose_einstein") return BoseEinstein{num("m"), num("b")};
  if (name == "maxwell_boltzmann") return MaxwellBoltzmann{num("m"), num("amplitude")};
  throw schema_error("distribution: unknown dist '" + name + "'");
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  double max_abs = 0.0;
  double max_rel = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct RunReport {
  std::string scenario;
  std::vector<CheckResult> checks;
  json diagnostics = json::object();
  bool pass = true;
  double wall_ms = 0.0;  // measured; the file artifact records 0

  void add(CheckResult c) {
    pass = pass && c.pass;
    checks.push_back(std::move(c));
  }
};

inline json to_json(const RunReport& rep) {
  json j;
  j["scenario"] = rep.scenario;
  json checks = json::array();
  for (const CheckResult& c : rep.checks) {
    json cj;
    cj["name"] = c.name;
    cj["max_abs"] = c.max_abs;
    cj["max_rel"] = c.max_rel;
    cj["tolerance"] = c.tolerance;
    cj["pass"] = c.pass;
    if (!c.note.empty()) cj["note"] = c.note;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["diagnostics"] = rep.diagnostics;
  j["pass"] = rep.pass;
  j["wall_ms"] = 0.0;  // keep report files byte-reproducible
  return j;
}

struct ScenarioOptions {
  std::filesystem::path out_dir = ".";
  bool paper_constants = false;          // global flag overlay
  std::optional<double> tol_override;    // overrides residual tolerances
  bool svg = false;                      // emit SVG even when not requested
};

// ---------------------------------------------------------------------------
// Action executors
// ---------------------------------------------------------------------------

namespace detail {

inline CheckResult from_residual(const std::string& name,
                                 const verify::ResidualReport& rep) {
  CheckResult c;
  c.name = name;
  c.max_abs = rep.max_abs;
  c.max_rel = rep.max_rel;
  c.tolerance = rep.tolerance;
  c.pass = rep.pass;
  c.note = rep.grid_desc;
  return c;
}

inline std::vector<double> parse_grid(const json& scenario,
                                      const catalog::ClosedFormSolution& sol,
                                      double def_min = -10.0, double def_max = 10.0,
                                      int def_points = 400) {
  double lo = def_min, hi = def_max, clearance = 1e-3;
  int points = def_points;
  if (scenario.contains("grid")) {
    const json& g = scenario.at("grid");
    lo = number_or(g, "min", lo);
    hi = number_or(g, "max", hi);
    points = static_cast<int>(number_or(g, "points", points));
    clearance = number_or(g, "clearance", clearance);
  }
  if (!(lo < hi) || points < 2) throw schema_error("grid: requires min < max and points >= 2");
  return catalog::domain(sol).uniform_grid(lo, hi, points, clearance);
}

inline std::filesystem::path resolve_output(const ScenarioOptions& opt,
                                            const std::string& file) {
  std::filesystem::path p(file);
  if (p.is_absolute()) return p;
  return opt.out_dir / p;
}

inline void emit_profile_artifacts(const json& scenario, const ScenarioOptions& opt,
                                   const catalog::ClosedFormSolution& sol,
                                   const std::vector<double>& grid,
                                   const std::string& default_svg_name,
                                   RunReport& rep) {
  std::vector<double> phi(grid.size()), d1(grid.size()), d2(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const catalog::Eval e = catalog::eval(sol, grid[i]);
    phi[i] = e.value;
    d1[i] = e.d1;
    d2[i] = e.d2;
  }
  const json out = scenario.value("output", json::object());
  if (out.contains("csv")) {
    const auto path = resolve_output(opt, out.at("csv").get<std::string>());
    write_profile_csv(path, grid, phi, d1, d2);
    rep.diagnostics["csv"] = path.string();
  }
  std::optional<std::filesystem::path> svg_path;
  if (out.contains("svg")) {
    svg_path = resolve_output(opt, out.at("svg").get<std::string>());
  } else if (opt.svg) {
    svg_path = resolve_output(opt, default_svg_name);
  }
  if (svg_path) {
    PlotAxes axes;
    axes.title = catalog::variant_name(sol);
    write_svg(*svg_path, {{catalog::variant_name(sol), grid, phi}}, axes);
    rep.diagnostics["svg"] = svg_path->string();
  }
}

}  // namespace detail

inline void run_catalog_action(const json& scenario, const ScenarioOptions& opt,
                               RunReport& rep) {
  const core::EquationSpec spec =
      parse_equation(detail::require(scenario, "equation", "catalog"));
  const json constants = scenario.value("constants", json::object());
  const double c1 = detail::number_or(constants, "c1", 0.0);
  const double c2 = detail::number_or(constants, "c2", 0.0);
  CheckResult match;
  match.name = "catalog_match";
  try {
    const catalog::ClosedFormSolution sol = catalog::solve_catalog(spec, c1, c2);
    match.pass = true;
    match.note = catalog::variant_name(sol);
    rep.diagnostics["solution"] = to_json(sol);
    const catalog::ValidityDomain dom = catalog::domain(sol);
    json sing = json::array();
    for (double s : dom.singularities) sing.push_back(s);
    rep.diagnostics["singularities"] = sing;
    const catalog::Decay d = catalog::asymptotic_decay(sol);
    rep.diagnostics["decays_left"] = d.left;
    rep.diagnostics["decays_right"] = d.right;
    rep.add(match);
    const auto grid = detail::parse_grid(scenario, sol);
    detail::emit_profile_artifacts(scenario, opt, sol, grid,
                                   rep.scenario + ".svg", rep);
  } catch (const catalog_miss& e) {
    match.pass = false;
    match.note = std::string("catalog_miss: ") + e.what();
    rep.add(match);
  } catch (const constant_mismatch& e) {
    match.pass = false;
    match.note = std::string("constant_mismatch: ") + e.what();
    rep.add(match);
  }
}

inline void run_eval_action(const json& scenario, const ScenarioOptions& opt,
                            RunReport& rep) {
  const catalog::ClosedFormSolution sol =
      parse_solution(detail::require(scenario, "solution", "eval"));
  const auto grid = detail::parse_grid(scenario, sol);
  CheckResult finite;
  finite.name = "finite_on_grid";
  finite.pass = true;
  for (double eta : grid) {
    const catalog::Eval e = catalog::eval(sol, eta);
    if (!std::isfinite(e.value) || !std::isfinite(e.d1) || !std::isfinite(e.d2)) {
      finite.pass = false;
      finite.note = "non-finite at eta = " + format_double(eta);
      break;
    }
  }
  rep.add(finite);
  detail::emit_profile_artifacts(scenario, opt, sol, grid, rep.scenario + ".svg", rep);
}

inline void run_map_action(const json& scenario, const ScenarioOptions& opt,
                           RunReport& rep) {
  const dist::DistributionSpec d =
      parse_distribution(detail::require(scenario, "distribution", "map"));
  const bool paper = opt.paper_constants || scenario.value("paper_constants", false);
  const dist::SolitonMap m = dist::to_soliton(d, paper);
  const catalog::ClosedFormSolution sol = catalog::solve_catalog(m.spec, m.C1, m.C2);
  rep.diagnostics["equation"] = to_json(m.spec);
  rep.diagnostics["c1"] = m.C1;
  rep.diagnostics["c2"] = m.C2;
  rep.diagnostics["solution"] = to_json(sol);
  rep.diagnostics["paper_constants"] = paper;

  const json tols = scenario.value("tolerances", json::object());
  const double equiv_tol = detail::number_or(tols, "equivalence", 1e-12);

  // Occupation profiles with a pole start their window inside the domain.
  double def_lo = -20.0, def_hi = 20.0;
  if (std::holds_alternative<dist::BoseEinstein>(d)) def_lo = 1e-3;
  if (std::holds_alternative<dist::Exponential>(d)) def_lo = 0.0;
  const auto grid = detail::parse_grid(scenario, sol, def_lo, def_hi, 1001);

  const dist::EquivalenceReport eq = dist::equivalence_report(d, sol, grid, equiv_tol);
  CheckResult equiv;
  equiv.name = "equivalence";
  equiv.max_abs = eq.max_abs_diff;
  equiv.tolerance = eq.tolerance;
  equiv.pass = eq.pass;
  equiv.note = "argmax at eta = " + format_double(eq.argmax_eta);
  rep.add(equiv);

  const dist::NormalizationResult mass = dist::normalization(sol);
  if (mass.divergent) {
    rep.diagnostics["normalization"] = "divergent";
  } else {
    rep.diagnostics["normalization"] = mass.value;
    CheckResult norm;
    norm.name = "normalization";
    norm.tolerance = detail::number_or(tols, "normalization", 1e-6);
    norm.max_abs = std::abs(mass.value - 1.0);
    norm.pass = norm.max_abs < norm.tolerance;
    rep.add(norm);
  }

  // artifacts: mapped profile CSV plus a pdf/profile overlay
  const json out = scenario.value("output", json::object());
  if (out.contains("csv")) {
    std::vector<double> phi(grid.size()), d1(grid.size()), d2(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const catalog::Eval e = catalog::eval(sol, grid[i]);
      phi[i] = e.value;
      d1[i] = e.d1;
      d2[i] = e.d2;
    }
    const auto path = detail::resolve_output(opt, out.at("csv").get<std::string>());
    write_profile_csv(path, grid, phi, d1, d2);
    rep.diagnostics["csv"] = path.string();
  }
  std::optional<std::filesystem::path> svg_path;
  if (out.contains("svg")) {
    svg_path = detail::resolve_output(opt, out.at("svg").get<std::string>());
  } else if (opt.svg) {
    svg_path = detail::resolve_output(opt, rep.scenario + ".svg");
  }
  if (svg_path) {
    Curve pdf_curve{dist::name_of(d) + " pdf", grid, {}};
    Curve sol_curve{"mapped " + catalog::variant_name(sol), grid, {}};
    for (double x : grid) {
      pdf_curve.y.push_back(dist::pdf(d, x));
      sol_curve.y.push_back(catalog::value(sol, x));
    }
    PlotAxes axes;
    axes.title = dist::name_of(d) + " vs mapped profile";
    write_svg(*svg_path, {pdf_curve, sol_curve}, axes);
    rep.diagnostics["svg"] = svg_path->string();
  }
}

inline void run_verify_action(const json& scenario, const ScenarioOptions& opt,
                              RunReport& rep) {
  catalog::ClosedFormSolution sol = [&scenario]() {
    if (scenario.contains("solution")) return parse_solution(scenario.at("solution"));
    // derive from equation + constants through the matcher
    const core::EquationSpec spec =
        parse_equation(detail::require(scenario, "equation", "verify"));
    const json constants = scenario.value("constants", json::object());
    return catalog::solve_catalog(spec, detail::number_or(constants, "c1", 0.0),
                                  detail::number_or(constants, "c2", 0.0));
  }();
  const core::EquationSpec spec = scenario.contains("equation")
                                      ? parse_equation(scenario.at("equation"))
                                      : catalog::equation_of(sol);
  rep.diagnostics["solution"] = to_json(sol);
  rep.diagnostics["equation"] = to_json(spec);

  const json checks = scenario.value("checks", json::object());
  const double def_tol = opt.tol_override.value_or(1e-9);
  const auto grid = detail::parse_grid(scenario, sol);

  {
    const json cfg = checks.value("ode_residual", json::object());
    const double tol = opt.tol_override.value_or(detail::number_or(cfg, "tolerance", 1e-9));
    rep.add(detail::from_residual("ode_residual",
                                  verify::ode_residual(sol, spec, grid, tol)));
  }
  if (checks.contains("first_integral")) {
    const json cfg = checks.at("first_integral");
    const double tol = opt.tol_override.value_or(detail::number_or(cfg, "tolerance", 1e-9));
    std::vector<double> fi_grid = grid;
    if (cfg.contains("grid")) {
      json sub;
      sub["grid"] = cfg.at("grid");
      fi_grid = detail::parse_grid(sub, sol);
    }
    rep.add(detail::from_residual("first_integral",
                                  verify::first_order_residual(sol, fi_grid, tol)));
  }
  if (checks.contains("p_transform")) {
    const json cfg = checks.at("p_transform");
    const double tol = opt.tol_override.value_or(detail::number_or(cfg, "tolerance", 1e-9));
    const json ps = cfg.value("p", json::array({-1.0, 0.5, 2.0}));
    for (const json& pv : ps) {
      const double p = pv.get<double>();
      rep.add(detail::from_residual(
          "p_transform(p=" + format_double(p) + ")",
          verify::check_p_transform(spec, sol, p, grid, tol)));
    }
  }
  if (checks.contains("lorentz")) {
    const json cfg = checks.at("lorentz");
    const double tol = opt.tol_override.value_or(detail::number_or(cfg, "tolerance", 1e-12));
    const double u = detail::number_or(cfg, "u", 0.5);
    const double w = detail::number_or(cfg, "w", 0.5);
    verify::Grid2D g2;
    g2.x0 = -3.0;
    g2.x1 = 3.0;
    g2.nx = 13;
    g2.t0 = 0.0;
    g2.t1 = 2.0;
    g2.nt = 7;
    rep.add(detail::from_residual("lorentz_covariance",
                                  verify::lorentz_profile_check(sol, u, w, g2, tol)));
  }
  if (checks.contains("pde_convergence")) {
    const json cfg = checks.at("pde_convergence");
    const double u = detail::number_or(cfg, "u", 0.5);
    verify::Grid2D g2;
    g2.x0 = detail::number_or(cfg, "x0", -1.0);
    g2.x1 = detail::number_or(cfg, "x1", 1.0);
    g2.nx = 9;
    g2.t0 = 0.0;
    g2.t1 = detail::number_or(cfg, "t1", 0.5);
    g2.nt = 5;
    const core::WaveFrame frame{u};
    auto residual = [&](double h) {
      return verify::pde_residual(sol, frame, spec, g2, h).max_abs;
    };
    const verify::ConvergenceReport conv =
        verify::convergence_order(residual, {1e-2, 5e-3, 2.5e-3});
    CheckResult c;
    c.name = "pde_convergence_order";
    c.max_abs = conv.max_abs.empty() ? 0.0 : conv.max_abs.front();
    c.tolerance = 0.2;
    if (conv.at_precision_floor) {
      c.pass = true;
      c.note = "at precision floor";
    } else {
      c.max_rel = conv.slope;
      c.pass = conv.slope > 1.8 && conv.slope < 2.2;
      c.note = "slope = " + format_double(conv.slope);
    }
    rep.add(c);
  }
  (void)def_tol;
}

inline void run_integrate_action(const json& scenario, const ScenarioOptions& opt,
                                 RunReport& rep) {
  const core::EquationSpec spec =
      parse_equation(detail::require(scenario, "equation", "integrate"));
  const json frame_j = scenario.value("frame", json::object());
  const core::WaveFrame frame{detail::number_or(frame_j, "u", 0.0)};
  core::validate(frame);
  const double phi0 = detail::require_number(scenario, "phi0", "integrate");
  const double dphi0 = detail::require_number(scenario, "dphi0", "integrate");
  const json& span = detail::require(scenario, "span", "integrate");
  if (!span.is_array() || span.size() != 2) {
    throw schema_error("integrate: 'span' must be [eta0, eta1]");
  }
  const double eta0 = span.at(0).get<double>();
  const double eta1 = span.at(1).get<double>();
  const json tols = scenario.value("tolerances", json::object());
  numkit::Tolerance ode_tol{detail::number_or(tols, "ode_abs", 1e-12),
                            detail::number_or(tols, "ode_rel", 1e-12)};

  const auto ode = core::reduce_to_ode(spec, frame);
  const sim::ProfileTrajectory traj =
      sim::integrate_profile(ode, phi0, dphi0, eta0, eta1, ode_tol);
  rep.diagnostics["stop"] = numkit::to_string(traj.stop);
  rep.diagnostics["samples"] = traj.samples.grid.size();

  if (scenario.contains("solution")) {
    const catalog::ClosedFormSolution sol = parse_solution(scenario.at("solution"));
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.samples.grid.size(); ++i) {
      worst = std::max(worst, std::abs(traj.samples.values[i] -
                                       catalog::value(sol, traj.samples.grid[i])));
    }
    CheckResult match;
    match.name = "closed_form_match";
    match.max_abs = worst;
    match.tolerance = detail::number_or(tols, "match", 1e-6);
    match.pass = worst < match.tolerance;
    rep.add(match);
  }
  {
    const verify::DriftReport drift = verify::conserved_quantity_drift(spec, traj.samples);
    CheckResult c;
    c.name = "conserved_quantity_drift";
    c.max_abs = drift.drift;
    c.tolerance = detail::number_or(tols, "drift", 1e-8);
    c.pass = drift.drift < c.tolerance;
    c.note = "Q = " + format_double(drift.q_initial);
    rep.diagnostics["q_value"] = drift.q_initial;
    rep.add(c);
    if (scenario.contains("expect_q")) {
      CheckResult q;
      q.name = "q_value";
      q.max_abs = std::abs(drift.q_initial - scenario.at("expect_q").get<double>());
      q.tolerance = detail::number_or(tols, "q", 1e-6);
      q.pass = q.max_abs < q.tolerance;
      rep.add(q);
    }
  }
  const json out = scenario.value("output", json::object());
  if (out.contains("csv")) {
    // second derivative from the profile equation itself
    const core::GeneralF g = core::canonicalize(spec);
    std::vector<double> dd(traj.samples.grid.size());
    for (std::size_t i = 0; i < dd.size(); ++i) {
      const double phi = traj.samples.values[i];
      const double dphi = traj.samples.derivatives[i];
      dd[i] = (g.a * dphi * dphi + core::eval_F(g, phi)) / phi;
    }
    const auto path = detail::resolve_output(opt, out.at("csv").get<std::string>());
    write_profile_csv(path, traj.samples.grid, traj.samples.values,
                      traj.samples.derivatives, dd);
    rep.diagnostics["csv"] = path.string();
  }
}

inline void run_simulate_action(const json& scenario, const ScenarioOptions& opt,
                                RunReport& rep) {
  const core::EquationSpec spec =
      parse_equation(detail::require(scenario, "equation", "simulate"));
  const catalog::ClosedFormSolution sol =
      parse_solution(detail::require(scenario, "solution", "simulate"));
  const json frame_j = scenario.value("frame", json::object());
  const core::WaveFrame frame{detail::number_or(frame_j, "u", 0.0)};
  core::validate(frame);

  const json& sj = detail::require(scenario, "sim", "simulate");
  sim::SimConfig cfg;
  cfg.x_min = detail::require_number(sj, "x_min", "sim");
  cfg.x_max = detail::require_number(sj, "x_max", "sim");
  cfg.h = detail::number_or(sj, "h", 0.05);
  cfg.cfl = detail::number_or(sj, "cfl", 0.5);
  cfg.t_end = detail::require_number(sj, "t_end", "sim");
  cfg.floor = detail::number_or(sj, "floor", 1e-10);
  cfg.snapshot_stride = static_cast<int>(detail::number_or(sj, "snapshot_stride", 0.0));
  const json bj = sj.value("boundary", json::object());
  const std::string bkind = bj.value("kind", "dirichlet");
  if (bkind == "periodic") {
    cfg.boundary = sim::Boundary::periodic();
  } else if (bkind == "dirichlet") {
    // boundary values default to the closed form sampled at the window ends
    double left, right;
    if (bj.contains("left")) {
      left = bj.at("left").get<double>();
    } else {
      left = std::max(catalog::value(sol, frame.eta(cfg.x_min, 0.0)), cfg.floor);
    }
    if (bj.contains("right")) {
      right = bj.at("right").get<double>();
    } else {
      right = std::max(catalog::value(sol, frame.eta(cfg.x_max, 0.0)), cfg.floor);
    }
    cfg.boundary = sim::Boundary::dirichlet(left, right);
  } else {
    throw schema_error("sim.boundary.kind must be 'dirichlet' or 'periodic'");
  }
  sim::validate(cfg);

  const sim::GridState s0 = sim::init_from_solution(sol, frame, cfg);
  const sim::RunResult run_result = sim::run(spec, s0, cfg);
  rep.diagnostics["steps"] = run_result.steps;
  rep.diagnostics["snapshots"] = run_result.snapshots.size();

  const json tols = scenario.value("tolerances", json::object());
  if (tols.contains("speed")) {
    const std::string feat = scenario.value("feature", "auto");
    const sim::Feature feature = feat == "bell"   ? sim::Feature::kBellPeak
                                 : feat == "kink" ? sim::Feature::kKinkLevel
                                                  : sim::feature_for(sol);
    const double u_est =
        sim::measure_speed(run_result.snapshots, cfg.x_min, cfg.h, feature);
    CheckResult c;
    c.name = "speed";
    c.max_abs = std::abs(u_est - frame.u);
    c.tolerance = tols.at("speed").get<double>();
    c.pass = c.max_abs < c.tolerance;
    c.note = "u_est = " + format_double(u_est);
    rep.diagnostics["u_est"] = u_est;
    rep.add(c);
  }
  if (tols.contains("shape")) {
    double worst = 0.0;
    const sim::GridState& fs = run_result.final_state;
    for (std::size_t i = 0; i < fs.n(); ++i) {
      const double eta = frame.eta(fs.x(i), fs.t);
      const double expected = std::max(catalog::value(sol, eta),
                                       core::quasilinear_exponent(spec) != 0.0 ? cfg.floor : -1e308);
      worst = std::max(worst, std::abs(fs.phi[i] - expected));
    }
    CheckResult c;
    c.name = "shape";
    c.max_abs = worst;
    c.tolerance = tols.at("shape").get<double>();
    c.pass = worst < c.tolerance;
    rep.diagnostics["shape_error"] = worst;
    rep.add(c);
  }
  if (tols.contains("energy_drift")) {
    const double e0 =
        sim::energy(run_result.snapshots.front(), cfg.x_min, cfg.h, spec);
    double drift = 0.0;
    for (const sim::Snapshot& s : run_result.snapshots) {
      drift = std::max(drift,
                       std::abs(sim::energy(s, cfg.x_min, cfg.h, spec) - e0));
    }
    CheckResult c;
    c.name = "energy_drift";
    c.max_abs = std::abs(e0) > 0.0 ? drift / std::abs(e0) : drift;
    c.tolerance = tols.at("energy_drift").get<double>();
    c.pass = c.max_abs < c.tolerance;
    c.note = "E0 = " + format_double(e0);
    rep.diagnostics["energy"] = e0;
    rep.add(c);
  }

  const json out = scenario.value("output", json::object());
  if (out.contains("csv")) {
    const auto path = detail::resolve_output(opt, out.at("csv").get<std::string>());
    write_snapshots_csv(path, run_result.snapshots, cfg.x_min, cfg.h);
    rep.diagnostics["csv"] = path.string();
  }
  std::optional<std::filesystem::path> svg_path;
  if (out.contains("svg")) {
    svg_path = detail::resolve_output(opt, out.at("svg").get<std::string>());
  } else if (opt.svg) {
    svg_path = detail::resolve_output(opt, rep.scenario + ".svg");
  }
  if (svg_path) {
    std::vector<Curve> curves;
    const std::size_t stride = std::max<std::size_t>(1, run_result.snapshots.size() / 3);
    for (std::size_t k = 0; k < run_result.snapshots.size(); k += stride) {
      const sim::Snapshot& s = run_result.snapshots[k];
      Curve c;
      c.name = "t = " + format_double(s.t);
      for (std::size_t i = 0; i < s.phi.size(); ++i) {
        c.x.push_back(cfg.x_min + cfg.h * i);
        c.y.push_back(s.phi[i]);
      }
      curves.push_back(std::move(c));
    }
    PlotAxes axes;
    axes.title = rep.scenario;
    axes.x_label = "x";
    axes.y_label = "phi";
    write_svg(*svg_path, curves, axes);
    rep.diagnostics["svg"] = svg_path->string();
  }
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

// Loads and executes one scenario file. schema_error (or json parse errors
// wrapped into it) signals invalid input; numerical failures surface as
// failed checks with the error message embedded.
inline RunReport run_scenario(const std::filesystem::path& path,
                              const ScenarioOptions& opt = {}) {
  const auto t_start = std::chrono::steady_clock::now();
  std::ifstream in(path);
  if (!in.is_open()) throw schema_error("cannot open scenario: " + path.string());
  json scenario;
  try {
    scenario = json::parse(in);
  } catch (const json::exception& e) {
    throw schema_error("invalid JSON in " + path.string() + ": " + e.what());
  }
  if (!scenario.is_object()) throw schema_error("scenario must be a JSON object");
  if (scenario.value("schema", 0) != 1) {
    throw schema_error(path.string() + ": requires \"schema\": 1");
  }
  RunReport rep;
  rep.scenario = detail::require_string(scenario, "name", "scenario");
  const std::string action = detail::require_string(scenario, "action", "scenario");
  try {
    if (action == "catalog") {
      run_catalog_action(scenario, opt, rep);
    } else if (action == "eval") {
      run_eval_action(scenario, opt, rep);
    } else if (action == "map") {
      run_map_action(scenario, opt, rep);
    } else if (action == "verify") {
      run_verify_action(scenario, opt, rep);
    } else if (action == "integrate") {
      run_integrate_action(scenario, opt, rep);
    } else if (action == "simulate") {
      run_simulate_action(scenario, opt, rep);
    } else {
      throw schema_error("unknown action '" + action + "'");
    }
  } catch (const schema_error&) {
    throw;  // invalid input: bubbles to exit 2
  } catch (const frame_error& e) {
    // invalid physical configuration in the scenario file
    throw schema_error(std::string("invalid configuration: ") + e.what());
  } catch (const error& e) {
    // numerical failure: embed and fail the scenario (exit 1)
    CheckResult c;
    c.name = "execution";
    c.pass = false;
    c.note = e.what();
    rep.add(c);
  }
  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t_start)
                    .count();

  // report artifact (wall_ms recorded as 0 for reproducibility)
  const std::filesystem::path report_path =
      opt.out_dir / (rep.scenario + ".report.json");
  std::ofstream out = detail::open_for_write(report_path);
  out << to_json(rep).dump(2) << '\n';
  return rep;
}

inline int exit_code(const RunReport& rep) { return rep.pass ? 0 : 1; }

// Runs every *.json under dir in name order; reports are independent files.
inline std::vector<RunReport> run_batch(const std::filesystem::path& dir,
                                        const ScenarioOptions& opt = {}) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<RunReport> reports;
  reports.reserve(files.size());
  for (const auto& f : files) reports.push_back(run_scenario(f, opt));
  return reports;
}

}  // namespace solistat::cli
