#pragma once

// Residual engines: the artifact's definition of "this profile solves this
// equation". Second-order profile residuals with analytic derivatives,
// first-integral residuals, full PDE residuals by finite differences,
// conserved-quantity drift along integrated trajectories, the power
// transform check and the boost-composition (Lorentz covariance) check.

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "solistat/catalog.hpp"
#include "solistat/core.hpp"
#include "solistat/errors.hpp"
#include "solistat/numkit.hpp"

namespace solistat::verify {

// Relative residuals are scaled by the sum of the magnitudes of the terms
// entering the equation, so profiles decaying to zero do not inflate the
// relative error; the floor prevents 0/0 at exact zeros.
inline constexpr double kScaleFloor = 1e-300;

struct ResidualReport {
  double max_abs = 0.0;
  double max_rel = 0.0;
  double argmax_eta = 0.0;   // second coordinate of the argmax for 2-d grids
  double argmax_t = 0.0;
  std::string grid_desc;
  double tolerance = 0.0;
  bool pass = false;
};

namespace detail {

struct ResidualAccumulator {
  ResidualReport rep;

  void add(double abs_res, double scale, double eta, double t = 0.0) {
    const double rel = abs_res / (scale + kScaleFloor);
    if (abs_res > rep.max_abs) rep.max_abs = abs_res;
    if (rel > rep.max_rel) {
      rep.max_rel = rel;
      rep.argmax_eta = eta;
      rep.argmax_t = t;
    }
  }

  ResidualReport finish(double tolerance, std::string grid_desc) {
    rep.tolerance = tolerance;
    rep.pass = rep.max_rel < tolerance;
    rep.grid_desc = std::move(grid_desc);
    return rep;
  }
};

inline std::string describe_grid(std::size_t n, double lo, double hi) {
  std::ostringstream out;
  out << n << " points on [" << lo << ", " << hi << "]";
  return out.str();
}

}  // namespace detail

// Default verification grid for an entry: 400 points on the validity domain
// clipped to [-10, 10] with 1e-3 singularity clearance.
inline std::vector<double> default_grid(const catalog::ClosedFormSolution& sol,
                                        double lo = -10.0, double hi = 10.0,
                                        int n = 400, double clearance = 1e-3) {
  return catalog::domain(sol).uniform_grid(lo, hi, n, clearance);
}

// ---------------------------------------------------------------------------
// Profile-equation residual
// ---------------------------------------------------------------------------

// Residual of the profile equation phi phi'' - a (phi')^2 - F(phi) using the
// entry's analytic derivatives. For density-valued entries and DiracReduced
// specs the residual is rho' - (2 n b rho^2 - 2 m rho) instead.
inline ResidualReport ode_residual(const catalog::ClosedFormSolution& sol,
                                   const core::EquationSpec& spec,
                                   const std::vector<double>& grid,
                                   double tolerance = 1e-9) {
  if (grid.empty()) throw domain_error("ode_residual: empty grid");
  detail::ResidualAccumulator acc;

  auto mismatch = [tolerance]() {
    // A density profile checked against a field equation (or vice versa) is
    // a structural mismatch: report it as a saturated failure rather than
    // pretending the algebra lines up.
    ResidualReport rep;
    rep.max_abs = std::numeric_limits<double>::infinity();
    rep.max_rel = std::numeric_limits<double>::infinity();
    rep.tolerance = tolerance;
    rep.pass = false;
    rep.grid_desc = "density/field form mismatch";
    return rep;
  };

  const auto* dirac = std::get_if<core::DiracReduced>(&spec);

  if (const auto* be = std::get_if<catalog::BEProfileSq>(&sol)) {
    // The entry stores the density v = |phi|^2; its equation of record is
    // the quintic field equation, whose one-quadrature relation at zero
    // constant reads (v')^2 = 4 (c2 v^2 + c4/2 v^3 + c6/3 v^4). Check that,
    // sign-agnostic, against the spec's coefficients.
    (void)be;
    const auto* g = std::get_if<core::GeneralF>(&spec);
    if (g == nullptr || g->a != 0.0) return mismatch();
    double c2 = 0.0, c4 = 0.0, c6 = 0.0;
    for (const core::FTerm& t : g->terms) {
      if (!t.is_power()) return mismatch();
      if (t.exponent() == 2.0) c2 = t.coef;
      else if (t.exponent() == 4.0) c4 = t.coef;
      else if (t.exponent() == 6.0) c6 = t.coef;
      else return mismatch();
    }
    for (double eta : grid) {
      const catalog::Eval e = catalog::eval(sol, eta);
      const double v = e.value;
      const double t2 = 4.0 * c2 * v * v;
      const double t3 = 2.0 * c4 * v * v * v;
      const double t4 = 4.0 / 3.0 * c6 * v * v * v * v;
      const double lhs = e.d1 * e.d1;
      const double r = lhs - (t2 + t3 + t4);
      acc.add(std::abs(r), std::abs(lhs) + std::abs(t2) + std::abs(t3) + std::abs(t4),
              eta);
    }
    return acc.finish(tolerance,
                      detail::describe_grid(grid.size(), grid.front(), grid.back()));
  }

  const bool density = catalog::is_density(sol);
  if (density != (dirac != nullptr)) return mismatch();

  if (dirac != nullptr) {
    core::validate(*dirac);
    const double m = dirac->m;
    const double b = dirac->b;
    const double n = static_cast<double>(dirac->n_stat);
    for (double eta : grid) {
      const catalog::Eval e = catalog::eval(sol, eta);
      const double quad = 2.0 * n * b * e.value * e.value;
      const double lin = 2.0 * m * e.value;
      const double r = e.d1 - (quad - lin);
      acc.add(std::abs(r), std::abs(e.d1) + std::abs(quad) + std::abs(lin), eta);
    }
  } else {
    const core::GeneralF g = core::canonicalize(spec);
    for (double eta : grid) {
      const catalog::Eval e = catalog::eval(sol, eta);
      const double lhs_a = e.value * e.d2;
      const double lhs_b = g.a * e.d1 * e.d1;
      const double rhs = core::eval_F(g, e.value);
      const double r = lhs_a - lhs_b - rhs;
      acc.add(std::abs(r), std::abs(lhs_a) + std::abs(lhs_b) + std::abs(rhs), eta);
    }
  }
  return acc.finish(tolerance,
                    detail::describe_grid(grid.size(), grid.front(), grid.back()));
}

// ---------------------------------------------------------------------------
// First-integral residual
// ---------------------------------------------------------------------------

// Residual of (phi')^2 = phi^{2a} [G(phi) + C], sign-agnostic in the slope.
// Throws branch_error where G + C dips below -branch_tol (imaginary branch).
inline ResidualReport first_order_residual(const catalog::ClosedFormSolution& sol,
                                           const core::FirstIntegral& fi,
                                           const std::vector<double>& grid,
                                           double tolerance = 1e-9,
                                           double branch_tol = 1e-9) {
  if (grid.empty()) throw domain_error("first_order_residual: empty grid");
  detail::ResidualAccumulator acc;
  for (double eta : grid) {
    const catalog::Eval e = catalog::eval(sol, eta);
    if (!(e.value > 0.0)) {
      throw domain_error("first_order_residual: requires a positive profile value");
    }
    const double gc = fi.G(e.value) + fi.C;
    if (gc < -branch_tol) {
      std::ostringstream msg;
      msg << "first_order_residual: G(phi)+C = " << gc << " < 0 at eta = " << eta;
      throw branch_error(msg.str(), eta);
    }
    const double lhs = e.d1 * e.d1;
    const double weight = std::pow(e.value, 2.0 * fi.a);
    const double rhs = weight * gc;
    // Scale by the pre-cancellation term magnitudes: where G + C nearly
    // cancels (flat tails of kinks and occupation curves) the relation is
    // still exactly satisfied, and the roundoff left over must be measured
    // against the sizes that entered, not the cancelled remainder.
    acc.add(std::abs(lhs - rhs), std::abs(lhs) + weight * fi.magnitude(e.value), eta);
  }
  return acc.finish(tolerance,
                    detail::describe_grid(grid.size(), grid.front(), grid.back()));
}

// Convenience: check the entry against its own canonical first integral.
inline ResidualReport first_order_residual(const catalog::ClosedFormSolution& sol,
                                           const std::vector<double>& grid,
                                           double tolerance = 1e-9) {
  return first_order_residual(sol, catalog::first_integral_of(sol), grid, tolerance);
}

// ---------------------------------------------------------------------------
// PDE residual (finite differences in the lab frame)
// ---------------------------------------------------------------------------

struct Grid2D {
  double x0 = -1.0, x1 = 1.0;
  int nx = 21;
  double t0 = 0.0, t1 = 0.5;
  int nt = 11;
};

// Residual of the full field equation for phi(x,t) = value(sol, eta(x,t)),
// all derivatives by second-order central differences with step h. The
// max_abs value decreases as O(h^2); `pass` is judged by that convergence,
// not an absolute size, so no tolerance applies here.
inline ResidualReport pde_residual(const catalog::ClosedFormSolution& sol,
                                   const core::WaveFrame& frame,
                                   const core::EquationSpec& spec,
                                   const Grid2D& grid, double h) {
  core::validate(frame);
  if (!(h > 0.0)) throw domain_error("pde_residual: requires h > 0");
  if (grid.nx < 1 || grid.nt < 1) throw domain_error("pde_residual: empty grid");
  const core::GeneralF g = core::canonicalize(spec);
  const catalog::ValidityDomain dom = catalog::domain(sol);

  auto field = [&](double x, double t) -> double {
    const double eta = frame.eta(x, t);
    if (!dom.contains(eta)) {
      std::ostringstream msg;
      msg << "pde_residual: stencil crosses a singularity near eta = " << eta;
      throw domain_error(msg.str());
    }
    return catalog::value(sol, eta);
  };

  detail::ResidualAccumulator acc;
  for (int j = 0; j < grid.nt; ++j) {
    const double t = grid.nt == 1
                         ? grid.t0
                         : grid.t0 + (grid.t1 - grid.t0) * j / (grid.nt - 1);
    for (int i = 0; i < grid.nx; ++i) {
      const double x = grid.nx == 1
                           ? grid.x0
                           : grid.x0 + (grid.x1 - grid.x0) * i / (grid.nx - 1);
      const double f0 = field(x, t);
      const double fxp = field(x + h, t), fxm = field(x - h, t);
      const double ftp = field(x, t + h), ftm = field(x, t - h);
      const double phi_x = (fxp - fxm) / (2.0 * h);
      const double phi_t = (ftp - ftm) / (2.0 * h);
      const double phi_xx = (fxp - 2.0 * f0 + fxm) / (h * h);
      const double phi_tt = (ftp - 2.0 * f0 + ftm) / (h * h);
      const double wave = f0 * (phi_xx - phi_tt);
      const double grad = g.a * (phi_x * phi_x - phi_t * phi_t);
      const double rhs = core::eval_F(g, f0);
      const double r = wave - grad - rhs;
      acc.add(std::abs(r), std::abs(wave) + std::abs(grad) + std::abs(rhs), x, t);
    }
  }
  std::ostringstream desc;
  desc << grid.nx << "x" << grid.nt << " lab-frame grid, stencil h = " << h;
  ResidualReport rep = acc.finish(0.0, desc.str());
  rep.pass = true;  // judged by convergence order, not size
  return rep;
}

// ---------------------------------------------------------------------------
// Conserved quantity along integrated trajectories
// ---------------------------------------------------------------------------

struct DriftReport {
  double drift = 0.0;    // max |Q(eta) - Q(eta_0)|
  double q_initial = 0.0;
};

// Q(eta) = (phi')^2 phi^{-2a} - G(phi) is constant along solutions of the
// profile equation; its value is the integration constant. `trajectory`
// must carry derivative samples.
inline DriftReport conserved_quantity_drift(const core::EquationSpec& spec,
                                            const numkit::Samples1D& trajectory) {
  trajectory.validate();
  if (trajectory.derivatives.empty()) {
    throw domain_error("conserved_quantity_drift: trajectory lacks derivatives");
  }
  const core::FirstIntegral fi = core::first_integral(spec, 0.0);
  bool fractional = false;
  for (const auto& t : fi.terms) {
    if (t.kind != core::FirstIntegral::Kind::kPower ||
        t.exponent != std::floor(t.exponent)) {
      fractional = true;
    }
  }
  DriftReport rep;
  bool first = true;
  for (std::size_t i = 0; i < trajectory.grid.size(); ++i) {
    const double phi = trajectory.values[i];
    const double dphi = trajectory.derivatives[i];
    if (phi <= 0.0 && (fractional || fi.a != std::floor(fi.a))) {
      throw domain_error("conserved_quantity_drift: phi <= 0 with fractional exponents");
    }
    const double q = dphi * dphi * std::pow(phi, -2.0 * fi.a) - fi.G(phi);
    if (first) {
      rep.q_initial = q;
      first = false;
    } else {
      rep.drift = std::max(rep.drift, std::abs(q - rep.q_initial));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Power-transform check
// ---------------------------------------------------------------------------

// Builds y = phi^{1/p} with chain-rule derivatives from the entry's analytic
// ones and measures the profile residual of y against the transformed spec.
inline ResidualReport check_p_transform(const core::EquationSpec& spec,
                                        const catalog::ClosedFormSolution& sol,
                                        double p, const std::vector<double>& grid,
                                        double tolerance = 1e-9) {
  if (grid.empty()) throw domain_error("check_p_transform: empty grid");
  const core::PowerLaw transformed = core::p_transform(spec, p);
  const double q = 1.0 / p;
  detail::ResidualAccumulator acc;
  for (double eta : grid) {
    const catalog::Eval e = catalog::eval(sol, eta);
    if (!(e.value > 0.0)) {
      throw domain_error("check_p_transform: requires phi > 0 on the grid");
    }
    const double y = std::pow(e.value, q);
    const double y1 = q * std::pow(e.value, q - 1.0) * e.d1;
    const double y2 = q * (q - 1.0) * std::pow(e.value, q - 2.0) * e.d1 * e.d1 +
                      q * std::pow(e.value, q - 1.0) * e.d2;
    const double wave = y * y2;
    const double grad = transformed.a * y1 * y1;
    const double pow_term = transformed.b * std::pow(y, transformed.n + 1.0);
    const double r = wave - grad + pow_term;
    acc.add(std::abs(r), std::abs(wave) + std::abs(grad) + std::abs(pow_term), eta);
  }
  return acc.finish(tolerance,
                    detail::describe_grid(grid.size(), grid.front(), grid.back()));
}

// ---------------------------------------------------------------------------
// Lorentz covariance check
// ---------------------------------------------------------------------------

// The field built at speed u, evaluated in coordinates boosted by w, must
// equal the field built at the composed speed (u + w)/(1 + u w) pointwise:
// eta is a Lorentz scalar. Reports the max pointwise difference.
inline ResidualReport lorentz_profile_check(const catalog::ClosedFormSolution& sol,
                                            double u, double w, const Grid2D& grid,
                                            double tolerance = 1e-12) {
  const core::WaveFrame frame_u{u};
  core::validate(frame_u);
  const core::WaveFrame frame_c{core::boost_compose(u, w)};
  const double gw = 1.0 / std::sqrt(1.0 - w * w);

  detail::ResidualAccumulator acc;
  for (int j = 0; j < grid.nt; ++j) {
    const double t = grid.nt == 1
                         ? grid.t0
                         : grid.t0 + (grid.t1 - grid.t0) * j / (grid.nt - 1);
    for (int i = 0; i < grid.nx; ++i) {
      const double x = grid.nx == 1
                           ? grid.x0
                           : grid.x0 + (grid.x1 - grid.x0) * i / (grid.nx - 1);
      // coordinates boosted by w
      const double xb = gw * (x - w * t);
      const double tb = gw * (t - w * x);
      const double lhs = catalog::value(sol, frame_u.eta(xb, tb));
      const double rhs = catalog::value(sol, frame_c.eta(x, t));
      acc.add(std::abs(lhs - rhs), std::abs(lhs) + std::abs(rhs), x, t);
    }
  }
  std::ostringstream desc;
  desc << grid.nx << "x" << grid.nt << " grid, u = " << u << ", w = " << w;
  // Pointwise agreement is judged on the absolute difference.
  ResidualReport rep = acc.rep;
  rep.tolerance = tolerance;
  rep.pass = rep.max_abs < tolerance;
  rep.grid_desc = desc.str();
  return rep;
}

// ---------------------------------------------------------------------------
// Convergence order
// ---------------------------------------------------------------------------

struct ConvergenceReport {
  bool at_precision_floor = false;
  double slope = 0.0;
  std::vector<double> max_abs;  // residual per level
};

// Least-squares slope of log(max_abs) against log(h) across refinement
// levels. Residuals at or below 1e-13 are the roundoff floor; no meaningful
// order can be read off there.
inline ConvergenceReport convergence_order(
    const std::function<double(double)>& residual_max_abs,
    const std::vector<double>& h_levels) {
  if (h_levels.size() < 3) {
    throw domain_error("convergence_order: needs at least 3 levels");
  }
  ConvergenceReport rep;
  std::vector<double> lx, ly;
  for (double h : h_levels) {
    const double r = residual_max_abs(h);
    rep.max_abs.push_back(r);
    if (r <= 1e-13) {
      rep.at_precision_floor = true;
      return rep;
    }
    lx.push_back(std::log(h));
    ly.push_back(std::log(r));
  }
  const std::size_t n = lx.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return rep;
}

}  // namespace solistat::verify
