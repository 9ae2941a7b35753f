#pragma once

// Direct numerical integration of (i) the traveling-wave profile equation
// from initial conditions and (ii) the full 1+1D field equation from
// closed-form initial data, by method of lines: second-order central
// stencils in space, classic RK4 in time, dt = cfl * h. Diagnostics:
// feature-tracking wave speed, discrete field energy (semilinear family),
// shape drift against closed forms.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "solistat/catalog.hpp"
#include "solistat/core.hpp"
#include "solistat/errors.hpp"
#include "solistat/numkit.hpp"

namespace solistat::sim {

// ---------------------------------------------------------------------------
// Profile-equation integration
// ---------------------------------------------------------------------------

struct ProfileTrajectory {
  numkit::Samples1D samples;  // values phi, derivatives phi'
  numkit::StopReason stop = numkit::StopReason::kReachedEnd;
};

// Integrates phi'' = [a (phi')^2 + F(phi)] / phi as a 2-state system from
// (phi0, dphi0) over [eta0, eta1], sampling at n_samples uniform points.
// Stops early when phi drops below `floor` or |phi| exceeds 1e10.
inline ProfileTrajectory integrate_profile(const core::TravelingWaveODE& ode,
                                           double phi0, double dphi0,
                                           double eta0, double eta1,
                                           numkit::Tolerance tol = {1e-12, 1e-12},
                                           double floor = 1e-10,
                                           int n_samples = 501) {
  if (phi0 == 0.0) {
    throw domain_error("integrate_profile: phi0 = 0 makes the equation singular");
  }
  const core::GeneralF g = core::canonicalize(ode.spec);
  if (g.a != 0.0 && !(phi0 > 0.0)) {
    throw domain_error("integrate_profile: quasilinear specs require phi0 > 0");
  }
  if (n_samples < 2) throw domain_error("integrate_profile: needs >= 2 samples");

  auto rhs = [&g](double /*eta*/, const std::vector<double>& y, std::vector<double>& dy) {
    dy[0] = y[1];
    dy[1] = (g.a * y[1] * y[1] + core::eval_F(g, y[0])) / y[0];
  };
  auto stop = [floor](double /*eta*/, const std::vector<double>& y) {
    return y[0] < floor || std::abs(y[0]) > 1e10;
  };
  std::vector<double> sample_at(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    sample_at[static_cast<std::size_t>(i)] =
        eta0 + (eta1 - eta0) * static_cast<double>(i) / (n_samples - 1);
  }
  sample_at.back() = eta1;

  const numkit::OdeSolution sol = numkit::ode_solve_adaptive(
      rhs, {phi0, dphi0}, eta0, eta1, tol, stop, sample_at);
  ProfileTrajectory out;
  out.samples = sol.component(0, 1);
  out.stop = sol.stop;
  return out;
}

// ---------------------------------------------------------------------------
// Field simulation
// ---------------------------------------------------------------------------

struct Boundary {
  enum class Kind { kPeriodic, kDirichlet };
  Kind kind = Kind::kDirichlet;
  double left = 0.0;
  double right = 0.0;

  static Boundary periodic() { return {Kind::kPeriodic, 0.0, 0.0}; }
  static Boundary dirichlet(double l, double r) { return {Kind::kDirichlet, l, r}; }
};

struct SimConfig {
  double x_min = -40.0;
  double x_max = 40.0;
  double h = 0.05;
  double cfl = 0.5;            // dt = cfl * h
  double t_end = 20.0;
  Boundary boundary = Boundary::dirichlet(0.0, 0.0);
  double floor = 1e-10;        // positivity floor for quasilinear specs
  int snapshot_stride = 0;     // steps between snapshots; 0 = every 0.5 time units
};

inline void validate(const SimConfig& cfg) {
  if (!(cfg.h > 0.0) || !(cfg.x_max - cfg.x_min >= 16.0 * cfg.h)) {
    throw domain_error("SimConfig: requires h > 0 and a window of at least 16 h");
  }
  if (!(cfg.cfl > 0.0) || cfg.cfl > 1.0) {
    throw domain_error("SimConfig: requires cfl in (0, 1]");
  }
  if (!(cfg.t_end > 0.0)) throw domain_error("SimConfig: requires t_end > 0");
  if (cfg.floor < 0.0) throw domain_error("SimConfig: floor must be >= 0");
}

// One field snapshot: nodes x_i = x0 + i h, values phi and time derivative v.
struct GridState {
  double x0 = 0.0;
  double h = 1.0;
  std::vector<double> phi;
  std::vector<double> v;
  double t = 0.0;

  std::size_t n() const { return phi.size(); }
  double x(std::size_t i) const { return x0 + h * static_cast<double>(i); }
};

inline void validate(const GridState& s, double floor = 0.0) {
  if (s.phi.size() != s.v.size() || s.phi.size() < 8) {
    throw domain_error("GridState: phi/v must have equal length >= 8");
  }
  for (std::size_t i = 0; i < s.phi.size(); ++i) {
    if (!std::isfinite(s.phi[i]) || !std::isfinite(s.v[i])) {
      throw domain_error("GridState: non-finite entry");
    }
    if (floor > 0.0 && s.phi[i] < floor) {
      throw domain_error("GridState: value below the positivity floor");
    }
  }
}

// Samples the closed form in the moving frame at t = 0:
// phi_i = value(eta(x_i, 0)) and v_i = -u gamma * value'(eta(x_i, 0)).
// Quasilinear tails that fall below cfg.floor are clamped to the floor (at
// rest), matching Dirichlet far-field values at the floor.
inline GridState init_from_solution(const catalog::ClosedFormSolution& sol,
                                    const core::WaveFrame& frame,
                                    const SimConfig& cfg) {
  validate(cfg);
  core::validate(frame);
  const std::size_t n =
      static_cast<std::size_t>(std::lround((cfg.x_max - cfg.x_min) / cfg.h)) + 1;
  const catalog::ValidityDomain dom = catalog::domain(sol);
  const double a = core::quasilinear_exponent(catalog::equation_of(sol));
  const bool clamp = a != 0.0 && cfg.floor > 0.0;
  const double gamma = frame.gamma();

  GridState state;
  state.x0 = cfg.x_min;
  state.h = cfg.h;
  state.t = 0.0;
  state.phi.resize(n);
  state.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double eta = frame.eta(state.x(i), 0.0);
    if (!dom.contains(eta)) {
      std::ostringstream msg;
      msg << "init_from_solution: singularity inside the window at x = " << state.x(i);
      throw domain_error(msg.str());
    }
    const catalog::Eval e = catalog::eval(sol, eta);
    if (clamp && e.value < cfg.floor) {
      state.phi[i] = cfg.floor;
      state.v[i] = 0.0;
    } else {
      state.phi[i] = e.value;
      state.v[i] = -frame.u * gamma * e.d1;
    }
  }
  return state;
}

struct Snapshot {
  double t = 0.0;
  std::vector<double> phi;
  std::vector<double> v;
};

struct RunResult {
  std::vector<Snapshot> snapshots;  // includes t = 0 and t = t_end
  GridState final_state;
  std::size_t steps = 0;
};

namespace detail {

// Semi-discrete right-hand side. For a = 0 the update is the semilinear
// v' = D2 phi - F(phi)/phi with F/phi expanded analytically from the term
// list (finite at phi = 0); otherwise the quasilinear form divides by phi.
struct FieldRhs {
  core::GeneralF g;
  Boundary boundary;
  double h = 0.0;

  void operator()(const std::vector<double>& phi, const std::vector<double>& v,
                  std::vector<double>& dphi, std::vector<double>& dv) const {
    const std::size_t n = phi.size();
    const double inv_h2 = 1.0 / (h * h);
    const double inv_2h = 1.0 / (2.0 * h);
    const bool periodic = boundary.kind == Boundary::Kind::kPeriodic;
    const std::size_t lo = periodic ? 0 : 1;
    const std::size_t hi = periodic ? n : n - 1;
    if (!periodic) {
      dphi[0] = dv[0] = 0.0;
      dphi[n - 1] = dv[n - 1] = 0.0;
    }
    for (std::size_t i = lo; i < hi; ++i) {
      const double pm = phi[i == 0 ? n - 1 : i - 1];
      const double pp = phi[i + 1 == n ? 0 : i + 1];
      const double p0 = phi[i];
      const double d2 = (pm - 2.0 * p0 + pp) * inv_h2;
      dphi[i] = v[i];
      if (g.a == 0.0) {
        dv[i] = d2 - core::eval_F_over_phi(g, p0);
      } else {
        const double d1 = (pp - pm) * inv_2h;
        dv[i] = (p0 * d2 - g.a * d1 * d1 + g.a * v[i] * v[i] -
                 core::eval_F(g, p0)) / p0;
      }
    }
  }
};

}  // namespace detail

// Classic RK4 march of the method-of-lines system. Throws stability_error
// with the last good time when a node goes non-finite or a quasilinear
// field dips below the floor.
inline RunResult run(const core::EquationSpec& spec, GridState state,
                     const SimConfig& cfg) {
  validate(cfg);
  const core::GeneralF g = core::canonicalize(spec);
  const double floor = g.a != 0.0 ? cfg.floor : 0.0;
  validate(state, floor);

  const double dt_target = cfg.cfl * cfg.h;
  const std::size_t steps =
      static_cast<std::size_t>(std::ceil(cfg.t_end / dt_target - 1e-12));
  const double dt = cfg.t_end / static_cast<double>(steps);
  std::size_t stride = cfg.snapshot_stride > 0
                           ? static_cast<std::size_t>(cfg.snapshot_stride)
                           : std::max<std::size_t>(1, static_cast<std::size_t>(
                                                          std::lround(0.5 / dt)));

  const detail::FieldRhs rhs{g, cfg.boundary, cfg.h};
  const std::size_t n = state.n();
  std::vector<double> k1p(n), k1v(n), k2p(n), k2v(n), k3p(n), k3v(n), k4p(n), k4v(n);
  std::vector<double> tp(n), tv(n);

  RunResult out;
  out.snapshots.push_back({state.t, state.phi, state.v});

  auto check_state = [&](double last_good_t) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(state.phi[i]) || !std::isfinite(state.v[i])) {
        throw stability_error("run: field went non-finite", last_good_t);
      }
      if (floor > 0.0 && state.phi[i] < floor) {
        throw stability_error("run: field dropped below the positivity floor",
                              last_good_t);
      }
    }
  };

  for (std::size_t step = 1; step <= steps; ++step) {
    const double t_prev = state.t;
    rhs(state.phi, state.v, k1p, k1v);
    for (std::size_t i = 0; i < n; ++i) {
      tp[i] = state.phi[i] + 0.5 * dt * k1p[i];
      tv[i] = state.v[i] + 0.5 * dt * k1v[i];
    }
    rhs(tp, tv, k2p, k2v);
    for (std::size_t i = 0; i < n; ++i) {
      tp[i] = state.phi[i] + 0.5 * dt * k2p[i];
      tv[i] = state.v[i] + 0.5 * dt * k2v[i];
    }
    rhs(tp, tv, k3p, k3v);
    for (std::size_t i = 0; i < n; ++i) {
      tp[i] = state.phi[i] + dt * k3p[i];
      tv[i] = state.v[i] + dt * k3v[i];
    }
    rhs(tp, tv, k4p, k4v);
    for (std::size_t i = 0; i < n; ++i) {
      state.phi[i] += dt / 6.0 * (k1p[i] + 2.0 * k2p[i] + 2.0 * k3p[i] + k4p[i]);
      state.v[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
    }
    state.t = dt * static_cast<double>(step);
    check_state(t_prev);
    if (step % stride == 0 || step == steps) {
      out.snapshots.push_back({state.t, state.phi, state.v});
    }
  }
  out.steps = steps;
  out.final_state = std::move(state);
  return out;
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

enum class Feature {
  kBellPeak,    // vertex of the parabola through the 3 highest nodes
  kKinkLevel,   // linear interpolation of the vacuum-midpoint crossing
};

inline Feature feature_for(const catalog::ClosedFormSolution& sol) {
  const catalog::Decay d = catalog::asymptotic_decay(sol);
  return (d.left && d.right) ? Feature::kBellPeak : Feature::kKinkLevel;
}

inline double locate_feature(const Snapshot& snap, double x0, double h, Feature f) {
  const std::vector<double>& phi = snap.phi;
  const std::size_t n = phi.size();
  if (f == Feature::kBellPeak) {
    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (phi[i] > phi[imax]) imax = i;
    }
    if (imax == 0 || imax + 1 == n) {
      throw tracking_error("locate_feature: peak left the domain");
    }
    const double denom = phi[imax - 1] - 2.0 * phi[imax] + phi[imax + 1];
    double dx = 0.0;
    if (denom != 0.0) dx = 0.5 * (phi[imax - 1] - phi[imax + 1]) / denom;
    return x0 + h * (static_cast<double>(imax) + dx);
  }
  const double level = 0.5 * (phi.front() + phi.back());
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double f0 = phi[i] - level;
    const double f1 = phi[i + 1] - level;
    if (f0 == 0.0) return x0 + h * static_cast<double>(i);
    if (f0 * f1 < 0.0) {
      return x0 + h * (static_cast<double>(i) + f0 / (f0 - f1));
    }
  }
  throw tracking_error("locate_feature: no level crossing inside the domain");
}

// Least-squares slope of the tracked feature location against time.
inline double measure_speed(const std::vector<Snapshot>& snapshots, double x0,
                            double h, Feature feature) {
  if (snapshots.size() < 3) {
    throw domain_error("measure_speed: needs at least 3 snapshots");
  }
  double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
  const double n = static_cast<double>(snapshots.size());
  for (const Snapshot& s : snapshots) {
    const double loc = locate_feature(s, x0, h, feature);
    st += s.t;
    sx += loc;
    stt += s.t * s.t;
    stx += s.t * loc;
  }
  return (n * stx - st * sx) / (n * stt - st * st);
}

// Discrete field energy sum_i h [ v^2/2 + (D1 phi)^2/2 + V(phi) ] for the
// semilinear (a = 0) family, with V the term-wise antiderivative of
// F(phi)/phi shifted so that V vanishes at the rest value taken from the
// left boundary node.
inline double energy(const GridState& state, const core::EquationSpec& spec) {
  const core::GeneralF g = core::canonicalize(spec);
  if (g.a != 0.0) {
    throw unsupported_form_error(
        "energy: no conserved field energy for the quasilinear family (a != 0)");
  }
  auto potential = [&g](double phi) {
    double acc = 0.0;
    for (const core::FTerm& t : g.terms) {
      if (t.is_power()) {
        const double e = t.exponent();
        if (e == 0.0) {
          acc += t.coef * std::log(std::abs(phi));
        } else {
          acc += t.coef / e * std::pow(phi, e);
        }
      } else {
        acc += -t.coef * std::cos(phi);
      }
    }
    return acc;
  };
  const std::size_t n = state.n();
  if (n < 3) throw domain_error("energy: grid too small");
  const double v_ref = potential(state.phi.front());
  std::vector<double> cell(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d1;
    if (i == 0) {
      d1 = (state.phi[1] - state.phi[0]) / state.h;
    } else if (i + 1 == n) {
      d1 = (state.phi[n - 1] - state.phi[n - 2]) / state.h;
    } else {
      d1 = (state.phi[i + 1] - state.phi[i - 1]) / (2.0 * state.h);
    }
    cell[i] = 0.5 * state.v[i] * state.v[i] + 0.5 * d1 * d1 +
              (potential(state.phi[i]) - v_ref);
  }
  return state.h * numkit::deterministic_sum(cell);
}

inline double energy(const Snapshot& snap, double x0, double h,
                     const core::EquationSpec& spec) {
  GridState s;
  s.x0 = x0;
  s.h = h;
  s.phi = snap.phi;
  s.v = snap.v;
  s.t = snap.t;
  return energy(s, spec);
}

}  // namespace solistat::sim
