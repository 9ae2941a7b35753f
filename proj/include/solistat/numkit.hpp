#pragma once

// Shared double-precision numerical kernels: log-gamma, adaptive quadrature
// (finite interval, whole line, half line), finite-difference stencils and an
// embedded Runge-Kutta ODE solver with step control and early-stop support.
//
// Everything here is a pure function of its inputs, and every reduction runs
// in a fixed input order, so repeated calls are bit-identical.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "solistat/errors.hpp"

namespace solistat::numkit {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
};

inline void validate(const Tolerance& tol) {
  if (!(tol.abs_tol > 0.0) || !(tol.rel_tol > 0.0) ||
      !std::isfinite(tol.abs_tol) || !std::isfinite(tol.rel_tol)) {
    throw domain_error("Tolerance: abs_tol and rel_tol must be positive and finite");
  }
}

// Sampled curve on a strictly increasing grid, with optional first
// derivative values alongside.
struct Samples1D {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> derivatives;  // empty when not tracked

  void validate() const {
    if (grid.size() != values.size()) {
      throw domain_error("Samples1D: grid/value length mismatch");
    }
    if (!derivatives.empty() && derivatives.size() != grid.size()) {
      throw domain_error("Samples1D: derivative length mismatch");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!std::isfinite(grid[i]) || !std::isfinite(values[i])) {
        throw domain_error("Samples1D: non-finite entry");
      }
      if (i > 0 && !(grid[i] > grid[i - 1])) {
        throw domain_error("Samples1D: grid must be strictly increasing");
      }
    }
  }
};

// Neumaier-compensated sequential sum. Accumulation order is the input
// order; no reassociation, so results do not depend on the platform's
// reduction strategy.
inline double deterministic_sum(std::span<const double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

// ---------------------------------------------------------------------------
// log-gamma
// ---------------------------------------------------------------------------

// ln Gamma(x) for x > 0, Lanczos approximation with g = 7 and 9 coefficients.
// Relative error is below 1e-13 over the range used here (x <= ~100).
inline double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw domain_error("log_gamma: requires finite x > 0");
  }
  static constexpr double kG = 7.0;
  static constexpr double kCoef[9] = {
      0.99999999999980993,
      676.5203681218851,
      -1259.1392167224028,
      771.32342877765313,
      -176.61502916214059,
      12.507343278686905,
      -0.13857109526572012,
      9.9843695780195716e-6,
      1.5056327351493116e-7,
  };
  if (x < 0.5) {
    // Reflection keeps the series argument away from the poles.
    return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double acc = kCoef[0];
  for (int i = 1; i < 9; ++i) {
    acc += kCoef[i] / (z + static_cast<double>(i));
  }
  const double t = z + kG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

namespace detail {

inline double eval_finite(const std::function<double(double)>& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "integrand is not finite at x = " << x;
    throw domain_error(msg.str());
  }
  return v;
}

struct PanelResult {
  double value = 0.0;
  bool converged = true;
};

// One level of adaptive Simpson with the Richardson-extrapolated error
// estimate |S2 - S1| <= 15 eps.
inline PanelResult simpson_adapt(const std::function<double(double)>& f,
                                 double a, double b,
                                 double fa, double fm, double fb,
                                 double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = eval_finite(f, lm);
  const double frm = eval_finite(f, rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double s2 = left + right;
  const double diff = s2 - whole;
  if (std::abs(diff) <= 15.0 * eps) {
    return {s2 + diff / 15.0, true};
  }
  if (depth <= 0) {
    return {s2 + diff / 15.0, false};
  }
  const PanelResult l = simpson_adapt(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1);
  const PanelResult r = simpson_adapt(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
  return {l.value + r.value, l.converged && r.converged};
}

// Composite Simpson on a fixed uniform grid; used only to scale the
// relative-tolerance part of the adaptive pass.
inline double simpson_coarse(const std::function<double(double)>& f,
                             double a, double b, int panels) {
  const double h = (b - a) / panels;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(panels) + 1);
  terms.push_back(eval_finite(f, a));
  for (int i = 1; i < panels; ++i) {
    const double w = (i % 2 == 1) ? 4.0 : 2.0;
    terms.push_back(w * eval_finite(f, a + h * i));
  }
  terms.push_back(eval_finite(f, b));
  return deterministic_sum(terms) * h / 3.0;
}

}  // namespace detail

inline constexpr int kQuadratureMaxDepth = 60;

// Adaptive Simpson estimate of the integral of f over [a, b] with error
// target max(abs_tol, rel_tol * |result|). Throws accuracy_error carrying
// the best estimate if the recursion cap is exhausted anywhere.
inline double integrate_adaptive(const std::function<double(double)>& f,
                                 double a, double b, Tolerance tol = {}) {
  validate(tol);
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw domain_error("integrate_adaptive: requires finite a < b");
  }
  const double coarse = detail::simpson_coarse(f, a, b, 64);
  const double eps = std::max(tol.abs_tol, tol.rel_tol * std::abs(coarse));
  const double fa = detail::eval_finite(f, a);
  const double fb = detail::eval_finite(f, b);
  const double m = 0.5 * (a + b);
  const double fm = detail::eval_finite(f, m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const detail::PanelResult r =
      detail::simpson_adapt(f, a, b, fa, fm, fb, whole, eps, kQuadratureMaxDepth);
  if (!r.converged) {
    throw accuracy_error("integrate_adaptive: subdivision cap reached before "
                         "the requested accuracy",
                         r.value);
  }
  return r.value;
}

// Integral of f over the whole real line through the substitution
// x = tan(theta), theta in (-pi/2, pi/2). The substituted integrand
// f(tan t) * (1 + tan^2 t) stays exact for heavy (Cauchy-class) tails,
// where plain interval truncation would lose first-order accuracy.
inline double integrate_real_line(const std::function<double(double)>& f,
                                  Tolerance tol = {}) {
  auto g = [&f](double theta) {
    const double t = std::tan(theta);
    return f(t) * (1.0 + t * t);
  };
  return integrate_adaptive(g, -0.5 * kPi, 0.5 * kPi, tol);
}

// Integral of f over [a, +inf) via x = a + tan(theta).
inline double integrate_half_line(const std::function<double(double)>& f,
                                  double a, Tolerance tol = {}) {
  if (!std::isfinite(a)) {
    throw domain_error("integrate_half_line: requires finite lower limit");
  }
  auto g = [&f, a](double theta) {
    const double t = std::tan(theta);
    return f(a + t) * (1.0 + t * t);
  };
  return integrate_adaptive(g, 0.0, 0.5 * kPi, tol);
}

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

inline double fd_first_derivative(const std::function<double(double)>& f,
                                  double x, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw domain_error("fd_first_derivative: requires h > 0");
  }
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Central stencil (f(x-h) - 2 f(x) + f(x+h)) / h^2, O(h^2) for smooth f and
// exact on quadratics.
inline double fd_second_derivative(const std::function<double(double)>& f,
                                   double x, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw domain_error("fd_second_derivative: requires h > 0");
  }
  return (f(x - h) - 2.0 * f(x) + f(x + h)) / (h * h);
}

// ---------------------------------------------------------------------------
// Adaptive ODE integration (Dormand-Prince 5(4))
// ---------------------------------------------------------------------------

enum class StopReason {
  kReachedEnd,   // integrated through the full span
  kPredicate,    // the caller's stop predicate fired
};

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::kReachedEnd: return "reached_end";
    case StopReason::kPredicate: return "stop_predicate";
  }
  return "unknown";
}

using OdeRhs = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;
using OdeStop = std::function<bool(double, const std::vector<double>&)>;

struct OdeSolution {
  std::vector<double> eta;
  std::vector<std::vector<double>> states;  // states[i] is the state at eta[i]
  StopReason stop = StopReason::kReachedEnd;

  Samples1D component(std::size_t value_index) const {
    Samples1D out;
    out.grid = eta;
    out.values.reserve(states.size());
    for (const auto& s : states) out.values.push_back(s.at(value_index));
    return out;
  }

  // Samples of one component together with its derivative component, for
  // second-order systems stored as (value, derivative).
  Samples1D component(std::size_t value_index, std::size_t derivative_index) const {
    Samples1D out = component(value_index);
    out.derivatives.reserve(states.size());
    for (const auto& s : states) out.derivatives.push_back(s.at(derivative_index));
    return out;
  }
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct Dopri5 {
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                          a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                          a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                          b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                          c5 = 8.0 / 9.0;
  // 5th-order result minus the embedded 4th-order result.
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                          e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                          e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
};

}  // namespace detail

// Integrates y' = rhs(eta, y) from eta0 to eta1 with an embedded 4(5) pair
// and PI-free step control. Output is recorded at the strictly increasing
// sample_at points (steps land on them exactly); with no sample points every
// accepted step is recorded. A stop predicate, checked at accepted steps,
// halts the integration early; the halt point is always recorded.
inline OdeSolution ode_solve_adaptive(const OdeRhs& rhs, std::vector<double> y0,
                                      double eta0, double eta1, Tolerance tol = {},
                                      const OdeStop& stop = {},
                                      const std::vector<double>& sample_at = {}) {
  validate(tol);
  if (!(eta1 > eta0) || !std::isfinite(eta0) || !std::isfinite(eta1)) {
    throw domain_error("ode_solve_adaptive: requires finite eta1 > eta0");
  }
  const std::size_t nd = y0.size();
  if (nd == 0) throw domain_error("ode_solve_adaptive: empty state");
  for (std::size_t i = 0; i + 1 < sample_at.size(); ++i) {
    if (!(sample_at[i] < sample_at[i + 1])) {
      throw domain_error("ode_solve_adaptive: sample points must be strictly increasing");
    }
  }
  if (!sample_at.empty() &&
      (sample_at.front() < eta0 || sample_at.back() > eta1)) {
    throw domain_error("ode_solve_adaptive: sample points outside the span");
  }

  const double span = eta1 - eta0;
  const double h_min = 1e-14 * span;
  const std::size_t max_steps = 4'000'000;

  using D = detail::Dopri5;
  std::vector<double> y = std::move(y0);
  std::vector<double> k1(nd), k2(nd), k3(nd), k4(nd), k5(nd), k6(nd), k7(nd);
  std::vector<double> ytmp(nd), ynew(nd);

  auto call = [&](double e, const std::vector<double>& yy, std::vector<double>& out) {
    rhs(e, yy, out);
    for (double v : out) {
      if (!std::isfinite(v)) {
        throw integration_error("ode_solve_adaptive: rhs produced a non-finite value", e, yy);
      }
    }
  };

  OdeSolution sol;
  auto record = [&](double e, const std::vector<double>& yy) {
    sol.eta.push_back(e);
    sol.states.push_back(yy);
  };

  double eta = eta0;
  std::size_t next_sample = 0;
  const bool record_all = sample_at.empty();
  if (!sample_at.empty() && sample_at.front() == eta0) {
    record(eta0, y);
    ++next_sample;
  } else if (record_all) {
    record(eta0, y);
  }

  if (stop && stop(eta, y)) {
    if (sol.eta.empty() || sol.eta.back() != eta) record(eta, y);
    sol.stop = StopReason::kPredicate;
    return sol;
  }

  call(eta, y, k1);
  double h = span / 100.0;

  for (std::size_t step = 0; step < max_steps; ++step) {
    if (eta >= eta1) break;
    bool landing = false;
    double target = eta1;
    if (next_sample < sample_at.size() && sample_at[next_sample] < target) {
      target = sample_at[next_sample];
    }
    if (eta + h >= target) {
      h = target - eta;
      landing = true;
    }
    if (h < h_min) {
      // Collapsing steps right at a landing point are fine; anything else is
      // genuine step underflow.
      if (!landing) {
        throw integration_error("ode_solve_adaptive: step size underflow", eta, y);
      }
      if (h <= 0.0) {  // already at the target within rounding
        eta = target;
        if (next_sample < sample_at.size() && target == sample_at[next_sample]) {
          record(eta, y);
          ++next_sample;
        }
        h = span / 100.0;
        continue;
      }
    }

    for (std::size_t i = 0; i < nd; ++i) ytmp[i] = y[i] + h * D::a21 * k1[i];
    call(eta + D::c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < nd; ++i)
      ytmp[i] = y[i] + h * (D::a31 * k1[i] + D::a32 * k2[i]);
    call(eta + D::c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < nd; ++i)
      ytmp[i] = y[i] + h * (D::a41 * k1[i] + D::a42 * k2[i] + D::a43 * k3[i]);
    call(eta + D::c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < nd; ++i)
      ytmp[i] = y[i] + h * (D::a51 * k1[i] + D::a52 * k2[i] + D::a53 * k3[i] +
                            D::a54 * k4[i]);
    call(eta + D::c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < nd; ++i)
      ytmp[i] = y[i] + h * (D::a61 * k1[i] + D::a62 * k2[i] + D::a63 * k3[i] +
                            D::a64 * k4[i] + D::a65 * k5[i]);
    call(eta + h, ytmp, k6);
    for (std::size_t i = 0; i < nd; ++i)
      ynew[i] = y[i] + h * (D::b1 * k1[i] + D::b3 * k3[i] + D::b4 * k4[i] +
                            D::b5 * k5[i] + D::b6 * k6[i]);
    const double eta_new = landing ? target : eta + h;
    call(eta_new, ynew, k7);

    double err_sq = 0.0;
    for (std::size_t i = 0; i < nd; ++i) {
      const double e = h * (D::e1 * k1[i] + D::e3 * k3[i] + D::e4 * k4[i] +
                            D::e5 * k5[i] + D::e6 * k6[i] + D::e7 * k7[i]);
      const double scale =
          tol.abs_tol + tol.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err_sq += (e / scale) * (e / scale);
    }
    const double err = std::sqrt(err_sq / static_cast<double>(nd));

    if (err <= 1.0) {
      eta = eta_new;
      std::swap(y, ynew);
      std::swap(k1, k7);  // first-same-as-last
      if (next_sample < sample_at.size() && eta == sample_at[next_sample]) {
        record(eta, y);
        ++next_sample;
      } else if (record_all) {
        record(eta, y);
      }
      if (stop && stop(eta, y)) {
        if (sol.eta.empty() || sol.eta.back() != eta) record(eta, y);
        sol.stop = StopReason::kPredicate;
        return sol;
      }
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      fac = std::clamp(fac, 0.2, 5.0);
      h = std::abs(h) * fac;
    } else {
      double fac = 0.9 * std::pow(err, -0.2);
      fac = std::clamp(fac, 0.2, 0.9);
      h *= fac;
      if (h < h_min) {
        throw integration_error("ode_solve_adaptive: step size underflow", eta, y);
      }
    }
  }
  if (eta < eta1) {
    throw integration_error("ode_solve_adaptive: step budget exhausted", eta, y);
  }
  sol.stop = StopReason::kReachedEnd;
  return sol;
}

}  // namespace solistat::numkit
