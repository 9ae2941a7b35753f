#pragma once

// Closed-form solution catalog. Each entry stores its parameters, knows the
// equation it solves, evaluates value and first/second derivative
// analytically, and reports its validity domain (poles and sign
// restrictions) and asymptotic decay. A matcher finds the entry for a given
// equation spec and pair of integration constants.
//
// Two entries (the quantum occupation profiles) store the density rho
// directly instead of a field value; is_density() distinguishes them.

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "solistat/core.hpp"
#include "solistat/errors.hpp"
#include "solistat/numkit.hpp"

namespace solistat::catalog {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Eval {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

struct Decay {
  bool left = false;   // value -> 0 as eta -> -inf
  bool right = false;  // value -> 0 as eta -> +inf
};

// Open intervals on which a formula is finite (and positive where a density
// or fractional power demands it), plus the excluded singular points.
struct ValidityDomain {
  std::vector<std::pair<double, double>> intervals;
  std::vector<double> singularities;

  static ValidityDomain whole_line() { return {{{-kInf, kInf}}, {}}; }

  bool contains(double eta, double clearance = 0.0) const {
    for (const auto& [lo, hi] : intervals) {
      const double a = std::isinf(lo) ? lo : lo + clearance;
      const double b = std::isinf(hi) ? hi : hi - clearance;
      if (eta > a && eta < b) return true;
    }
    return false;
  }

  double nearest_singularity(double eta) const {
    double best = std::numeric_limits<double>::quiet_NaN();
    double dist = kInf;
    for (double s : singularities) {
      const double d = std::abs(eta - s);
      if (d < dist) {
        dist = d;
        best = s;
      }
    }
    return best;
  }

  // n points distributed over the domain clipped to [lo, hi], shrunk by
  // `clearance` at singular interval ends; points are allocated to the
  // surviving sub-intervals in proportion to their length.
  std::vector<double> uniform_grid(double lo, double hi, int n,
                                   double clearance = 1e-3) const {
    if (!(lo < hi) || n < 2) {
      throw domain_error("uniform_grid: requires lo < hi and n >= 2");
    }
    std::vector<std::pair<double, double>> clipped;
    double total = 0.0;
    for (const auto& [a, b] : intervals) {
      double ca = std::max(lo, std::isinf(a) ? lo : a + clearance);
      double cb = std::min(hi, std::isinf(b) ? hi : b - clearance);
      if (cb > ca) {
        clipped.emplace_back(ca, cb);
        total += cb - ca;
      }
    }
    if (clipped.empty()) {
      throw domain_error("uniform_grid: domain does not intersect the window");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n));
    int remaining = n;
    for (std::size_t k = 0; k < clipped.size(); ++k) {
      const auto& [a, b] = clipped[k];
      int nk = (k + 1 == clipped.size())
                   ? remaining
                   : std::max(2, static_cast<int>(std::lround(n * (b - a) / total)));
      nk = std::min(nk, remaining);
      if (nk < 2) nk = remaining;  // give the tail interval whatever is left
      for (int i = 0; i < nk; ++i) {
        grid.push_back(a + (b - a) * static_cast<double>(i) / (nk - 1));
      }
      remaining -= nk;
      if (remaining <= 0) break;
    }
    return grid;
  }
};

// ---------------------------------------------------------------------------
// Entries
// ---------------------------------------------------------------------------

// phi = 2 b / (b^2 (eta + C2)^2 - C1); solves the a = 2, n = 2 power law.
// With b = 2 pi / lambda and C1 = -4 pi^2 this is the Cauchy density.
struct RationalBell {
  double b = 2.0 * numkit::kPi;
  double C1 = -4.0 * numkit::kPi * numkit::kPi;
  double C2 = 0.0;

  Eval eval_at(double eta) const {
    const double s = eta + C2;
    const double D = b * b * s * s - C1;
    Eval e;
    e.value = 2.0 * b / D;
    e.d1 = -4.0 * b * b * b * s / (D * D);
    e.d2 = 4.0 * b * b * b * (3.0 * b * b * s * s + C1) / (D * D * D);
    return e;
  }

  core::EquationSpec equation() const { return core::PowerLaw{2.0, b, 2.0}; }
  double integration_constant() const { return C1; }

  ValidityDomain domain() const {
    if (C1 < 0.0) return ValidityDomain::whole_line();
    if (C1 == 0.0) {
      const double p = -C2;
      return {{{-kInf, p}, {p, kInf}}, {p}};
    }
    const double r = std::sqrt(C1) / std::abs(b);
    const double p1 = -C2 - r;
    const double p2 = -C2 + r;
    return {{{-kInf, p1}, {p1, p2}, {p2, kInf}}, {p1, p2}};
  }

  Decay decay() const { return {true, true}; }
};

// phi = exp[(C1 - b^2 (eta + C2)^2) / (2 b)]; solves a = 1, n = 1. With
// b = 1/sigma^2 and the corrected C1 this is the normal density.
struct GaussBell {
  double b = 1.0;
  double C1 = 0.0;
  double C2 = 0.0;

  Eval eval_at(double eta) const {
    const double s = eta + C2;
    Eval e;
    e.value = std::exp((C1 - b * b * s * s) / (2.0 * b));
    e.d1 = -b * s * e.value;
    e.d2 = (b * b * s * s - b) * e.value;
    return e;
  }

  core::EquationSpec equation() const { return core::PowerLaw{1.0, b, 1.0}; }
  double integration_constant() const { return C1; }
  ValidityDomain domain() const { return ValidityDomain::whole_line(); }
  Decay decay() const { return {b > 0.0, b > 0.0}; }
};

// phi = [(b^2 (eta + C2)^2 - C1) / (b (nu + 1))]^{-(nu+1)/2}; solves the
// power law with a = n = (nu + 3)/(nu + 1). The Student-t map lands here.
struct PowerBell {
  double nu = 1.0;  // > 0
  double b = 1.0;   // > 0
  double C1 = 0.0;
  double C2 = 0.0;

  double base(double eta) const {
    const double s = eta + C2;
    return (b * b * s * s - C1) / (b * (nu + 1.0));
  }

  Eval eval_at(double eta) const {
    const double s = eta + C2;
    const double E = base(eta);
    const double q = 0.5 * (nu + 1.0);
    Eval e;
    e.value = std::pow(E, -q);
    e.d1 = -b * s * std::pow(E, -q - 1.0);
    e.d2 = -b * std::pow(E, -q - 1.0) +
           b * b * s * s * (nu + 3.0) / (nu + 1.0) * std::pow(E, -q - 2.0);
    return e;
  }

  core::EquationSpec equation() const {
    const double a = (nu + 3.0) / (nu + 1.0);
    return core::PowerLaw{a, b, a};
  }
  double integration_constant() const { return C1; }

  ValidityDomain domain() const {
    if (C1 < 0.0) return ValidityDomain::whole_line();
    if (C1 == 0.0) {
      const double p = -C2;
      return {{{-kInf, p}, {p, kInf}}, {p}};
    }
    const double r = std::sqrt(C1) / std::abs(b);
    const double p1 = -C2 - r;
    const double p2 = -C2 + r;
    // Between the roots the base is negative: the fractional power is
    // undefined there, so only the outer intervals survive.
    return {{{-kInf, p1}, {p2, kInf}}, {p1, p2}};
  }

  Decay decay() const { return {true, true}; }
};

// phi = C0 exp(-c eta); the b = 0, a = 1 member. With C0 = c this is the
// exponential density on [0, inf). Not localized, so not a bell.
struct ExpProfile {
  double C0 = 1.0;
  double c = 1.0;

  Eval eval_at(double eta) const {
    Eval e;
    e.value = C0 * std::exp(-c * eta);
    e.d1 = -c * e.value;
    e.d2 = c * c * e.value;
    return e;
  }

  core::EquationSpec equation() const { return core::PowerLaw{1.0, 0.0, 1.0}; }
  double integration_constant() const { return c * c; }
  ValidityDomain domain() const { return ValidityDomain::whole_line(); }
  Decay decay() const {
    if (c > 0.0) return {false, true};
    if (c < 0.0) return {true, false};
    return {false, false};
  }
};

// phi = A / (exp(-kappa (eta + C2)) + b) with A = b^2/(2f) and
// kappa = b/(2 sqrt(f)); solves a = 1 with F = f phi^4 - (b/2) phi^3 at
// integration constant b^2/(4f). For b = 1 this is the Fermi-Dirac
// occupation curve.
struct Logistic {
  double f = 1.0;  // > 0
  double b = 1.0;  // != 0
  double C2 = 0.0;

  double amplitude() const { return b * b / (2.0 * f); }
  double rate() const { return b / (2.0 * std::sqrt(f)); }

  Eval eval_at(double eta) const {
    const double A = amplitude();
    const double k = rate();
    const double E = std::exp(-k * (eta + C2));
    const double den = E + b;
    Eval e;
    e.value = A / den;
    e.d1 = A * k * E / (den * den);
    e.d2 = A * k * k * E * (E - b) / (den * den * den);
    return e;
  }

  core::EquationSpec equation() const {
    core::GeneralF g;
    g.a = 1.0;
    g.terms = {core::FTerm::power(f, 4.0), core::FTerm::power(-b / 2.0, 3.0)};
    return g;
  }
  double integration_constant() const { return b * b / (4.0 * f); }

  ValidityDomain domain() const {
    if (b > 0.0) return ValidityDomain::whole_line();
    // exp(-k s) = -b at s = -ln(-b)/k
    const double p = -std::log(-b) / rate() - C2;
    return {{{-kInf, p}, {p, kInf}}, {p}};
  }

  Decay decay() const {
    // The value tends to 0 where exp(-kappa s) blows up and to A/b at the
    // other end.
    if (rate() > 0.0) return {true, false};
    return {false, true};
  }
};

// phi = sqrt(2f/b) sech(sqrt(f) eta + C); solves a = 0 with
// F = f phi^2 - b phi^4 at integration constant 0 (f > 0, b > 0).
struct SechPulse {
  double f = 1.0;
  double b = 2.0;
  double C = 0.0;

  Eval eval_at(double eta) const {
    const double K = std::sqrt(2.0 * f / b);
    const double k = std::sqrt(f);
    const double th = k * eta + C;
    const double sech = 1.0 / std::cosh(th);
    const double tanh = std::tanh(th);
    Eval e;
    e.value = K * sech;
    e.d1 = -K * k * sech * tanh;
    e.d2 = K * k * k * sech * (1.0 - 2.0 * sech * sech);
    return e;
  }

  core::EquationSpec equation() const {
    core::GeneralF g;
    g.a = 0.0;
    g.terms = {core::FTerm::power(f, 2.0), core::FTerm::power(-b, 4.0)};
    return g;
  }
  double integration_constant() const { return 0.0; }
  ValidityDomain domain() const { return ValidityDomain::whole_line(); }
  Decay decay() const { return {true, true}; }
};

// phi = sqrt(f/b) tanh(sqrt(-f/2) eta + C); solves a = 0 with
// F = f phi^2 - b phi^4 at integration constant -f^2/(2b) (f < 0, b < 0).
struct TanhKink {
  double f = -1.0;
  double b = -1.0;
  double C = 0.0;

  double amplitude() const { return std::sqrt(f / b); }
  double rate() const { return std::sqrt(-f / 2.0); }

  Eval eval_at(double eta) const {
    const double K = amplitude();
    const double k = rate();
    const double th = k * eta + C;
    const double sech = 1.0 / std::cosh(th);
    Eval e;
    e.value = K * std::tanh(th);
    e.d1 = K * k * sech * sech;
    e.d2 = -2.0 * K * k * k * sech * sech * std::tanh(th);
    return e;
  }

  core::EquationSpec equation() const {
    core::GeneralF g;
    g.a = 0.0;
    g.terms = {core::FTerm::power(f, 2.0), core::FTerm::power(-b, 4.0)};
    return g;
  }
  double integration_constant() const { return -f * f / (2.0 * b); }
  ValidityDomain domain() const { return ValidityDomain::whole_line(); }
  Decay decay() const { return {false, false}; }
};

// phi = 4 arctan(exp(eta + C2)), the classic sine-Gordon kink; solves a = 0
// with F = phi sin(phi) at integration constant 2.
struct SGKink {
  double C2 = 0.0;

  Eval eval_at(double eta) const {
    const double s = eta + C2;
    const double sech = 1.0 / std::cosh(s);
    Eval e;
    e.value = 4.0 * std::atan(std::exp(s));
    e.d1 = 2.0 * sech;
    e.d2 = -2.0 * sech * std::tanh(s);
    return e;
  }

  core::EquationSpec equation() const {
    core::GeneralF g;
    g.a = 0.0;
    g.terms = {core::FTerm::phi_sin_phi(1.0)};
    return g;
  }
  double integration_constant() const { return 2.0; }
  ValidityDomain domain() const { return ValidityDomain::whole_line(); }
  Decay decay() const { return {true, false}; }
};

// rho = 2 m^2 / (exp(-2 m eta + C) - alpha/2), the squared-amplitude profile
// of the quintic field equation at beta = sqrt(3) alpha / (4 m) and zero
// integration constant. It satisfies rho' = 2 m rho (1 + (alpha/4m^2) rho).
// For alpha = 2 this is the Bose-Einstein occupation curve. The stored value
// IS the density |phi|^2.
struct BEProfileSq {
  double m = 1.0;      // > 0
  double alpha = 2.0;  // quartic coefficient
  double C = 0.0;

  Eval eval_at(double eta) const {
    const double E = std::exp(-2.0 * m * eta + C);
    const double den = E - 0.5 * alpha;
    Eval e;
    e.value = 2.0 * m * m / den;
    e.d1 = 4.0 * m * m * m * E / (den * den);
    e.d2 = 8.0 * m * m * m * m * E * (E + 0.5 * alpha) / (den * den * den);
    return e;
  }

  core::EquationSpec equation() const {
    const double beta_sq = 3.0 * alpha * alpha / (16.0 * m * m);
    core::GeneralF g;
    g.a = 0.0;
    g.terms = {core::FTerm::power(m * m, 2.0), core::FTerm::power(alpha, 4.0),
               core::FTerm::power(beta_sq, 6.0)};
    return g;
  }
  double integration_constant() const { return 0.0; }

  // Pole where exp(-2 m eta + C) = alpha/2; the density is positive only to
  // the left of it.
  ValidityDomain domain() const {
    if (alpha <= 0.0) return ValidityDomain::whole_line();
    const double pole = (C - std::log(0.5 * alpha)) / (2.0 * m);
    return {{{-kInf, pole}}, {pole}};
  }

  Decay decay() const { return {true, false}; }
};

// rho = (m/b) / (exp(2 m eta + C) + n), the occupation profile of the
// reduced spinor density equation rho' = 2 n b rho^2 - 2 m rho. n = 1, -1, 0
// give the Fermi-Dirac, Bose-Einstein and Maxwell-Boltzmann shapes. The
// stored value IS the density.
struct QuantumRho {
  double m = 1.0;  // > 0
  double b = 1.0;  // != 0
  int n_stat = 1;  // 1, -1 or 0
  double C = 0.0;

  Eval eval_at(double eta) const {
    const double E = std::exp(2.0 * m * eta + C);
    const double n = static_cast<double>(n_stat);
    const double den = E + n;
    Eval e;
    e.value = (m / b) / den;
    e.d1 = -2.0 * m * m / b * E / (den * den);
    e.d2 = 4.0 * m * m * m / b * E * (E - n) / (den * den * den);
    return e;
  }

  core::EquationSpec equation() const { return core::DiracReduced{m, b, n_stat}; }

  ValidityDomain domain() const {
    if (n_stat >= 0) return ValidityDomain::whole_line();
    // exp(2 m eta + C) = 1 at eta = -C/(2m); the density is positive to the
    // right of it.
    const double pole = -C / (2.0 * m);
    return {{{pole, kInf}}, {pole}};
  }

  Decay decay() const {
    // At +inf the exponential dominates for every n; at -inf the limit is
    // m/b (n = 1), a pole-bounded domain (n = -1) or divergence (n = 0).
    return {false, true};
  }
};

using ClosedFormSolution =
    std::variant<RationalBell, GaussBell, PowerBell, ExpProfile, Logistic,
                 SechPulse, TanhKink, SGKink, BEProfileSq, QuantumRho>;

// ---------------------------------------------------------------------------
// Variant-level operations
// ---------------------------------------------------------------------------

inline std::string variant_name(const ClosedFormSolution& sol) {
  struct V {
    std::string operator()(const RationalBell&) const { return "rational_bell"; }
    std::string operator()(const GaussBell&) const { return "gauss_bell"; }
    std::string operator()(const PowerBell&) const { return "power_bell"; }
    std::string operator()(const ExpProfile&) const { return "exp_profile"; }
    std::string operator()(const Logistic&) const { return "logistic"; }
    std::string operator()(const SechPulse&) const { return "sech_pulse"; }
    std::string operator()(const TanhKink&) const { return "tanh_kink"; }
    std::string operator()(const SGKink&) const { return "sg_kink"; }
    std::string operator()(const BEProfileSq&) const { return "be_profile_sq"; }
    std::string operator()(const QuantumRho&) const { return "quantum_rho"; }
  };
  return std::visit(V{}, sol);
}

inline ValidityDomain domain(const ClosedFormSolution& sol) {
  return std::visit([](const auto& s) { return s.domain(); }, sol);
}

inline Decay asymptotic_decay(const ClosedFormSolution& sol) {
  return std::visit([](const auto& s) { return s.decay(); }, sol);
}

inline core::EquationSpec equation_of(const ClosedFormSolution& sol) {
  return std::visit([](const auto& s) { return s.equation(); }, sol);
}

// True when the stored value is a probability density rho rather than a
// field amplitude phi.
inline bool is_density(const ClosedFormSolution& sol) {
  return std::holds_alternative<BEProfileSq>(sol) ||
         std::holds_alternative<QuantumRho>(sol);
}

// Analytic value and derivatives; eta must lie inside the validity domain.
inline Eval eval(const ClosedFormSolution& sol, double eta) {
  const ValidityDomain dom = domain(sol);
  if (!dom.contains(eta)) {
    std::ostringstream msg;
    msg << variant_name(sol) << ": eta = " << eta << " outside the validity domain";
    const double s = dom.nearest_singularity(eta);
    if (std::isfinite(s)) msg << " (nearest singularity at eta = " << s << ")";
    throw domain_error(msg.str());
  }
  return std::visit([eta](const auto& s) { return s.eval_at(eta); }, sol);
}

inline double value(const ClosedFormSolution& sol, double eta) {
  return eval(sol, eta).value;
}

// The first-order relation the entry's stored value satisfies:
// (value')^2 = value^{2a} [G(value) + C]. Field entries inherit it from
// their equation; the density entries satisfy their own quadratic relation
// obtained by squaring the density equation.
inline core::FirstIntegral first_integral_of(const ClosedFormSolution& sol) {
  using FI = core::FirstIntegral;
  if (const auto* be = std::get_if<BEProfileSq>(&sol)) {
    // (v')^2 = v^2 (2 m + (alpha/2m) v)^2
    FI fi;
    fi.a = 1.0;
    fi.C = 4.0 * be->m * be->m;
    fi.terms = {{2.0 * be->alpha, FI::Kind::kPower, 1.0},
                {be->alpha * be->alpha / (4.0 * be->m * be->m), FI::Kind::kPower, 2.0}};
    return fi;
  }
  if (const auto* qr = std::get_if<QuantumRho>(&sol)) {
    // (rho')^2 = rho^2 (2 n b rho - 2 m)^2
    const double n = static_cast<double>(qr->n_stat);
    FI fi;
    fi.a = 1.0;
    fi.C = 4.0 * qr->m * qr->m;
    fi.terms = {{-8.0 * qr->m * n * qr->b, FI::Kind::kPower, 1.0},
                {4.0 * n * n * qr->b * qr->b, FI::Kind::kPower, 2.0}};
    return fi;
  }
  const double C = std::visit(
      [](const auto& s) -> double {
        if constexpr (requires { s.integration_constant(); }) {
          return s.integration_constant();
        } else {
          return 0.0;
        }
      },
      sol);
  return core::first_integral(equation_of(sol), C);
}

// ---------------------------------------------------------------------------
// Matching equations to entries
// ---------------------------------------------------------------------------

namespace detail {

inline bool near(double x, double y, double tol = 1e-12) {
  return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

// Coefficient of the unique power term with the given exponent, if the term
// list consists exactly of the listed exponents.
inline std::optional<std::vector<double>> match_powers(
    const std::vector<core::FTerm>& terms, const std::vector<double>& exponents) {
  if (terms.size() != exponents.size()) return std::nullopt;
  std::vector<double> coefs(exponents.size(), 0.0);
  std::vector<bool> used(terms.size(), false);
  for (std::size_t e = 0; e < exponents.size(); ++e) {
    bool found = false;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (used[i] || !terms[i].is_power()) continue;
      if (near(terms[i].exponent(), exponents[e])) {
        coefs[e] = terms[i].coef;
        used[i] = true;
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  return coefs;
}

}  // namespace detail

// Finds the catalog entry solving `spec` with first-integral constant C1 and
// translation constant C2. Throws catalog_miss when no pattern applies and
// constant_mismatch when a pattern matches structurally but C1 is
// incompatible with the closed form.
inline ClosedFormSolution solve_catalog(const core::EquationSpec& spec,
                                        double C1, double C2) {
  using detail::near;
  core::validate(spec);

  if (const auto* d = std::get_if<core::DiracReduced>(&spec)) {
    // Both constants shift the same translational degree of freedom.
    return QuantumRho{d->m, d->b, d->n_stat, C1 + 2.0 * d->m * C2};
  }

  if (const auto* p = std::get_if<core::PowerLaw>(&spec)) {
    if (p->b == 0.0 && near(p->a, 1.0)) {
      if (C1 < 0.0) {
        throw constant_mismatch("exp_profile requires C1 >= 0 (slope^2 = C1 phi^2)");
      }
      const double c = std::sqrt(C1);
      return ExpProfile{std::exp(-c * C2), c};
    }
    if (near(p->a, 2.0) && near(p->n, 2.0) && p->b != 0.0) {
      return RationalBell{p->b, C1, C2};
    }
    if (near(p->a, 1.0) && near(p->n, 1.0) && p->b != 0.0) {
      return GaussBell{p->b, C1, C2};
    }
    if (near(p->a, p->n) && p->a > 1.0 && p->a < 3.0 && p->b > 0.0) {
      const double nu = (3.0 - p->a) / (p->a - 1.0);
      return PowerBell{nu, p->b, C1, C2};
    }
    throw catalog_miss("no closed form catalogued for " + core::describe(spec));
  }

  const auto& g = std::get<core::GeneralF>(spec);

  // Sine-Gordon: a = 0, F = phi sin(phi)
  if (g.terms.size() == 1 && !g.terms[0].is_power() && near(g.a, 0.0)) {
    if (!near(g.terms[0].coef, 1.0)) {
      throw catalog_miss("phi*sin(phi) entry is catalogued at unit coefficient only");
    }
    if (!near(C1, 2.0)) {
      throw constant_mismatch("sg_kink requires C1 = 2");
    }
    return SGKink{C2};
  }

  if (near(g.a, 1.0)) {
    if (auto c = detail::match_powers(g.terms, {4.0, 3.0})) {
      const double f = (*c)[0];
      const double b = -2.0 * (*c)[1];
      if (f > 0.0 && b != 0.0) {
        if (!near(C1, b * b / (4.0 * f))) {
          throw constant_mismatch("logistic requires C1 = b^2/(4f)");
        }
        return Logistic{f, b, C2};
      }
    }
  }

  if (near(g.a, 0.0)) {
    if (auto c = detail::match_powers(g.terms, {2.0, 4.0})) {
      const double f = (*c)[0];
      const double b = -(*c)[1];
      if (f > 0.0 && b > 0.0) {
        if (!near(C1, 0.0, 1e-12) && std::abs(C1) > 1e-12) {
          throw constant_mismatch("sech_pulse requires C1 = 0");
        }
        return SechPulse{f, b, std::sqrt(f) * C2};
      }
      if (f < 0.0 && b < 0.0) {
        if (!near(C1, -f * f / (2.0 * b))) {
          throw constant_mismatch("tanh_kink requires C1 = -f^2/(2b)");
        }
        return TanhKink{f, b, std::sqrt(-f / 2.0) * C2};
      }
    }
    if (auto c = detail::match_powers(g.terms, {2.0, 4.0, 6.0})) {
      const double m_sq = (*c)[0];
      const double alpha = (*c)[1];
      const double beta_sq = (*c)[2];
      if (m_sq > 0.0) {
        const double m = std::sqrt(m_sq);
        if (!near(beta_sq, 3.0 * alpha * alpha / (16.0 * m_sq))) {
          throw constant_mismatch(
              "be_profile_sq requires the sextic coefficient 3 alpha^2/(16 m^2)");
        }
        if (!near(C1, 0.0, 1e-12) && std::abs(C1) > 1e-12) {
          throw constant_mismatch("be_profile_sq requires C1 = 0");
        }
        return BEProfileSq{m, alpha, -2.0 * m * C2};
      }
    }
  }

  throw catalog_miss("no closed form catalogued for " + core::describe(spec));
}

// The ten entries at their canonical parameters; used by the CLI listing and
// the soundness checks.
inline std::vector<ClosedFormSolution> canonical_entries() {
  const double pi = numkit::kPi;
  // Student-t(3) parameters through the distribution normalizer
  // D = Gamma((nu+1)/2) / (sqrt(nu pi) Gamma(nu/2)).
  const double nu = 3.0;
  const double log_D = numkit::log_gamma(0.5 * (nu + 1.0)) -
                       numkit::log_gamma(0.5 * nu) - 0.5 * std::log(nu * pi);
  const double t_b = (nu + 1.0) / nu * std::exp(-2.0 / (nu + 1.0) * log_D);
  const double t_C1 =
      -(nu + 1.0) * (nu + 1.0) / nu * std::exp(-4.0 / (nu + 1.0) * log_D);
  return {
      RationalBell{2.0 * pi, -4.0 * pi * pi, 0.0},  // standard Cauchy
      GaussBell{1.0, -std::log(2.0 * pi), 0.0},     // standard normal
      PowerBell{nu, t_b, t_C1, 0.0},                // Student-t(3)
      ExpProfile{1.0, 1.0},
      Logistic{1.0, 1.0, 0.0},
      SechPulse{1.0, 2.0, 0.0},
      TanhKink{-1.0, -1.0, 0.0},
      SGKink{0.0},
      BEProfileSq{1.0, 2.0, 0.0},
      QuantumRho{1.0, 1.0, 1, 0.0},
  };
}

}  // namespace solistat::catalog
