#pragma once

// The quasilinear soliton-equation family
//
//     phi (phi_xx - phi_tt) - a (phi_x^2 - phi_t^2) = F(phi)
//
// with the power-law member F(phi) = -b phi^{n+1}, its traveling-wave
// reduction phi phi'' - a (phi')^2 = F(phi), first integrals
// (phi')^2 = phi^{2a} [G(phi) + C], the power substitution phi = y^p that
// maps the family onto itself, and relativistic velocity composition. Also
// the reduced scalar-density equation rho' = 2 n b rho^2 - 2 m rho obtained
// from the cubic-nonlinear spinor equation with n in {1, -1, 0}.

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "solistat/errors.hpp"

namespace solistat::core {

// ---------------------------------------------------------------------------
// Equation descriptions
// ---------------------------------------------------------------------------

// One additive term of the nonlinearity F(phi): either coef * phi^exponent
// or coef * phi * sin(phi).
struct FTerm {
  struct Power {
    double exponent = 0.0;
  };
  struct PhiSinPhi {};

  double coef = 0.0;
  std::variant<Power, PhiSinPhi> kind = Power{};

  static FTerm power(double coef, double exponent) { return {coef, Power{exponent}}; }
  static FTerm phi_sin_phi(double coef) { return {coef, PhiSinPhi{}}; }

  bool is_power() const { return std::holds_alternative<Power>(kind); }
  double exponent() const { return std::get<Power>(kind).exponent; }

  double eval(double phi) const {
    if (is_power()) return coef * pow_fast(phi, exponent());
    return coef * phi * std::sin(phi);
  }
  // F/phi evaluated analytically from the term, defined through phi = 0
  // whenever the exponent allows; used by the semilinear field update.
  double eval_over_phi(double phi) const {
    if (is_power()) return coef * pow_fast(phi, exponent() - 1.0);
    return coef * std::sin(phi);
  }

  // Small integer exponents dominate the field updates; spare them the
  // libm pow call.
  static double pow_fast(double x, double e) {
    if (e == std::floor(e) && std::abs(e) <= 8.0) {
      double r = 1.0;
      const int k = static_cast<int>(std::abs(e));
      for (int i = 0; i < k; ++i) r *= x;
      return e < 0.0 ? 1.0 / r : r;
    }
    return std::pow(x, e);
  }
};

// phi (phi_xx - phi_tt) - a (phi_x^2 - phi_t^2) + b phi^{n+1} = 0
struct PowerLaw {
  double a = 0.0;
  double b = 0.0;
  double n = 0.0;
};

// phi (phi_xx - phi_tt) - a (phi_x^2 - phi_t^2) = F(phi)
struct GeneralF {
  double a = 0.0;
  std::vector<FTerm> terms;
};

// Scalar-density reduction of the cubic-nonlinear spinor equation:
// rho' = 2 n b rho^2 - 2 m rho with n in {1, -1, 0}.
struct DiracReduced {
  double m = 1.0;      // > 0
  double b = 1.0;      // != 0
  int n_stat = 1;      // 1, -1 or 0
};

using EquationSpec = std::variant<PowerLaw, GeneralF, DiracReduced>;

inline void validate(const PowerLaw& s) {
  if (!std::isfinite(s.a) || !std::isfinite(s.b) || !std::isfinite(s.n)) {
    throw domain_error("PowerLaw: parameters must be finite");
  }
}

inline void validate(const GeneralF& s) {
  if (!std::isfinite(s.a)) throw domain_error("GeneralF: a must be finite");
  for (const FTerm& t : s.terms) {
    if (!std::isfinite(t.coef) || (t.is_power() && !std::isfinite(t.exponent()))) {
      throw domain_error("GeneralF: term parameters must be finite");
    }
  }
}

inline void validate(const DiracReduced& s) {
  if (!(s.m > 0.0) || !std::isfinite(s.m)) throw domain_error("DiracReduced: requires m > 0");
  if (s.b == 0.0 || !std::isfinite(s.b)) throw domain_error("DiracReduced: requires b != 0");
  if (s.n_stat != 1 && s.n_stat != -1 && s.n_stat != 0) {
    throw domain_error("DiracReduced: n_stat must be 1, -1 or 0");
  }
}

inline void validate(const EquationSpec& spec) {
  std::visit([](const auto& s) { validate(s); }, spec);
}

// Lowers a power-law spec to the general form: F(phi) = -b phi^{n+1}.
inline GeneralF canonicalize(const PowerLaw& s) {
  validate(s);
  GeneralF g;
  g.a = s.a;
  if (s.b != 0.0) g.terms.push_back(FTerm::power(-s.b, s.n + 1.0));
  return g;
}

inline GeneralF canonicalize(const EquationSpec& spec) {
  if (const auto* p = std::get_if<PowerLaw>(&spec)) return canonicalize(*p);
  if (const auto* g = std::get_if<GeneralF>(&spec)) {
    validate(*g);
    return *g;
  }
  throw domain_error("canonicalize: spec has no field-equation form");
}

// F(phi) for the PDE/profile forms.
inline double eval_F(const GeneralF& g, double phi) {
  double acc = 0.0;
  for (const FTerm& t : g.terms) acc += t.eval(phi);
  return acc;
}

inline double eval_F(const EquationSpec& spec, double phi) {
  return eval_F(canonicalize(spec), phi);
}

// F(phi)/phi expanded term by term (finite at phi = 0 when all exponents
// are >= 1).
inline double eval_F_over_phi(const GeneralF& g, double phi) {
  double acc = 0.0;
  for (const FTerm& t : g.terms) acc += t.eval_over_phi(phi);
  return acc;
}

inline double quasilinear_exponent(const EquationSpec& spec) {
  if (const auto* p = std::get_if<PowerLaw>(&spec)) return p->a;
  if (const auto* g = std::get_if<GeneralF>(&spec)) return g->a;
  throw domain_error("spec has no field-equation form");
}

inline std::string describe(const EquationSpec& spec) {
  std::ostringstream out;
  if (const auto* p = std::get_if<PowerLaw>(&spec)) {
    out << "power_law{a=" << p->a << ", b=" << p->b << ", n=" << p->n << "}";
  } else if (const auto* g = std::get_if<GeneralF>(&spec)) {
    out << "general_f{a=" << g->a << ", F=";
    for (std::size_t i = 0; i < g->terms.size(); ++i) {
      if (i) out << " + ";
      const FTerm& t = g->terms[i];
      if (t.is_power()) {
        out << t.coef << "*phi^" << t.exponent();
      } else {
        out << t.coef << "*phi*sin(phi)";
      }
    }
    out << "}";
  } else {
    const auto& d = std::get<DiracReduced>(spec);
    out << "dirac_reduced{m=" << d.m << ", b=" << d.b << ", n_stat=" << d.n_stat << "}";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Traveling-wave reduction
// ---------------------------------------------------------------------------

// Co-moving frame at sub-luminal speed u (units with light speed 1). The
// wave coordinate is eta = (x - u t) / sqrt(1 - u^2).
struct WaveFrame {
  double u = 0.0;

  double gamma() const { return 1.0 / std::sqrt(1.0 - u * u); }
  double eta(double x, double t) const { return (x - u * t) * gamma(); }
};

inline void validate(const WaveFrame& f) {
  if (!(std::abs(f.u) < 1.0) || !std::isfinite(f.u)) {
    throw frame_error("WaveFrame: requires |u| < 1");
  }
}

// Profile equation phi phi'' - a (phi')^2 = F(phi). The factors (1 - u^2)
// cancel identically between phi_xx - phi_tt and phi_x^2 - phi_t^2, so the
// coefficients carry over from the spec unchanged for every admissible u.
struct TravelingWaveODE {
  EquationSpec spec;
  WaveFrame frame;
};

inline TravelingWaveODE reduce_to_ode(const EquationSpec& spec, const WaveFrame& frame) {
  validate(frame);
  if (std::holds_alternative<DiracReduced>(spec)) {
    throw domain_error("reduce_to_ode: spec has no second-order field form");
  }
  validate(spec);
  return {spec, frame};
}

// ---------------------------------------------------------------------------
// First integrals
// ---------------------------------------------------------------------------

// (phi')^2 = phi^{2a} [G(phi) + C] where G is the antiderivative of
// 2 F(phi) phi^{-1-2a}, stored term by term. A power term whose combined
// exponent hits -1 integrates to a log term; the phi*sin(phi) nonlinearity
// (a = 0 only) integrates to -2 cos(phi).
struct FirstIntegral {
  enum class Kind { kPower, kLogAbs, kCosPhi };
  struct Term {
    double coef = 0.0;
    Kind kind = Kind::kPower;
    double exponent = 0.0;  // kPower only
  };

  double a = 0.0;
  std::vector<Term> terms;
  double C = 0.0;

  double G(double phi) const {
    double acc = 0.0;
    for (const Term& t : terms) {
      switch (t.kind) {
        case Kind::kPower: acc += t.coef * std::pow(phi, t.exponent); break;
        case Kind::kLogAbs: acc += t.coef * std::log(std::abs(phi)); break;
        case Kind::kCosPhi: acc += t.coef * std::cos(phi); break;
      }
    }
    return acc;
  }

  // Sum of |term| magnitudes of G(phi) + C before cancellation; the natural
  // scale for relative residuals of the first-integral relation.
  double magnitude(double phi) const {
    double acc = std::abs(C);
    for (const Term& t : terms) {
      switch (t.kind) {
        case Kind::kPower: acc += std::abs(t.coef * std::pow(phi, t.exponent)); break;
        case Kind::kLogAbs: acc += std::abs(t.coef * std::log(std::abs(phi))); break;
        case Kind::kCosPhi: acc += std::abs(t.coef * std::cos(phi)); break;
      }
    }
    return acc;
  }

  // phi^{2a} (G(phi) + C), the square of the profile slope.
  double slope_squared(double phi) const {
    return std::pow(phi, 2.0 * a) * (G(phi) + C);
  }
};

inline FirstIntegral first_integral(const EquationSpec& spec, double C) {
  const GeneralF g = canonicalize(spec);
  FirstIntegral fi;
  fi.a = g.a;
  fi.C = C;
  for (const FTerm& t : g.terms) {
    if (!t.is_power()) {
      if (g.a != 0.0) {
        throw unsupported_form_error(
            "first_integral: phi*sin(phi) nonlinearity requires a = 0");
      }
      // integral of 2 sin(phi) d phi
      fi.terms.push_back({-2.0 * t.coef, FirstIntegral::Kind::kCosPhi, 0.0});
      continue;
    }
    // term 2 coef phi^{e - 1 - 2a}
    const double p = t.exponent() - 1.0 - 2.0 * g.a;
    if (p == -1.0) {
      fi.terms.push_back({2.0 * t.coef, FirstIntegral::Kind::kLogAbs, 0.0});
    } else {
      fi.terms.push_back({2.0 * t.coef / (p + 1.0), FirstIntegral::Kind::kPower, p + 1.0});
    }
  }
  return fi;
}

// ---------------------------------------------------------------------------
// Power transform and velocity composition
// ---------------------------------------------------------------------------

// The substitution phi = y^p maps the power-law family onto itself:
// a' = a p - p + 1, b' = b / p, n' = p (n - 1) + 1. Profiles transform as
// y = phi^{1/p}.
inline PowerLaw p_transform(const EquationSpec& spec, double p) {
  const auto* pl = std::get_if<PowerLaw>(&spec);
  if (pl == nullptr) {
    throw domain_error("p_transform: defined for the power-law family only");
  }
  if (p == 0.0 || !std::isfinite(p)) {
    throw domain_error("p_transform: requires finite p != 0");
  }
  validate(*pl);
  PowerLaw out;
  out.a = pl->a * p - p + 1.0;
  out.b = pl->b / p;
  out.n = p * (pl->n - 1.0) + 1.0;
  return out;
}

// Relativistic velocity addition (u + w) / (1 + u w); closed on (-1, 1).
inline double boost_compose(double u, double w) {
  if (!(std::abs(u) < 1.0) || !(std::abs(w) < 1.0)) {
    throw frame_error("boost_compose: requires |u| < 1 and |w| < 1");
  }
  return (u + w) / (1.0 + u * w);
}

// Density equation rho' = 2 n b rho^2 - 2 m rho for the reduced spinor
// family; n = 0 degenerates to pure exponential decay.
inline std::function<double(double, double)> dirac_rho_ode(const DiracReduced& spec) {
  validate(spec);
  const double m = spec.m;
  const double b = spec.b;
  const double n = static_cast<double>(spec.n_stat);
  return [m, b, n](double /*eta*/, double rho) {
    return 2.0 * n * b * rho * rho - 2.0 * m * rho;
  };
}

}  // namespace solistat::core
