#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <variant>
#include <vector>

#include "solistat/catalog.hpp"
#include "solistat/numkit.hpp"

using namespace solistat;
using namespace solistat::catalog;

namespace {
constexpr double kPi = numkit::kPi;

// Stencil-consistency oracle for the analytic derivatives. The centered
// stencil S(h) converges to the true derivative at order 2, so its
// Richardson combination (4 S(h/2) - S(h))/3 must land much closer to the
// analytic value than S(h) itself; a wrong analytic formula leaves both at
// the same distance. Points where the stencil already sits at the roundoff
// floor are accepted as-is.
void check_derivative_consistency(const ClosedFormSolution& sol, double eta,
                                  double h = 1e-2) {
  constexpr double kEps = 2.22e-16;
  auto f = [&sol](double e) { return value(sol, e); };
  const Eval an = eval(sol, eta);

  // second derivative
  {
    const double s1 = numkit::fd_second_derivative(f, eta, h);
    const double s2 = numkit::fd_second_derivative(f, eta, 0.5 * h);
    const double rich = (4.0 * s2 - s1) / 3.0;
    const double e1 = std::abs(s1 - an.d2);
    const double noise = 100.0 * kEps * std::abs(an.value) / (h * h);
    const double floor = std::max(1e-9 * (std::abs(an.d2) + 1.0), 10.0 * noise);
    if (e1 > floor) {
      CHECK(std::abs(rich - an.d2) <= 0.3 * e1);
    }
  }
  // first derivative
  {
    const double s1 = numkit::fd_first_derivative(f, eta, h);
    const double s2 = numkit::fd_first_derivative(f, eta, 0.5 * h);
    const double rich = (4.0 * s2 - s1) / 3.0;
    const double e1 = std::abs(s1 - an.d1);
    const double noise = 100.0 * kEps * std::abs(an.value) / h;
    const double floor = std::max(1e-9 * (std::abs(an.d1) + 1.0), 10.0 * noise);
    if (e1 > floor) {
      CHECK(std::abs(rich - an.d1) <= 0.3 * e1);
    }
  }
}
}  // namespace

TEST_CASE("every canonical entry has stencil-consistent analytic derivatives") {
  for (const ClosedFormSolution& sol : canonical_entries()) {
    INFO(variant_name(sol));
    const ValidityDomain dom = domain(sol);
    for (double eta : dom.uniform_grid(-3.0, 3.0, 7, 0.5)) {
      check_derivative_consistency(sol, eta);
    }
  }
}

TEST_CASE("centered stencils converge at order 2 to the analytic derivatives") {
  // Generic points, away from zeros of the fourth derivative.
  struct Probe {
    ClosedFormSolution sol;
    double eta;
  };
  const double pi = kPi;
  const std::vector<Probe> probes = {
      {RationalBell{2.0 * pi, -4.0 * pi * pi, 0.0}, 0.7},
      {GaussBell{1.0, 0.0, 0.0}, 0.3},
      {TanhKink{-1.0, -1.0, 0.0}, 0.9},
      {QuantumRho{1.0, 1.0, 1, 0.0}, 0.6},
  };
  for (const Probe& p : probes) {
    INFO(variant_name(p.sol));
    auto f = [&](double e) { return value(p.sol, e); };
    const Eval an = eval(p.sol, p.eta);
    const double h = 2e-2;
    const double e1 = std::abs(numkit::fd_second_derivative(f, p.eta, h) - an.d2);
    const double e2 = std::abs(numkit::fd_second_derivative(f, p.eta, 0.5 * h) - an.d2);
    const double order = std::log2(e1 / e2);
    CHECK(order > 1.8);
    CHECK(order < 2.2);
  }
}

TEST_CASE("rational bell at the standard Cauchy parameters") {
  const RationalBell bell{2.0 * kPi, -4.0 * kPi * kPi, 0.0};
  const Eval e = eval(ClosedFormSolution{bell}, 0.0);
  CHECK(e.value == Catch::Approx(1.0 / kPi).epsilon(1e-14));  // density at the mode
  CHECK(e.d1 == Catch::Approx(0.0).margin(1e-16));
  // even about eta = -C2
  const RationalBell shifted{2.0 * kPi, -4.0 * kPi * kPi, 1.5};
  for (double s : {0.3, 1.1, 2.7}) {
    CHECK(shifted.eval_at(-1.5 + s).value ==
          Catch::Approx(shifted.eval_at(-1.5 - s).value).epsilon(1e-12));
  }
}

TEST_CASE("gauss bell reduces to exp(-eta^2/2) at unit parameters") {
  const GaussBell bell{1.0, 0.0, 0.0};
  const Eval e = eval(ClosedFormSolution{bell}, 1.0);
  CHECK(e.value == Catch::Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(e.d1 == Catch::Approx(-std::exp(-0.5)).epsilon(1e-14));
  for (double s : {0.4, 2.0}) {
    CHECK(bell.eval_at(s).value == Catch::Approx(bell.eval_at(-s).value).epsilon(1e-13));
  }
}

TEST_CASE("power bell with nu = 1 coincides with the rational bell") {
  // Student-t with one degree of freedom IS the Cauchy density.
  const double D = 1.0 / kPi;
  const double b = 2.0 / D;             // (nu+1)/nu * D^{-2/(nu+1)} at nu = 1
  const double C1 = -4.0 / (D * D);     // -(1+nu)^2/nu * D^{-4/(nu+1)}
  const PowerBell pb{1.0, b, C1, 0.0};
  const RationalBell rb{2.0 * kPi, -4.0 * kPi * kPi, 0.0};
  for (double eta = -8.0; eta <= 8.0; eta += 0.37) {
    CHECK(pb.eval_at(eta).value ==
          Catch::Approx(rb.eval_at(eta).value).margin(1e-12));
  }
}

TEST_CASE("sech pulse basics") {
  const SechPulse pulse{1.0, 2.0, 0.0};
  const Eval e = eval(ClosedFormSolution{pulse}, 0.0);
  CHECK(e.value == Catch::Approx(1.0).epsilon(1e-15));  // sqrt(2f/b) = 1
  CHECK(e.d1 == Catch::Approx(0.0).margin(1e-16));
  // classical identity: phi'' = phi - 2 phi^3 for f=1, b=2
  for (double eta : {-1.3, 0.2, 2.0}) {
    const Eval q = pulse.eval_at(eta);
    CHECK(q.d2 == Catch::Approx(q.value - 2.0 * std::pow(q.value, 3.0)).margin(1e-12));
  }
}

TEST_CASE("sine-Gordon kink satisfies slope = 2 sin(phi/2)") {
  const SGKink kink{0.0};
  for (double eta : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
    const Eval e = kink.eval_at(eta);
    CHECK(e.d1 == Catch::Approx(2.0 * std::sin(0.5 * e.value)).margin(1e-12));
  }
}

TEST_CASE("validity domains locate poles analytically") {
  SECTION("rational bell with C1 > 0 has two poles and three intervals") {
    const RationalBell bell{1.0, 4.0, 0.0};  // poles at +-2
    const ValidityDomain dom = bell.domain();
    REQUIRE(dom.intervals.size() == 3);
    REQUIRE(dom.singularities.size() == 2);
    CHECK(dom.singularities[0] == Catch::Approx(-2.0));
    CHECK(dom.singularities[1] == Catch::Approx(2.0));
    CHECK(dom.contains(0.0));
    CHECK(dom.contains(5.0));
    CHECK_FALSE(dom.contains(2.0));
  }
  SECTION("Bose-Einstein density diverges where the exponential hits alpha/2") {
    const BEProfileSq be{1.0, 2.0, 0.0};
    const ValidityDomain dom = be.domain();
    REQUIRE(dom.singularities.size() == 1);
    CHECK(dom.singularities[0] == Catch::Approx(0.0));
    CHECK(dom.contains(-1.0));
    CHECK_FALSE(dom.contains(0.5));  // positive branch only
    CHECK_THROWS_AS(eval(ClosedFormSolution{be}, 0.5), domain_error);
  }
  SECTION("gauss bell never becomes singular") {
    CHECK(GaussBell{}.domain().intervals.size() == 1);
    CHECK(GaussBell{}.domain().contains(1e6));
  }
  SECTION("quantum BE occupation lives right of its pole") {
    const QuantumRho rho{1.0, 1.0, -1, 0.0};
    const ValidityDomain dom = rho.domain();
    REQUIRE(dom.singularities.size() == 1);
    CHECK(dom.singularities[0] == Catch::Approx(0.0));
    CHECK(dom.contains(2.0));
    CHECK_FALSE(dom.contains(-1.0));
  }
}

TEST_CASE("asymptotic decay per end") {
  CHECK(RationalBell{}.decay().left);
  CHECK(RationalBell{}.decay().right);
  const Decay tanh_ends = TanhKink{}.decay();
  CHECK_FALSE(tanh_ends.left);
  CHECK_FALSE(tanh_ends.right);
  const Decay fd = QuantumRho{1.0, 1.0, 1, 0.0}.decay();
  CHECK_FALSE(fd.left);   // limit m/b
  CHECK(fd.right);
  const Decay sg = SGKink{}.decay();
  CHECK(sg.left);
  CHECK_FALSE(sg.right);  // limit 2 pi
  const Decay ex = ExpProfile{1.0, 1.0}.decay();
  CHECK_FALSE(ex.left);
  CHECK(ex.right);
}

TEST_CASE("quantum occupation limits") {
  const QuantumRho fd{1.0, 2.0, 1, 0.0};
  CHECK(fd.eval_at(-20.0).value == Catch::Approx(0.5).epsilon(1e-8));  // m/b
  CHECK(fd.eval_at(20.0).value == Catch::Approx(0.0).margin(1e-15));
  const QuantumRho mb{1.0, 1.0, 0, 0.0};
  for (double eta : {-2.0, 0.0, 3.0}) {
    CHECK(mb.eval_at(eta).value == Catch::Approx(std::exp(-2.0 * eta)).epsilon(1e-13));
  }
}

TEST_CASE("solve_catalog matches the power-law patterns") {
  const double b = 2.0 * kPi;
  const auto cauchy =
      solve_catalog(core::PowerLaw{2.0, b, 2.0}, -4.0 * kPi * kPi, 0.0);
  REQUIRE(std::holds_alternative<RationalBell>(cauchy));
  CHECK(std::get<RationalBell>(cauchy).b == b);

  const auto gauss = solve_catalog(core::PowerLaw{1.0, 1.0, 1.0}, 0.0, -0.5);
  REQUIRE(std::holds_alternative<GaussBell>(gauss));
  CHECK(std::get<GaussBell>(gauss).C2 == -0.5);

  const auto student = solve_catalog(core::PowerLaw{1.5, 2.0, 1.5}, -3.0, 0.0);
  REQUIRE(std::holds_alternative<PowerBell>(student));
  CHECK(std::get<PowerBell>(student).nu == Catch::Approx(3.0));

  const auto expo = solve_catalog(core::PowerLaw{1.0, 0.0, 1.0}, 4.0, 0.0);
  REQUIRE(std::holds_alternative<ExpProfile>(expo));
  CHECK(std::get<ExpProfile>(expo).c == Catch::Approx(2.0));
}

TEST_CASE("solve_catalog matches the general-F patterns") {
  core::GeneralF logistic;
  logistic.a = 1.0;
  logistic.terms = {core::FTerm::power(1.0, 4.0), core::FTerm::power(-0.5, 3.0)};
  const auto fd = solve_catalog(logistic, 0.25, 0.0);  // C1 = b^2/(4f) = 1/4
  REQUIRE(std::holds_alternative<Logistic>(fd));
  CHECK(std::get<Logistic>(fd).b == Catch::Approx(1.0));

  core::GeneralF quartic;
  quartic.a = 0.0;
  quartic.terms = {core::FTerm::power(1.0, 2.0), core::FTerm::power(-2.0, 4.0)};
  REQUIRE(std::holds_alternative<SechPulse>(solve_catalog(quartic, 0.0, 0.0)));

  core::GeneralF kink;
  kink.a = 0.0;
  kink.terms = {core::FTerm::power(-1.0, 2.0), core::FTerm::power(1.0, 4.0)};
  REQUIRE(std::holds_alternative<TanhKink>(
      solve_catalog(kink, 0.5, 0.0)));  // C1 = -f^2/(2b) = 1/2

  core::GeneralF sine_gordon;
  sine_gordon.a = 0.0;
  sine_gordon.terms = {core::FTerm::phi_sin_phi(1.0)};
  REQUIRE(std::holds_alternative<SGKink>(solve_catalog(sine_gordon, 2.0, 0.3)));

  core::GeneralF quintic;
  quintic.a = 0.0;
  quintic.terms = {core::FTerm::power(1.0, 2.0), core::FTerm::power(2.0, 4.0),
                   core::FTerm::power(0.75, 6.0)};  // beta^2 = 3 alpha^2/(16 m^2)
  REQUIRE(std::holds_alternative<BEProfileSq>(solve_catalog(quintic, 0.0, 0.0)));
}

TEST_CASE("solve_catalog maps the density family with the consistent amplitude") {
  const auto rho = solve_catalog(core::DiracReduced{1.0, 1.0, 1}, 0.0, 0.0);
  REQUIRE(std::holds_alternative<QuantumRho>(rho));
  CHECK(std::get<QuantumRho>(rho).m == 1.0);
  CHECK(std::get<QuantumRho>(rho).b == 1.0);
  // only the amplitude m/b annihilates the density-equation residual
  const QuantumRho& q = std::get<QuantumRho>(rho);
  for (double eta : {-2.0, 0.0, 1.5}) {
    const Eval e = q.eval_at(eta);
    const double residual = e.d1 - (2.0 * e.value * e.value - 2.0 * e.value);
    CHECK(std::abs(residual) < 1e-14);
  }
}

TEST_CASE("solve_catalog misses and constant mismatches") {
  CHECK_THROWS_AS(solve_catalog(core::PowerLaw{3.0, 1.0, 7.0}, 1.0, 0.0),
                  catalog_miss);
  core::GeneralF logistic;
  logistic.a = 1.0;
  logistic.terms = {core::FTerm::power(1.0, 4.0), core::FTerm::power(-0.5, 3.0)};
  CHECK_THROWS_AS(solve_catalog(logistic, 0.1, 0.0), constant_mismatch);
  core::GeneralF sine_gordon;
  sine_gordon.a = 0.0;
  sine_gordon.terms = {core::FTerm::phi_sin_phi(1.0)};
  CHECK_THROWS_AS(solve_catalog(sine_gordon, 1.0, 0.0), constant_mismatch);
}

TEST_CASE("eval outside the validity domain names the nearest singularity") {
  const RationalBell bell{1.0, 4.0, 0.0};  // poles at +-2
  try {
    eval(ClosedFormSolution{bell}, 2.0);
    FAIL("expected domain_error");
  } catch (const domain_error& e) {
    CHECK(std::string(e.what()).find("singularity") != std::string::npos);
  }
}

TEST_CASE("uniform grids respect clearance and multi-interval domains") {
  const RationalBell bell{1.0, 4.0, 0.0};  // poles at +-2
  const auto grid = bell.domain().uniform_grid(-10.0, 10.0, 400, 1e-3);
  CHECK(grid.size() >= 390);
  for (double eta : grid) {
    CHECK(std::abs(eta - 2.0) >= 1e-3 * 0.999);
    CHECK(std::abs(eta + 2.0) >= 1e-3 * 0.999);
    CHECK(eta >= -10.0);
    CHECK(eta <= 10.0);
  }
}
