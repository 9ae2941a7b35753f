#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <variant>
#include <vector>

#include "solistat/distbridge.hpp"

using namespace solistat;
using namespace solistat::dist;

namespace {
constexpr double kPi = numkit::kPi;

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}
}  // namespace

TEST_CASE("pdf values at textbook landmarks") {
  CHECK(pdf(Cauchy{0.0, 1.0}, 0.0) == Catch::Approx(1.0 / kPi).epsilon(1e-15));
  CHECK(pdf(Normal{0.0, 1.0}, 0.0) ==
        Catch::Approx(0.39894228040143268).epsilon(1e-15));
  // Student-t with nu = 1 is the Cauchy density
  for (double x : {-3.0, -0.5, 0.0, 1.0, 7.0}) {
    CHECK(pdf(StudentT{1.0}, x) == Catch::Approx(pdf(Cauchy{0.0, 1.0}, x)).margin(1e-15));
  }
  CHECK(pdf(Exponential{2.0}, 0.0) == 2.0);
  CHECK_THROWS_AS(pdf(Exponential{2.0}, -0.1), domain_error);
}

TEST_CASE("pdf is nonnegative and finite on its support") {
  const std::vector<DistributionSpec> dists = {
      Cauchy{0.3, 2.0}, Normal{-1.0, 0.7}, StudentT{4.5},
      FermiDirac{1.0, 2.0}, MaxwellBoltzmann{0.5, 1.5}};
  for (const auto& d : dists) {
    for (double x : linspace(-8.0, 8.0, 81)) {
      const double v = pdf(d, x);
      CHECK(v >= 0.0);
      CHECK(std::isfinite(v));
    }
  }
}

TEST_CASE("Cauchy map reproduces the catalogued constants") {
  const SolitonMap m = to_soliton(Cauchy{0.0, 1.0});
  const auto& p = std::get<core::PowerLaw>(m.spec);
  CHECK(p.a == 2.0);
  CHECK(p.n == 2.0);
  CHECK(p.b == Catch::Approx(2.0 * kPi).epsilon(1e-15));
  CHECK(m.C1 == Catch::Approx(-4.0 * kPi * kPi).epsilon(1e-15));
  CHECK(m.C2 == 0.0);
}

TEST_CASE("Normal map ships the pointwise-consistent constant") {
  const SolitonMap m = to_soliton(Normal{0.0, 1.0});
  // exp(C1/(2b)) must equal the density peak 1/sqrt(2 pi)
  CHECK(m.C1 == Catch::Approx(-std::log(2.0 * kPi)).epsilon(1e-14));
  const SolitonMap printed = to_soliton(Normal{0.0, 1.0}, /*paper_constants=*/true);
  CHECK(printed.C1 == Catch::Approx(-0.5 * std::log(2.0 * kPi)).epsilon(1e-14));
}

TEST_CASE("round trips: mapped profiles equal their densities pointwise") {
  const auto grid = linspace(-20.0, 20.0, 1001);
  const std::vector<DistributionSpec> dists = {
      Cauchy{0.0, 1.0}, Normal{0.0, 1.0}, StudentT{1.0}, StudentT{3.0}, StudentT{5.0}};
  for (const auto& d : dists) {
    INFO(name_of(d));
    const auto sol = to_solution(d);
    const EquivalenceReport rep = equivalence_report(d, sol, grid, 1e-12);
    CHECK(rep.pass);
    CHECK(rep.max_abs_diff < 1e-12);
  }
}

TEST_CASE("round trips with shifted and scaled parameters") {
  const auto grid = linspace(-15.0, 15.0, 501);
  const std::vector<DistributionSpec> dists = {Cauchy{1.5, 0.8}, Normal{-2.0, 1.7}};
  for (const auto& d : dists) {
    INFO(name_of(d));
    const auto sol = to_solution(d);
    const EquivalenceReport rep = equivalence_report(d, sol, grid, 1e-12);
    CHECK(rep.pass);
  }
}

TEST_CASE("the printed normal constant misses the peak by 0.23") {
  const Normal n{0.0, 1.0};
  const auto sol = to_solution(n, /*paper_constants=*/true);
  const EquivalenceReport rep =
      equivalence_report(n, sol, linspace(-20.0, 20.0, 1001), 1e-12);
  CHECK_FALSE(rep.pass);
  // |1/sqrt(2 pi) - (2 pi)^{-1/4}| at the peak
  CHECK(rep.max_abs_diff == Catch::Approx(0.23267649734463202).margin(1e-3));
  CHECK(std::abs(rep.argmax_eta) < 1e-9);
}

TEST_CASE("Student-t(1) map evaluates pointwise equal to the Cauchy map") {
  const auto t1 = to_solution(StudentT{1.0});
  const auto cauchy = to_solution(Cauchy{0.0, 1.0});
  for (double x : linspace(-20.0, 20.0, 401)) {
    CHECK(catalog::value(t1, x) == Catch::Approx(catalog::value(cauchy, x)).margin(1e-12));
  }
}

TEST_CASE("Student-t approaches the standard normal as nu grows") {
  double max_diff = 0.0;
  for (double x : linspace(-5.0, 5.0, 201)) {
    max_diff = std::max(max_diff,
                        std::abs(pdf(StudentT{200.0}, x) - pdf(Normal{0.0, 1.0}, x)));
  }
  CHECK(max_diff < 2e-3);
}

TEST_CASE("exponential map places the amplitude at c") {
  const auto sol = to_solution(Exponential{2.0});
  REQUIRE(std::holds_alternative<catalog::ExpProfile>(sol));
  const auto& e = std::get<catalog::ExpProfile>(sol);
  CHECK(e.c == Catch::Approx(2.0).epsilon(1e-14));
  CHECK(e.C0 == Catch::Approx(2.0).epsilon(1e-12));
  for (double x : {0.0, 0.3, 1.0, 4.0}) {
    CHECK(catalog::value(sol, x) == Catch::Approx(pdf(Exponential{2.0}, x)).epsilon(1e-12));
  }
}

TEST_CASE("occupation maps select the right statistics index") {
  const SolitonMap fd = to_soliton(FermiDirac{1.0, 2.0});
  CHECK(std::get<core::DiracReduced>(fd.spec).n_stat == 1);
  const SolitonMap be = to_soliton(BoseEinstein{1.0, 2.0});
  CHECK(std::get<core::DiracReduced>(be.spec).n_stat == -1);
  const SolitonMap mb = to_soliton(MaxwellBoltzmann{1.0, 4.0});
  const auto& d = std::get<core::DiracReduced>(mb.spec);
  CHECK(d.n_stat == 0);
  CHECK(d.b == Catch::Approx(0.25));  // amplitude m/b = 4
  const auto sol = to_solution(MaxwellBoltzmann{1.0, 4.0});
  CHECK(catalog::value(sol, 0.0) == Catch::Approx(4.0));
}

TEST_CASE("occupation profile limits match the analytic expectations") {
  const auto fd = to_solution(FermiDirac{1.0, 2.0});
  const catalog::Decay d = catalog::asymptotic_decay(fd);
  CHECK_FALSE(d.left);
  CHECK(d.right);
  CHECK(catalog::value(fd, -30.0) == Catch::Approx(0.5).epsilon(1e-10));
  const auto be = to_solution(BoseEinstein{1.0, 1.0});
  CHECK(catalog::domain(be).singularities.size() == 1);
  const auto mb = to_solution(MaxwellBoltzmann{1.0, 1.0});
  for (double x : {-1.0, 0.5, 2.0}) {
    CHECK(catalog::value(mb, x) == Catch::Approx(std::exp(-2.0 * x)).epsilon(1e-12));
  }
}

TEST_CASE("normalization of integrable profiles is 1") {
  for (const DistributionSpec& d :
       {DistributionSpec{Cauchy{0.0, 1.0}}, DistributionSpec{Normal{0.0, 1.0}},
        DistributionSpec{StudentT{5.0}}}) {
    INFO(name_of(d));
    const auto sol = to_solution(d);
    const NormalizationResult r = normalization(sol);
    REQUIRE_FALSE(r.divergent);
    CHECK(r.value == Catch::Approx(1.0).margin(1e-6));
  }
  const NormalizationResult exp_mass = normalization(to_solution(Exponential{1.7}));
  REQUIRE_FALSE(exp_mass.divergent);
  CHECK(exp_mass.value == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("normalization reports divergence instead of a number") {
  // Bose-Einstein occupation has a non-integrable pole.
  const NormalizationResult be = normalization(to_solution(BoseEinstein{1.0, 1.0}));
  CHECK(be.divergent);
  // Fermi-Dirac tends to a nonzero constant on the left.
  const NormalizationResult fd = normalization(to_solution(FermiDirac{1.0, 1.0}));
  CHECK(fd.divergent);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(pdf(Cauchy{0.0, -1.0}, 0.0), domain_error);
  CHECK_THROWS_AS(pdf(Normal{0.0, 0.0}, 0.0), domain_error);
  CHECK_THROWS_AS(to_soliton(StudentT{-2.0}), domain_error);
  CHECK_THROWS_AS(equivalence_report(Cauchy{}, to_solution(Cauchy{}), {}), domain_error);
}
