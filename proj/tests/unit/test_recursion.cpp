#include "bergman/recursion.hpp"
#include "bergman/summation.hpp"

#include <doctest.h>

#include "frozen_values.hpp"
#include "radial_laplace.hpp"

#include <filesystem>
#include <random>

using namespace bergman;
namespace mp = boost::multiprecision;

namespace {

Real rel(const Complex& x, const Complex& ref) { return abs(x - ref) / std::max(abs(ref), Real("1e-300")); }

void check_against(const CoefficientTable& t, const frozen::Series& f, const Real& tol) {
  for (int m = 0; m <= t.M && m < static_cast<int>(f.a.size()); ++m) {
    CAPTURE(m);
    CHECK(rel(t.diagonal(m), Complex(Real(f.a[m]))) <= tol);
  }
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("bergman_recursion_" + name)).string();
}

}  // namespace

TEST_CASE("Gaussian: a_0 = 1/pi and all higher coefficients vanish, both recursions") {
  PrecisionScope ps(128);
  for (Method method : {Method::charles, Method::hs}) {
    const CoefficientTable t = compute_coeffs(method, WeightModel::gaussian(1), 10);
    CHECK(rel(t.diagonal(0), Complex(1 / pi())) <= Real("1e-35"));
    for (int m = 1; m <= 10; ++m) CHECK(abs(t.diagonal(m)) <= Real("1e-35"));
  }
  // C^2: a_0 = 2^n det H / pi^n = 1 / pi^2
  const CoefficientTable t2 = hs_coeffs(WeightModel::gaussian(2), 3);
  CHECK(rel(t2.diagonal(0), Complex(1 / (pi() * pi()))) <= Real("1e-35"));
  for (int m = 1; m <= 3; ++m) CHECK(abs(t2.diagonal(m)) <= Real("1e-35"));
}

TEST_CASE("radial weights match the independent moment oracle") {
  PrecisionScope ps(256);
  const Real tol("1e-35");
  for (const auto* f : {&frozen::quartic_001, &frozen::quartic_005, &frozen::poly_mixed}) {
    CAPTURE(f->weight);
    const WeightModel w = WeightModel::parse(f->weight);
    const int M = static_cast<int>(f->a.size()) - 1;
    check_against(charles_coeffs(w, M), *f, tol);
    check_against(hs_coeffs(w, M), *f, tol);
  }
  // factorially growing coefficients lose a few more digits to cancellation
  check_against(charles_coeffs(WeightModel::parse(frozen::gevrey_radial_2.weight), 12), frozen::gevrey_radial_2,
                Real("1e-30"));
  check_against(hs_coeffs(WeightModel::parse(frozen::gevrey_radial_15.weight), 16), frozen::gevrey_radial_15,
                Real("1e-30"));
}

TEST_CASE("random radial polynomials: both recursions equal the Laplace oracle") {
  PrecisionScope ps(192);
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (int trial = 0; trial < 6; ++trial) {
    std::map<int, Real> p;
    std::vector<std::pair<int, std::string>> spec;
    for (int j = 2; j <= 4; ++j) {
      // short decimal coefficients so the oracle and the weight see the same numbers
      const std::string c = std::to_string(std::round(u(rng) * 1e4) / 1e4);
      p[j] = Real(c);
      spec.emplace_back(j, c);
    }
    const WeightModel w = WeightModel::radial_polynomial(1, spec);
    const auto ref = radial_laplace_coefficients(p, 6);
    const CoefficientTable c = charles_coeffs(w, 6), h = hs_coeffs(w, 6);
    for (int m = 0; m <= 6; ++m) {
      CHECK(rel(c.diagonal(m), Complex(ref[m])) <= Real("1e-40"));
      CHECK(rel(h.diagonal(m), Complex(ref[m])) <= Real("1e-40"));
    }
  }
}

TEST_CASE("cross-method agreement on non-radial and higher-dimensional weights") {
  PrecisionScope ps(256);
  for (const char* spec : {"quartic:eps=0.01,x0=0.3,y0=0.1", "poly:r4=0.05,r6=0.01,x0=-0.2,y0=0.35",
                           "quartic:eps=0.02,n=2"}) {
    CAPTURE(spec);
    const WeightModel w = WeightModel::parse(spec);
    const int M = w.dim() == 1 ? 8 : 4;
    const CoefficientTable c = charles_coeffs(w, M), h = hs_coeffs(w, M);
    for (int m = 0; m <= M; ++m) CHECK(rel(c.diagonal(m), h.diagonal(m)) <= Real("1e-60"));
    CHECK(abs(c.diagonal(0).im) <= Real("1e-60"));
    CHECK(c.diagonal(0).re > 0);
  }
}

TEST_CASE("a_0 = 2^n det H / pi^n, real and positive") {
  PrecisionScope ps(128);
  // off-center quartic: H = 1/2 + 4 eps |x0|^2
  const WeightModel w = WeightModel::parse("quartic:eps=0.25,x0=0.6,y0=0.8");
  const Complex a0 = charles_coeffs(w, 0).diagonal(0);
  CHECK(rel(a0, Complex(Real(3) / pi())) <= Real("1e-35"));
  CHECK(abs(a0.im) <= Real("1e-35"));
}

TEST_CASE("radial weights give real coefficients") {
  PrecisionScope ps(192);
  for (const char* spec : {"quartic:eps=0.05", "gevrey-radial:s=1.5", "poly:r4=-0.01,r8=0.002"})
    for (Method method : {Method::charles, Method::hs}) {
      const CoefficientTable t = compute_coeffs(method, WeightModel::parse(spec), 8);
      for (int m = 0; m <= 8; ++m) CHECK(abs(t.diagonal(m).im) <= Real("1e-40") * (1 + abs(t.diagonal(m))));
    }
}

TEST_CASE("growth law: a finite Gevrey constant bounds every computed coefficient") {
  PrecisionScope ps(256);
  for (const char* spec : {"gevrey-radial:s=2", "gevrey-radial:s=1.5"}) {
    const WeightModel w = WeightModel::parse(spec);
    const CoefficientTable t = hs_coeffs(w, 12);
    const Real sigma = symbol_sigma(w);
    const Real C = estimate_gevrey_constant(t.diagonal_values(), sigma);
    CHECK(C < 100);
    for (int m = 0; m <= 12; ++m)
      CHECK(abs(t.diagonal(m)) / (mp::pow(C, m + 1) * mp::pow(factorial(m), sigma)) <= 1 + Real("1e-30"));
  }
}

TEST_CASE("derivative budget") {
  PrecisionScope ps(128);
  const WeightModel w = WeightModel::quartic(1, "0.01");
  CHECK(minimal_budget(6) == 14);
  CHECK(default_budget(6) == 16);
  // the minimal budget reproduces the default-budget diagonal
  const CoefficientTable tight = charles_coeffs(w, 6, minimal_budget(6));
  const CoefficientTable roomy = charles_coeffs(w, 6);
  for (int m = 0; m <= 6; ++m) CHECK(rel(tight.diagonal(m), roomy.diagonal(m)) <= Real("1e-35"));
  try {
    hs_coeffs(w, 6, 8);
    FAIL("budget 8 accepted for M = 6");
  } catch (const BudgetExhausted& e) {
    CHECK(e.m() == 4);
    CHECK(e.needed() == 10);
    CHECK(e.available() == 8);
  }
  CHECK_THROWS_AS(charles_coeffs(w, 3, 7), BudgetExhausted);
  // explicit jets cap the budget at their order
  std::vector<WeightTerm> terms{{MultiIndex{1}, MultiIndex{1}, "0.5"}, {MultiIndex{2}, MultiIndex{2}, "0.01"}};
  const WeightModel e = WeightModel::explicit_jet(1, terms, 10);
  CHECK(charles_coeffs(e, 4).budget <= 10);
  CHECK_THROWS_AS(charles_coeffs(e, 5), BudgetExhausted);
  CHECK_THROWS_AS(charles_coeffs(e, 3, 12), std::invalid_argument);
}

TEST_CASE("operator powers expand into ordered pairings") {
  PrecisionScope ps(128);
  ComplexMatrix G{{Complex(Real(2)), Complex(Real("0.5"), Real("0.25"))},
                  {Complex(Real("0.5"), Real("-0.25")), Complex(Real(3))}};
  // brute force: (sum G_ij xi_i eta_j)^nu in the series ring of (xi_1, xi_2, eta_1, eta_2)
  for (int nu = 0; nu <= 3; ++nu) {
    const int order = std::max(2, 2 * nu);
    PowerSeries base(4, order), power = PowerSeries::constant(4, order, Complex(1));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        MultiIndex e(4);
        e[i] = 1;
        e[2 + j] = 1;
        base.add_to_coeff(e, G[i][j]);
      }
    for (int k = 0; k < nu; ++k) power = power * base;
    for (std::size_t r = 0; r < power.size(); ++r) {
      const MultiIndex& e = power.basis().monomial(r);
      const MultiIndex a{e[0], e[1]}, b{e[2], e[3]};
      CHECK(abs(operator_power_coefficient(G, nu, a, b) - power.get(r)) <= Real("1e-30"));
    }
  }
}

TEST_CASE("phase functions vanish to second order where they must") {
  PrecisionScope ps(128);
  for (const char* spec : {"gaussian", "quartic:eps=0.05,x0=0.2,y0=-0.1", "quartic:eps=0.01,n=2"}) {
    const WeightModel w = WeightModel::parse(spec);
    const HsPhase p = hs_phase(w, 8);
    const PowerSeries& g = p.g.series();
    for (std::size_t r = 0; r < g.size() && g.basis().degree(r) <= 2; ++r) CHECK(abs(g.get(r)) <= Real("1e-30"));
    CHECK_NOTHROW(build_g_tilde(w, 8));
  }
}

TEST_CASE("tables round-trip through CSV and stay deterministic") {
  PrecisionScope ps(192);
  const WeightModel w = WeightModel::parse("poly:r4=0.02,r6=-0.003");
  const CoefficientTable t = hs_coeffs(w, 5);
  const std::string path = temp_path("table.csv");
  write_table_csv(t, path);
  const CoefficientTable back = read_table_csv(path, w, Method::hs);
  CHECK(back.M == 5);
  for (int m = 0; m <= 5; ++m) CHECK(back.diagonal(m) == t.diagonal(m));
  // identical inputs, identical bits
  const CoefficientTable again = hs_coeffs(w, 5);
  for (int m = 0; m <= 5; ++m) {
    const PowerSeries &x = t.entries[m].series(), &y = again.entries[m].series();
    for (std::size_t r = 0; r < x.size(); ++r) CHECK(x.get(r) == y.get(r));
  }
  std::filesystem::remove(path);
  CHECK_THROWS(read_table_csv(temp_path("missing.csv"), w, Method::hs));
}

TEST_CASE("method names") {
  CHECK(parse_method("charles") == Method::charles);
  CHECK(parse_method("hs") == Method::hs);
  CHECK(to_string(Method::hs) == "hs");
  CHECK_THROWS_AS(parse_method("both"), std::invalid_argument);
}
