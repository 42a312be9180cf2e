#include "bergman/combinatorics.hpp"
#include "bergman/oracle.hpp"
#include "bergman/summation.hpp"

#include <doctest.h>

#include <random>

using namespace bergman;
namespace mp = boost::multiprecision;

TEST_CASE("linear fit recovers a line") {
  const LinearFit f = linear_fit({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2));
  CHECK(f.intercept == doctest::Approx(1));
  CHECK(f.r2 == doctest::Approx(1));
  CHECK_THROWS_AS(linear_fit({1}, {1}), std::invalid_argument);
}

TEST_CASE("optimal truncation equals the argmin of C^k k!^sigma h^k by direct scan") {
  PrecisionScope ps(128);
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> uc(0.1, 10), us(1, 3), ul(-3, 0);
  for (int t = 0; t < 100; ++t) {
    const Real C(uc(rng)), sigma(us(rng)), h(std::pow(10.0, ul(rng)));
    long best = 0;
    Real v = 0, best_v = 0;
    const long limit = 2 * gevrey_index(C, sigma, h) + 4;
    for (long k = 1; k <= limit; ++k) {
      v += mp::log(C * h) + sigma * mp::log(Real(k));
      if (v < best_v) {
        best_v = v;
        best = k;
      }
    }
    CHECK(optimal_truncation(C, sigma, h) == best);
  }
}

TEST_CASE("Gevrey constant and symbol order") {
  PrecisionScope ps(128);
  CHECK(symbol_sigma(WeightModel::parse("gevrey-radial:s=2")) == 3);
  CHECK(symbol_sigma(WeightModel::parse("gevrey-radial:s=1.5")) == 2);
  CHECK(symbol_sigma(WeightModel::gaussian(1)) == 1);
  // a_m = 2^{m+1} m!^3 has C = 2 exactly
  std::vector<Complex> a;
  for (int m = 0; m <= 10; ++m) a.emplace_back(mp::pow(Real(2), m + 1) * mp::pow(factorial(m), 3));
  CHECK(abs(Complex(estimate_gevrey_constant(a, Real(3)) - 2)) <= Real("1e-30"));
}

TEST_CASE("growth fit on synthetic sequences") {
  PrecisionScope ps(128);
  for (double sigma : {1.0, 2.0, 3.0}) {
    std::vector<Real> a;
    for (int m = 0; m <= 14; ++m) a.push_back(mp::pow(Real("0.7"), m) * mp::pow(factorial(m), Real(sigma)));
    const GevreyFit g = fit_gevrey_order(a);
    CHECK(g.sigma == doctest::Approx(sigma).epsilon(0.01));
    CHECK(g.r2 > 0.999);
  }
  // zero entries are skipped; too few points is an error
  std::vector<Real> sparse(7, Real(0));
  sparse[0] = 1;
  sparse[2] = 3;
  CHECK_THROWS_AS(fit_gevrey_order(sparse), std::invalid_argument);
}

TEST_CASE("remainder fit on synthetic data") {
  PrecisionScope ps(128);
  std::vector<Real> h, r;
  for (int i = 0; i < 9; ++i) {
    h.push_back(Real("0.1") + Real("0.05") * i);
    r.push_back(Real(3) * mp::exp(-Real("2.5") / h.back()));
  }
  const RemainderFit f = fit_remainder(h, r, Real(1), Real("1e-60"));
  CHECK_FALSE(f.noise_floor);
  CHECK(f.delta == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-9));
  CHECK(f.r2 == doctest::Approx(1));
  REQUIRE(f.superpolynomial.size() == 4);
  for (bool b : f.superpolynomial) CHECK(b);
  // s = 2 uses h^{-1/3}
  std::vector<Real> r2;
  for (const auto& x : h) r2.push_back(mp::exp(-Real(4) * mp::pow(x, Real(-1) / 3)));
  CHECK(fit_remainder(h, r2, Real(2), Real("1e-60")).delta == doctest::Approx(4).epsilon(1e-9));
  // a polynomial remainder h^3 is not superpolynomial for p = 4
  std::vector<Real> poly;
  for (const auto& x : h) poly.push_back(mp::pow(x, 3));
  const RemainderFit pf = fit_remainder(h, poly, Real(1), Real("1e-60"));
  CHECK(pf.superpolynomial[0]);
  CHECK_FALSE(pf.superpolynomial[3]);
  // below the noise floor the fit is skipped, not faked
  const RemainderFit skipped = fit_remainder(h, r, Real(1), Real(1));
  CHECK(skipped.noise_floor);
  CHECK_FALSE(skipped.note.empty());
  CHECK_THROWS_AS(fit_remainder(h, std::vector<Real>(3, Real(1)), Real(1), Real(0)), std::invalid_argument);
}

TEST_CASE("partial sums") {
  PrecisionScope ps(64);
  const std::vector<Complex> a{Complex(1), Complex(2), Complex(3)};
  CHECK(partial_sum(a, Real("0.5"), 0).is_zero());
  CHECK(abs(partial_sum(a, Real("0.5"), 3) - Complex(Real("2.75"))) <= Real("1e-15"));
}

TEST_CASE("optimal truncation is never worse than shorter truncations") {
  PrecisionScope ps(256);
  const WeightModel w = WeightModel::quartic(1, "0.01");
  const CoefficientTable t = charles_coeffs(w, 24);
  const auto a = t.diagonal_values();
  const Real C = estimate_gevrey_constant(a, symbol_sigma(w));
  for (const char* hs : {"0.15", "0.2", "0.3", "0.45"}) {
    const Real h(hs);
    const Real oracle = kernel_diag(w, h, Real(0)).normalized;
    const Realization r = realize_symbol(t, h, C);
    REQUIRE(r.n0 <= t.M + 1);
    const Real best = abs(r.value - Complex(oracle));
    for (int n = 0; n <= r.n0; ++n) CHECK(best <= abs(partial_sum(a, h, n) - Complex(oracle)));
  }
  // N0 is non-increasing in h; residuals are non-negative
  std::vector<Real> h{Real("0.1"), Real("0.2"), Real("0.3")};
  std::vector<Real> oracle;
  for (const auto& x : h) oracle.push_back(kernel_diag(w, x, Real(0)).normalized);
  const ExpansionReport rep = expansion_report(t, h, oracle, Real("1e-70"));
  for (std::size_t i = 1; i < h.size(); ++i) CHECK(rep.n0[i] <= rep.n0[i - 1]);
  for (const auto& r : rep.residuals) CHECK(r >= 0);
  CHECK(rep.csv().rfind("h,N0,partial_sum_re,partial_sum_im,residual\r\n", 0) == 0);
  CHECK(rep.summary_json().find("\"C_hat\"") != std::string::npos);
}
