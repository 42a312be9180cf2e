#include "bergman/jets.hpp"

#include <doctest.h>

#include <random>
#include <thread>

using namespace bergman;

namespace {

// coefficients k / 64 with |k| <= 64: sums and products stay exact at 256 bits
PowerSeries dyadic_series(int nvars, int order, std::mt19937& rng) {
  std::uniform_int_distribution<int> d(-64, 64);
  PowerSeries s(nvars, order);
  for (std::size_t r = 0; r < s.size(); ++r) s.at(r) = Complex(Real(d(rng)) / 64, Real(d(rng)) / 64);
  return s;
}

PowerSeries random_series(int nvars, int order, std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-1, 1);
  PowerSeries s(nvars, order);
  for (std::size_t r = 0; r < s.size(); ++r) s.at(r) = Complex(Real(d(rng)) / 3, Real(d(rng)) / 7);
  return s;
}

bool identical(const PowerSeries& a, const PowerSeries& b) {
  if (a.nvars() != b.nvars() || a.order() != b.order()) return false;
  for (std::size_t r = 0; r < a.size(); ++r)
    if (!(a.get(r) == b.get(r))) return false;
  return true;
}

Real max_diff(const PowerSeries& a, const PowerSeries& b) {
  Real m = 0;
  for (std::size_t r = 0; r < a.size(); ++r) m = std::max(m, abs(a.get(r) - b.get(r)));
  return m;
}

Real eps() { return boost::multiprecision::ldexp(Real(1), -static_cast<int>(precision_bits()) + 8); }

}  // namespace

TEST_CASE("graded-lex basis: ranks round-trip and degrees are sorted") {
  for (int n : {1, 2, 4}) {
    const auto b = monomial_basis(n, 6);
    int last = 0;
    for (std::size_t r = 0; r < b->size(); ++r) {
      CHECK(b->rank(b->monomial(r)) == static_cast<long>(r));
      CHECK(b->degree(r) >= last);
      last = b->degree(r);
    }
    CHECK(b->rank(MultiIndex(std::vector<int>(n, 7))) == -1);
  }
  // prefix consistency across orders
  const auto small = monomial_basis(3, 3), big = monomial_basis(3, 7);
  for (std::size_t r = 0; r < small->size(); ++r) CHECK(small->monomial(r) == big->monomial(r));
  // larger leading exponents come first within a degree
  const auto b2 = monomial_basis(2, 2);
  CHECK(b2->monomial(3) == MultiIndex{2, 0});
  CHECK(b2->monomial(5) == MultiIndex{0, 2});
}

TEST_CASE("multi-index helpers") {
  MultiIndex a{3, 1, 2};
  CHECK(a.order() == 6);
  CHECK(a.factorial() == Real(12));
  CHECK(a.dominates(MultiIndex{1, 1, 0}));
  CHECK_FALSE(a.dominates(MultiIndex{0, 2, 0}));
  CHECK(multi_binomial(a, MultiIndex{1, 0, 1}) == Real(6));
  CHECK(concat(MultiIndex{1}, MultiIndex{2, 3}) == MultiIndex{1, 2, 3});
}

TEST_CASE("ring laws hold exactly on dyadic coefficients") {
  PrecisionScope ps(256);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const PowerSeries a = dyadic_series(4, 5, rng), b = dyadic_series(4, 5, rng), c = dyadic_series(4, 5, rng);
    CHECK(identical((a + b) + c, a + (b + c)));
    CHECK(identical(a * b, b * a));
    CHECK(identical(a * (b + c), a * b + a * c));
    CHECK(identical((a * b) * c, a * (b * c)));
  }
}

TEST_CASE("ring laws hold to rounding on random coefficients") {
  PrecisionScope ps(128);
  std::mt19937 rng(11);
  const PowerSeries a = random_series(2, 8, rng), b = random_series(2, 8, rng), c = random_series(2, 8, rng);
  CHECK(max_diff((a + b) + c, a + (b + c)) <= eps());
  CHECK(max_diff(a * b, b * a) <= eps());
  CHECK(max_diff(a * (b + c), a * b + a * c) <= eps());
}

TEST_CASE("mixed orders truncate to the smaller order") {
  PrecisionScope ps(64);
  std::mt19937 rng(3);
  const PowerSeries a = random_series(2, 6, rng), b = random_series(2, 3, rng);
  CHECK((a * b).order() == 3);
  CHECK(identical(a * b, a.truncated(3) * b));
}

TEST_CASE("Leibniz rule for jet derivatives") {
  PrecisionScope ps(128);
  std::mt19937 rng(5);
  for (int n : {1, 2}) {
    const Jet2n a(Point(n), random_series(2 * n, 7, rng)), b(Point(n), random_series(2 * n, 7, rng));
    for (int i = 0; i < n; ++i) {
      const MultiIndex e = MultiIndex::unit(n, i), z(n);
      const Jet2n lhs = jet_diff(jet_mul(a, b), e, z);
      const Jet2n rhs = jet_add(jet_mul(jet_diff(a, e, z), b), jet_mul(a, jet_diff(b, e, z)));
      CHECK(lhs.order() == rhs.order());
      CHECK(max_diff(lhs.series(), rhs.series()) <= eps() * 64);
      const Jet2n lbar = jet_diff(jet_mul(a, b), z, e);
      const Jet2n rbar = jet_add(jet_mul(jet_diff(a, z, e), b), jet_mul(a, jet_diff(b, z, e)));
      CHECK(max_diff(lbar.series(), rbar.series()) <= eps() * 64);
    }
  }
}

TEST_CASE("antidiagonal shift is an involution") {
  PrecisionScope ps(96);
  std::mt19937 rng(9);
  for (int n : {1, 2, 3}) {
    const Jet2n a(Point(n), random_series(2 * n, 5, rng));
    CHECK(identical(jet_shift_antidiag(jet_shift_antidiag(a)).series(), a.series()));
    // zbar^beta picks up (-1)^|beta|
    const Jet2n s = jet_shift_antidiag(a);
    MultiIndex al(n), be(n);
    be[0] = 3;
    CHECK(s.coeff(al, be) == -a.coeff(al, be));
  }
}

TEST_CASE("evaluation matches the monomial sum") {
  PrecisionScope ps(128);
  std::mt19937 rng(13);
  const PowerSeries s = random_series(3, 5, rng);
  const std::vector<Complex> p{Complex(Real("0.3"), Real("-0.1")), Complex(Real("-0.2")), Complex(Real(0), Real("0.4"))};
  Complex naive;
  for (std::size_t r = 0; r < s.size(); ++r) {
    Complex m = s.get(r);
    const MultiIndex& e = s.basis().monomial(r);
    for (int v = 0; v < 3; ++v) m = m * pow(p[v], e[v]);
    naive += m;
  }
  CHECK(abs(s.evaluate(p) - naive) <= eps());
  // jets evaluate at (z - z0, conj(z - z0))
  Jet2n j(1, 2, Point{Complex(Real(1), Real(1))});
  j.set_coeff(MultiIndex{1}, MultiIndex{1}, Complex(1));
  CHECK(abs(jet_eval(j, Point{Complex(Real(1), Real(3))}) - Complex(4)) <= eps());
}

TEST_CASE("reciprocal and Taylor shift") {
  PrecisionScope ps(128);
  std::mt19937 rng(17);
  PowerSeries s = random_series(2, 6, rng);
  s.at(0) = Complex(Real(2), Real("0.5"));
  const PowerSeries one = s * s.reciprocal();
  CHECK(abs(one.get(0) - Complex(1)) <= eps());
  for (std::size_t r = 1; r < one.size(); ++r) CHECK(abs(one.get(r)) <= eps() * 16);
  // d^e f / e! as a series: its constant term is the coefficient of x^e
  const MultiIndex e{2, 1};
  CHECK(abs(s.taylor_shift(e, 3).get(0) - s.coeff(e)) <= eps());
  CHECK_THROWS_AS(s.derivative(MultiIndex{5, 2}), std::out_of_range);
}

TEST_CASE("jets at different basepoints do not mix") {
  PrecisionScope ps(64);
  const Jet2n a(1, 3), b(1, 3, Point{Complex(Real(1))});
  CHECK_THROWS_AS(jet_add(a, b), std::invalid_argument);
  CHECK_THROWS_AS(jet_mul(a, Jet2n(2, 3)), std::invalid_argument);
}

TEST_CASE("products are bit-identical across threads") {
  PrecisionScope ps(256);
  std::mt19937 rng(21);
  const PowerSeries a = random_series(4, 6, rng), b = random_series(4, 6, rng);
  const PowerSeries here = a * b;
  std::vector<PowerSeries> there(4);
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&, t] {
      PrecisionScope inner(256);
      there[t] = a * b;
    });
  for (auto& th : pool) th.join();
  for (const auto& p : there) CHECK(identical(p, here));
}
