#include "bergman/numeric.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bergman {

namespace {

unsigned digits10_for_bits(unsigned bits) {
  // ceil(bits * log10 2); the backend converts back with rounding up
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120));
}

}  // namespace

void set_precision_bits(unsigned bits) {
  if (bits < 24) throw std::invalid_argument("precision below 24 bits is not supported");
  Real::default_precision(digits10_for_bits(bits));
}

unsigned precision_bits() {
  Real probe;
  return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

int roundtrip_digits() {
  return static_cast<int>(std::ceil(precision_bits() * 0.30102999566398120)) + 1;
}

PrecisionScope::PrecisionScope(unsigned bits)
    : saved_digits10_(Real::default_precision()) {
  set_precision_bits(bits);
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

Real pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

Real factorial(unsigned k) {
  Real r = 1;
  for (unsigned i = 2; i <= k; ++i) r *= i;
  return r;
}

Real binomial(unsigned n, unsigned k) {
  if (k > n) return Real(0);
  if (k > n - k) k = n - k;
  Real r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

Real real_from_string(const std::string& text) {
  try {
    return Real(text);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
}

Complex& Complex::operator+=(const Complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  Real r = re * o.re - im * o.im;
  im = re * o.im + im * o.re;
  re = std::move(r);
  return *this;
}

Complex& Complex::operator*=(const Real& s) {
  re *= s;
  im *= s;
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  Real d = o.re * o.re + o.im * o.im;
  if (d.is_zero()) throw std::domain_error("complex division by zero");
  Real r = (re * o.re + im * o.im) / d;
  im = (im * o.re - re * o.im) / d;
  re = std::move(r);
  return *this;
}

void Complex::fma(const Complex& a, const Complex& b) {
  // Real-only operands are common (weights, fields of real jets); skip the dead products.
  if (a.im.is_zero()) {
    if (b.im.is_zero()) {
      re += a.re * b.re;
      return;
    }
    re += a.re * b.re;
    im += a.re * b.im;
    return;
  }
  if (b.im.is_zero()) {
    re += a.re * b.re;
    im += a.im * b.re;
    return;
  }
  re += a.re * b.re;
  re -= a.im * b.im;
  im += a.re * b.im;
  im += a.im * b.re;
}

Complex operator+(Complex a, const Complex& b) { return a += b; }
Complex operator-(Complex a, const Complex& b) { return a -= b; }
Complex operator-(const Complex& a) { return Complex(-a.re, -a.im); }
Complex operator*(Complex a, const Complex& b) { return a *= b; }
Complex operator*(Complex a, const Real& s) { return a *= s; }
Complex operator*(const Real& s, Complex a) { return a *= s; }
Complex operator/(Complex a, const Complex& b) { return a /= b; }
bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }

Complex conj(const Complex& z) { return Complex(z.re, -z.im); }
Real abs(const Complex& z) { return boost::multiprecision::hypot(z.re, z.im); }
Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
Real arg(const Complex& z) { return boost::multiprecision::atan2(z.im, z.re); }

Complex exp(const Complex& z) {
  Real m = boost::multiprecision::exp(z.re);
  if (z.im.is_zero()) return Complex(m);
  return Complex(m * boost::multiprecision::cos(z.im), m * boost::multiprecision::sin(z.im));
}

Complex sqrt(const Complex& z) {
  if (z.is_zero()) return Complex();
  Real r = abs(z);
  Real a = boost::multiprecision::sqrt((r + boost::multiprecision::abs(z.re)) / 2);
  if (z.re >= 0) return Complex(a, z.im / (2 * a));
  Real b = z.im >= 0 ? a : Real(-a);
  return Complex(boost::multiprecision::abs(z.im) / (2 * a), b);
}

Complex pow(const Complex& z, int k) {
  if (k < 0) return Complex(1) / pow(z, -k);
  Complex result(1);
  Complex base = z;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return result;
}

Complex imag_unit() { return Complex(Real(0), Real(1)); }

Complex i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return Complex(1);
    case 1: return Complex(Real(0), Real(1));
    case 2: return Complex(-1);
    default: return Complex(Real(0), Real(-1));
  }
}

ComplexMatrix identity_matrix(int n) {
  ComplexMatrix m(n, std::vector<Complex>(n));
  for (int i = 0; i < n; ++i) m[i][i] = Complex(1);
  return m;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), p = b.empty() ? 0 : b[0].size();
  ComplexMatrix c(n, std::vector<Complex>(p));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t j = 0; j < p; ++j) c[i][j].fma(a[i][l], b[l][j]);
  return c;
}

namespace {

// Row-reduces a copy of `a`; fills `inv` if requested, returns the determinant.
Complex gauss_jordan(ComplexMatrix a, ComplexMatrix* inv) {
  const int n = static_cast<int>(a.size());
  ComplexMatrix b = identity_matrix(n);
  Complex det(1);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (norm(a[r][col]) > norm(a[piv][col])) piv = r;
    if (a[piv][col].is_zero()) {
      if (inv) throw std::domain_error("singular matrix");
      return Complex();
    }
    if (piv != col) {
      std::swap(a[piv], a[col]);
      std::swap(b[piv], b[col]);
      det = -det;
    }
    Complex p = a[col][col];
    det *= p;
    Complex pinv = Complex(1) / p;
    for (int j = 0; j < n; ++j) {
      a[col][j] *= pinv;
      b[col][j] *= pinv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      Complex f = a[r][col];
      for (int j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        b[r][j] -= f * b[col][j];
      }
    }
  }
  if (inv) *inv = std::move(b);
  return det;
}

}  // namespace

ComplexMatrix inverse(const ComplexMatrix& a) {
  ComplexMatrix inv;
  gauss_jordan(a, &inv);
  return inv;
}

Complex determinant(const ComplexMatrix& a) { return gauss_jordan(a, nullptr); }

Real max_abs_entry_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
  Real m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      Real d = abs(a[i][j] - b[i][j]);
      if (d > m) m = d;
    }
  return m;
}

double to_double(const Real& x) { return x.convert_to<double>(); }

std::string format_real(const Real& x, int digits) {
  if (x.is_zero()) return "0";
  Real a = boost::multiprecision::abs(x);
  std::string s;
  if (a >= Real(1e6) || a < Real("1e-6")) {
    s = x.str(digits, std::ios_base::scientific);
  } else {
    // fixed notation carrying the same number of significant digits
    int lead = static_cast<int>(std::floor(std::log10(a.convert_to<double>())));
    int decimals = std::max(0, digits - 1 - lead);
    s = x.str(decimals, std::ios_base::fixed);
    if (s.find('.') != std::string::npos) {
      while (!s.empty() && s.back() == '0') s.pop_back();
      if (!s.empty() && s.back() == '.') s.pop_back();
    }
  }
  return s;
}

std::string format_real(const Real& x) { return format_real(x, roundtrip_digits()); }

}  // namespace bergman
