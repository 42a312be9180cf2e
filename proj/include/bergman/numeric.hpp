#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <vector>

namespace bergman {

// Variable precision binary float; every new value takes the thread default.
using Real = boost::multiprecision::mpfr_float;

// Sets the working precision (in bits) for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits10_;
};

void set_precision_bits(unsigned bits);
// Mantissa bits of the current default precision (never below the requested bits).
unsigned precision_bits();
// Decimal digits needed to round-trip a value at the current precision.
int roundtrip_digits();

Real pi();
Real factorial(unsigned k);
Real binomial(unsigned n, unsigned k);
Real real_from_string(const std::string& text);

struct Complex {
  Real re;
  Real im;

  Complex() : re(0), im(0) {}
  Complex(const Real& r) : re(r), im(0) {}  // NOLINT: implicit widening is intended
  Complex(const Real& r, const Real& i) : re(r), im(i) {}
  Complex(int r) : re(r), im(0) {}  // NOLINT
  Complex(double r) : re(r), im(0) {}  // NOLINT

  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator*=(const Real& s);
  Complex& operator/=(const Complex& o);

  // this += a * b without temporaries
  void fma(const Complex& a, const Complex& b);
};

Complex operator+(Complex a, const Complex& b);
Complex operator-(Complex a, const Complex& b);
Complex operator-(const Complex& a);
Complex operator*(Complex a, const Complex& b);
Complex operator*(Complex a, const Real& s);
Complex operator*(const Real& s, Complex a);
Complex operator/(Complex a, const Complex& b);
bool operator==(const Complex& a, const Complex& b);

Complex conj(const Complex& z);
Real abs(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real arg(const Complex& z);
Complex exp(const Complex& z);
Complex sqrt(const Complex& z);  // principal branch
Complex pow(const Complex& z, int k);
Complex imag_unit();
Complex i_pow(int k);  // i^k, exact

// Small dense matrices, stored row by row.
using ComplexMatrix = std::vector<std::vector<Complex>>;

ComplexMatrix identity_matrix(int n);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
// Gauss-Jordan with partial pivoting; throws std::domain_error when singular.
ComplexMatrix inverse(const ComplexMatrix& a);
Complex determinant(const ComplexMatrix& a);
Real max_abs_entry_difference(const ComplexMatrix& a, const ComplexMatrix& b);

double to_double(const Real& x);
std::string format_real(const Real& x, int digits);
std::string format_real(const Real& x);

}  // namespace bergman
