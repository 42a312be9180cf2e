#pragma once

#include "bergman/multi_index.hpp"
#include "bergman/numeric.hpp"

#include <memory>
#include <vector>

namespace bergman {

// Dense truncated power series in k variables with complex coefficients,
// indexed by graded-lex rank. A series with no storage is identically zero.
class PowerSeries {
 public:
  PowerSeries() = default;
  PowerSeries(int nvars, int order);

  static PowerSeries constant(int nvars, int order, const Complex& c);
  // the coordinate function x_i
  static PowerSeries variable(int nvars, int order, int i);

  int nvars() const { return basis_ ? basis_->nvars() : 0; }
  int order() const { return basis_ ? basis_->order() : -1; }
  const MonomialBasis& basis() const { return *basis_; }
  std::size_t size() const { return basis_ ? basis_->size() : 0; }

  bool is_zero() const;
  bool has_storage() const { return !c_.empty(); }

  // rank-based access; reading from an empty series yields zero
  Complex get(std::size_t rank) const;
  Complex& at(std::size_t rank);
  // empty when the series has no storage
  const std::vector<Complex>& data() const { return c_; }

  Complex coeff(const MultiIndex& e) const;
  void set_coeff(const MultiIndex& e, const Complex& value);
  void add_to_coeff(const MultiIndex& e, const Complex& value);

  PowerSeries truncated(int order) const;

  PowerSeries& operator+=(const PowerSeries& o);
  PowerSeries& operator-=(const PowerSeries& o);
  PowerSeries& operator*=(const Complex& s);
  // this += a*b, truncated to this->order(); a and b may have any order >= 0
  void add_product(const PowerSeries& a, const PowerSeries& b);
  // this += s*a
  void add_scaled(const PowerSeries& a, const Complex& s);

  // formal derivative d^e; result order drops by |e|
  PowerSeries derivative(const MultiIndex& e) const;
  // Taylor coefficient field of the monomial e: coefficients of x^(e+k)
  // rescaled by binom(e+k, k), truncated to `order`; i.e. d^e f / e! as a series
  PowerSeries taylor_shift(const MultiIndex& e, int order) const;
  // coefficient-wise sign (-1)^{sum of exponents over the variables in [first, last)}
  PowerSeries sign_flipped(int first, int last) const;

  PowerSeries reciprocal() const;
  Complex evaluate(const std::vector<Complex>& point) const;
  Complex constant_term() const { return get(0); }
  // largest |coefficient|
  Real max_abs() const;

 private:
  void ensure_storage();

  std::shared_ptr<const MonomialBasis> basis_;
  std::vector<Complex> c_;
};

PowerSeries operator+(PowerSeries a, const PowerSeries& b);
PowerSeries operator-(PowerSeries a, const PowerSeries& b);
PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
PowerSeries operator*(PowerSeries a, const Complex& s);

// Truncated matrix of power series (row by row), used for field-valued Hessians.
using SeriesMatrix = std::vector<std::vector<PowerSeries>>;
SeriesMatrix series_inverse(const SeriesMatrix& a);
PowerSeries series_determinant(const SeriesMatrix& a);

}  // namespace bergman
