#include "bergman/power_series.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bergman {

PowerSeries::PowerSeries(int nvars, int order) : basis_(monomial_basis(nvars, order)) {}

PowerSeries PowerSeries::constant(int nvars, int order, const Complex& c) {
  PowerSeries s(nvars, order);
  if (!c.is_zero()) s.at(0) = c;
  return s;
}

PowerSeries PowerSeries::variable(int nvars, int order, int i) {
  PowerSeries s(nvars, order);
  if (order >= 1) s.set_coeff(MultiIndex::unit(nvars, i), Complex(1));
  return s;
}

void PowerSeries::ensure_storage() {
  if (c_.empty() && basis_) c_.resize(basis_->size());
}

bool PowerSeries::is_zero() const {
  for (const auto& v : c_)
    if (!v.is_zero()) return false;
  return true;
}

Complex PowerSeries::get(std::size_t rank) const {
  if (c_.empty()) return Complex();
  return c_.at(rank);
}

Complex& PowerSeries::at(std::size_t rank) {
  ensure_storage();
  return c_.at(rank);
}

Complex PowerSeries::coeff(const MultiIndex& e) const {
  if (!basis_) return Complex();
  long r = basis_->rank(e);
  if (r < 0) return Complex();
  return get(static_cast<std::size_t>(r));
}

void PowerSeries::set_coeff(const MultiIndex& e, const Complex& value) {
  long r = basis_->rank(e);
  if (r < 0)
    throw std::out_of_range("monomial " + e.to_string() + " exceeds truncation order " +
                            std::to_string(order()));
  at(static_cast<std::size_t>(r)) = value;
}

void PowerSeries::add_to_coeff(const MultiIndex& e, const Complex& value) {
  long r = basis_->rank(e);
  if (r < 0)
    throw std::out_of_range("monomial " + e.to_string() + " exceeds truncation order " +
                            std::to_string(order()));
  at(static_cast<std::size_t>(r)) += value;
}

PowerSeries PowerSeries::truncated(int order) const {
  if (order > this->order())
    throw std::invalid_argument("cannot raise the truncation order of a series");
  PowerSeries r(nvars(), order);
  if (!c_.empty()) {
    r.c_.assign(c_.begin(), c_.begin() + static_cast<long>(r.size()));
  }
  return r;
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& o) {
  if (o.nvars() != nvars()) throw std::invalid_argument("series variable count mismatch");
  if (o.order() < order()) *this = truncated(o.order());
  if (o.c_.empty()) return *this;
  ensure_storage();
  for (std::size_t t = 0; t < c_.size(); ++t) c_[t] += o.c_[t];
  return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& o) {
  if (o.nvars() != nvars()) throw std::invalid_argument("series variable count mismatch");
  if (o.order() < order()) *this = truncated(o.order());
  if (o.c_.empty()) return *this;
  ensure_storage();
  for (std::size_t t = 0; t < c_.size(); ++t) c_[t] -= o.c_[t];
  return *this;
}

PowerSeries& PowerSeries::operator*=(const Complex& s) {
  for (auto& v : c_) v *= s;
  return *this;
}

void PowerSeries::add_product(const PowerSeries& a, const PowerSeries& b) {
  if (a.nvars() != nvars() || b.nvars() != nvars())
    throw std::invalid_argument("series variable count mismatch");
  if (a.c_.empty() || b.c_.empty()) return;
  const int d = order();
  const MonomialBasis& basis = *basis_;
  const std::size_t na = std::min(a.size(), basis.size());
  bool touched = false;
  for (std::size_t i = 0; i < na; ++i) {
    const Complex& ai = a.c_[i];
    if (ai.is_zero()) continue;
    const int rest = d - basis.degree(i);
    const std::size_t nb = std::min(b.size(), basis.degree_offset(rest + 1));
    for (std::size_t j = 0; j < nb; ++j) {
      const Complex& bj = b.c_[j];
      if (bj.is_zero()) continue;
      if (!touched) {
        ensure_storage();
        touched = true;
      }
      c_[static_cast<std::size_t>(basis.sum_rank(i, j))].fma(ai, bj);
    }
  }
}

void PowerSeries::add_scaled(const PowerSeries& a, const Complex& s) {
  if (a.nvars() != nvars()) throw std::invalid_argument("series variable count mismatch");
  if (a.c_.empty() || s.is_zero()) return;
  ensure_storage();
  const std::size_t n = std::min(size(), a.size());
  for (std::size_t t = 0; t < n; ++t)
    if (!a.c_[t].is_zero()) c_[t].fma(a.c_[t], s);
}

PowerSeries PowerSeries::derivative(const MultiIndex& e) const {
  const int k = e.order();
  if (k > order())
    throw std::out_of_range("derivative of order " + std::to_string(k) +
                            " exceeds jet order " + std::to_string(order()));
  PowerSeries r(nvars(), order() - k);
  if (c_.empty()) return r;
  for (std::size_t t = 0; t < r.size(); ++t) {
    const MultiIndex& g = r.basis().monomial(t);
    MultiIndex src = g + e;
    const Complex& v = c_[static_cast<std::size_t>(basis_->rank(src))];
    if (v.is_zero()) continue;
    Real f = 1;
    for (int i = 0; i < e.size(); ++i)
      for (int q = g[i] + 1; q <= src[i]; ++q) f *= q;
    r.at(t) = v * f;
  }
  return r;
}

PowerSeries PowerSeries::taylor_shift(const MultiIndex& e, int order) const {
  const int k = e.order();
  if (k > this->order())
    throw std::out_of_range("Taylor coefficient of order " + std::to_string(k) +
                            " exceeds jet order " + std::to_string(this->order()));
  const int out = std::min(order, this->order() - k);
  PowerSeries r(nvars(), out);
  if (c_.empty()) return r;
  for (std::size_t t = 0; t < r.size(); ++t) {
    const MultiIndex& g = r.basis().monomial(t);
    MultiIndex src = g + e;
    const Complex& v = c_[static_cast<std::size_t>(basis_->rank(src))];
    if (v.is_zero()) continue;
    r.at(t) = v * multi_binomial(src, g);
  }
  return r;
}

PowerSeries PowerSeries::sign_flipped(int first, int last) const {
  PowerSeries r = *this;
  for (std::size_t t = 0; t < r.c_.size(); ++t) {
    const MultiIndex& m = basis_->monomial(t);
    int s = 0;
    for (int i = first; i < last; ++i) s += m[i];
    if (s % 2) r.c_[t] = -r.c_[t];
  }
  return r;
}

PowerSeries PowerSeries::reciprocal() const {
  Complex c0 = constant_term();
  if (c0.is_zero()) throw std::domain_error("reciprocal of a series with zero constant term");
  PowerSeries r = constant(nvars(), order(), Complex(1) / c0);
  // Newton iteration r <- r (2 - f r); each pass doubles the number of correct degrees
  for (int correct = 1; correct <= order(); correct *= 2) {
    PowerSeries fr(nvars(), order());
    fr.add_product(*this, r);
    PowerSeries two_minus = constant(nvars(), order(), Complex(2));
    two_minus -= fr;
    PowerSeries next(nvars(), order());
    next.add_product(r, two_minus);
    r = std::move(next);
  }
  return r;
}

Complex PowerSeries::evaluate(const std::vector<Complex>& point) const {
  if (static_cast<int>(point.size()) != nvars())
    throw std::invalid_argument("evaluation point has wrong dimension");
  if (c_.empty()) return Complex();
  // monomial values reuse one buffer per thread; assignment carries precision over
  thread_local std::vector<Complex> mono;
  if (mono.size() < size()) mono.resize(size());
  mono[0] = Complex(1);
  Complex sum = c_[0];
  for (std::size_t t = 1; t < size(); ++t) {
    Complex& m = mono[t];
    m = mono[basis_->parent(t)];
    const Complex& p = point[basis_->parent_var(t)];
    if (p.im.is_zero())
      m *= p.re;
    else
      m *= p;
    if (!c_[t].is_zero()) sum.fma(c_[t], m);
  }
  return sum;
}

Real PowerSeries::max_abs() const {
  Real m = 0;
  for (const auto& v : c_) {
    Real a = abs(v);
    if (a > m) m = a;
  }
  return m;
}

PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
  if (a.nvars() != b.nvars()) throw std::invalid_argument("series variable count mismatch");
  PowerSeries r(a.nvars(), std::min(a.order(), b.order()));
  r.add_product(a, b);
  return r;
}

PowerSeries operator*(PowerSeries a, const Complex& s) { return a *= s; }

namespace {

PowerSeries eliminate(SeriesMatrix a, SeriesMatrix* inv) {
  const int n = static_cast<int>(a.size());
  const int k = a[0][0].nvars();
  int order = a[0][0].order();
  for (const auto& row : a)
    for (const auto& s : row) order = std::min(order, s.order());
  SeriesMatrix b(n, std::vector<PowerSeries>(n, PowerSeries(k, order)));
  for (int i = 0; i < n; ++i) b[i][i] = PowerSeries::constant(k, order, Complex(1));
  for (auto& row : a)
    for (auto& s : row) s = s.truncated(order);
  PowerSeries det = PowerSeries::constant(k, order, Complex(1));
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (norm(a[r][col].constant_term()) > norm(a[piv][col].constant_term())) piv = r;
    if (a[piv][col].constant_term().is_zero())
      throw std::domain_error("series matrix is singular at the base point");
    if (piv != col) {
      std::swap(a[piv], a[col]);
      std::swap(b[piv], b[col]);
      det *= Complex(-1);
    }
    det = det * a[col][col];
    PowerSeries pinv = a[col][col].reciprocal();
    for (int j = 0; j < n; ++j) {
      a[col][j] = a[col][j] * pinv;
      b[col][j] = b[col][j] * pinv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      PowerSeries f = a[r][col];
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

SeriesMatrix series_inverse(const SeriesMatrix& a) {
  SeriesMatrix inv;
  eliminate(a, &inv);
  return inv;
}

PowerSeries series_determinant(const SeriesMatrix& a) { return eliminate(a, nullptr); }

}  // namespace bergman
