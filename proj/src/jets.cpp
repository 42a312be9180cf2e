#include "bergman/jets.hpp"

#include <stdexcept>

namespace bergman {

namespace {

void check_compatible(const Jet2n& a, const Jet2n& b, const char* op) {
  if (a.dim() != b.dim())
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  if (!same_point(a.basepoint(), b.basepoint()))
    throw std::invalid_argument(std::string(op) + ": jets are centered at different basepoints");
}

}  // namespace

bool same_point(const Point& a, const Point& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

Jet2n::Jet2n(int dim, int order) : Jet2n(dim, order, Point(dim)) {}

Jet2n::Jet2n(int dim, int order, Point basepoint)
    : dim_(dim), basepoint_(std::move(basepoint)), series_(2 * dim, order) {
  if (dim < 1) throw std::invalid_argument("jet dimension must be >= 1");
  if (static_cast<int>(basepoint_.size()) != dim)
    throw std::invalid_argument("basepoint dimension does not match the jet");
}

Jet2n::Jet2n(Point basepoint, PowerSeries series)
    : dim_(static_cast<int>(basepoint.size())), basepoint_(std::move(basepoint)),
      series_(std::move(series)) {
  if (series_.nvars() != 2 * dim_)
    throw std::invalid_argument("series must have 2n variables for a jet in C^n");
}

Complex Jet2n::coeff(const MultiIndex& alpha, const MultiIndex& beta) const {
  if (alpha.size() != dim_ || beta.size() != dim_)
    throw std::invalid_argument("multi-index length differs from the jet dimension");
  return series_.coeff(concat(alpha, beta));
}

void Jet2n::set_coeff(const MultiIndex& alpha, const MultiIndex& beta, const Complex& value) {
  if (alpha.size() != dim_ || beta.size() != dim_)
    throw std::invalid_argument("multi-index length differs from the jet dimension");
  series_.set_coeff(concat(alpha, beta), value);
}

Jet2n Jet2n::truncated(int order) const { return Jet2n(basepoint_, series_.truncated(order)); }

Jet2n jet_add(const Jet2n& a, const Jet2n& b) {
  check_compatible(a, b, "jet_add");
  return Jet2n(a.basepoint(), a.series() + b.series());
}

Jet2n jet_sub(const Jet2n& a, const Jet2n& b) {
  check_compatible(a, b, "jet_sub");
  return Jet2n(a.basepoint(), a.series() - b.series());
}

Jet2n jet_scale(const Jet2n& a, const Complex& s) { return Jet2n(a.basepoint(), a.series() * s); }

Jet2n jet_mul(const Jet2n& a, const Jet2n& b) {
  check_compatible(a, b, "jet_mul");
  return Jet2n(a.basepoint(), a.series() * b.series());
}

Jet2n jet_diff(const Jet2n& a, const MultiIndex& alpha, const MultiIndex& beta) {
  if (alpha.size() != a.dim() || beta.size() != a.dim())
    throw std::invalid_argument("jet_diff: multi-index length differs from the jet dimension");
  return Jet2n(a.basepoint(), a.series().derivative(concat(alpha, beta)));
}

Complex jet_eval(const Jet2n& a, const Point& z) {
  if (static_cast<int>(z.size()) != a.dim())
    throw std::invalid_argument("jet_eval: point dimension mismatch");
  Point w(2 * a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    w[i] = z[i] - a.basepoint()[i];
    w[a.dim() + i] = conj(w[i]);
  }
  return a.series().evaluate(w);
}

Complex jet_eval_polarized(const Jet2n& a, const Point& z, const Point& w) {
  if (static_cast<int>(z.size()) != a.dim() || static_cast<int>(w.size()) != a.dim())
    throw std::invalid_argument("jet_eval_polarized: point dimension mismatch");
  Point p(2 * a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    p[i] = z[i] - a.basepoint()[i];
    p[a.dim() + i] = w[i] - conj(a.basepoint()[i]);
  }
  return a.series().evaluate(p);
}

Jet2n jet_shift_antidiag(const Jet2n& a) {
  return Jet2n(a.basepoint(), a.series().sign_flipped(a.dim(), 2 * a.dim()));
}

}  // namespace bergman
