#pragma once

#include "bergman/multi_index.hpp"
#include "bergman/numeric.hpp"
#include "bergman/power_series.hpp"

#include <vector>

namespace bergman {

using Point = std::vector<Complex>;

// Truncated Taylor expansion in (z, zbar) around a basepoint of C^n.
// Variables are ordered z_1..z_n, zbar_1..zbar_n in the underlying series.
class Jet2n {
 public:
  Jet2n() = default;
  Jet2n(int dim, int order);
  Jet2n(int dim, int order, Point basepoint);
  Jet2n(Point basepoint, PowerSeries series);

  int dim() const { return dim_; }
  int order() const { return series_.order(); }
  const Point& basepoint() const { return basepoint_; }
  const PowerSeries& series() const { return series_; }
  PowerSeries& series() { return series_; }

  Complex coeff(const MultiIndex& alpha, const MultiIndex& beta) const;
  void set_coeff(const MultiIndex& alpha, const MultiIndex& beta, const Complex& value);
  Complex constant_term() const { return series_.constant_term(); }

  Jet2n truncated(int order) const;

 private:
  int dim_ = 0;
  Point basepoint_;
  PowerSeries series_;
};

Jet2n jet_add(const Jet2n& a, const Jet2n& b);
Jet2n jet_sub(const Jet2n& a, const Jet2n& b);
Jet2n jet_scale(const Jet2n& a, const Complex& s);
Jet2n jet_mul(const Jet2n& a, const Jet2n& b);
Jet2n jet_diff(const Jet2n& a, const MultiIndex& alpha, const MultiIndex& beta);
Complex jet_eval(const Jet2n& a, const Point& z);
Jet2n jet_shift_antidiag(const Jet2n& a);

// Evaluates the jet at independent (z, w) offsets: sum c_{ab} (z - z0)^a (w - conj z0)^b.
Complex jet_eval_polarized(const Jet2n& a, const Point& z, const Point& w);

bool same_point(const Point& a, const Point& b);

}  // namespace bergman
