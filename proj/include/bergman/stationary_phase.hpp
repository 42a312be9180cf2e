#pragma once

#include "bergman/power_series.hpp"
#include "bergman/quadrature.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace bergman {

// Phase f and amplitude u as jets in real coordinates x - x0 (d variables).
struct PhaseModel {
  int dim = 0;
  PowerSeries f;
  PowerSeries u;
  ComplexMatrix hessian;  // f''(x0)
  PowerSeries g;          // f minus its quadratic part

  // Checks f(x0) = 0, f'(x0) = 0 and Im f''(x0) > 0; throws std::invalid_argument.
  static PhaseModel make(PowerSeries f, PowerSeries u);
};

// Raised when a jet is too short for the requested L_j.
class JetBudgetExhausted : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// det(A / 2 pi i)^{-1/2} on the branch continued from A = iI along (1-t) iI + t A.
Complex gaussian_prefactor(const ComplexMatrix& A);

// Integral of e^{i A x.x / 2} P(x) over R^d for a homogeneous polynomial P.
Complex gaussian_moment(const ComplexMatrix& A, const PowerSeries& P);

// L_j u at x0.
Complex lj_apply(const PhaseModel& phase, int j);

struct SpExpansion {
  Complex value;
  std::vector<Complex> lj;     // L_j u, j < k
  std::vector<Complex> terms;  // prefactor * h^{j + d/2} L_j u
};

SpExpansion sp_expand(const PhaseModel& phase, int k, const Real& h);

struct QuadratureReference {
  Complex value;
  Real error;
  Real radius;
};

// Integral of e^{i f/h} u over the box |x_i| <= radius (d <= 2). The default
// radius makes the Gaussian factor negligible at the working precision; the
// default relative tolerance is the one of default_quadrature_options().
QuadratureReference quadrature_reference(const PhaseModel& phase, const Real& h,
                                         std::optional<Real> radius = std::nullopt,
                                         std::optional<Real> rel_tol = std::nullopt);

struct SpRemainderRow {
  Real h;
  int k;
  Complex value;
  Complex reference;
  Real error;
};

struct SpSlope {
  int k;
  double slope;
  double expected;  // k + d/2
  double r2;
};

std::vector<SpRemainderRow> sp_remainder_table(const PhaseModel& phase, const std::vector<Real>& h_grid,
                                               int k_max, std::optional<Real> rel_tol = std::nullopt);
std::vector<SpSlope> sp_remainder_slopes(const std::vector<SpRemainderRow>& rows, int dim, int k_max);

// f = i|x|^2/2 + c (x_1^3 + ... ), u = 1 + x_1 / 2
PhaseModel cubic_test_phase(int dim, const Real& c, int order);

}  // namespace bergman
