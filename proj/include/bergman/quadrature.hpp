#pragma once

#include "bergman/numeric.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bergman {

class QuadratureFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  Real abs_tol;  // zero: relative tolerance only
  Real rel_tol;
  int max_depth = 40;
  int initial_panels = 8;
};

// Tolerances tied to the working precision: rel_tol = 2^{-(bits - 16)}.
QuadratureOptions default_quadrature_options();

struct QuadratureResult {
  Complex value;
  Real error;  // sum of per-panel |coarse - refined|
  long evaluations = 0;
  bool converged = true;
};

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1] at the
// working precision; cached per (n, precision).
const std::vector<std::pair<Real, Real>>& gauss_legendre_rule(int n);

// Adaptive Gauss-Legendre (20 to 96 nodes, growing with the precision) with
// panel bisection. Never throws on non-convergence; callers inspect `converged`.
QuadratureResult integrate(const std::function<Complex(const Real&)>& f, const Real& a, const Real& b,
                           const QuadratureOptions& opt);

// integrate() that throws QuadratureFailure when the tolerance is not reached
QuadratureResult integrate_or_throw(const std::function<Complex(const Real&)>& f, const Real& a, const Real& b,
                                    const QuadratureOptions& opt, const std::string& what);

}  // namespace bergman
