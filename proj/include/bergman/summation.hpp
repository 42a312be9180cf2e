#pragma once

#include "bergman/recursion.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bergman {

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  std::vector<double> residuals;
};

// ordinary least squares y ~ slope * x + intercept
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// N0 = floor((C h)^{-1/sigma})
long optimal_truncation(const Real& C, const Real& sigma, const Real& h);

// C = max_m (|a_m| / m!^sigma)^{1/(m+1)}
Real estimate_gevrey_constant(const std::vector<Complex>& a, const Real& sigma);

// sigma = 2s - 1 for the weight's Gevrey index s
Real symbol_sigma(const WeightModel& weight);

struct Realization {
  Complex value;
  long n0 = 0;
  int terms = 0;  // min(N0, M + 1)
  std::vector<std::string> warnings;
};

// sum_{m < min(N0, M+1)} a_m(x0, conj x0) h^m with sigma from the table's weight
Realization realize_symbol(const CoefficientTable& table, const Real& h, const Real& C);
// partial sum of the first `terms` diagonal coefficients
Complex partial_sum(const std::vector<Complex>& a, const Real& h, int terms);

struct GevreyFit {
  double sigma = 0;
  double r2 = 0;
  std::vector<int> m;
  std::vector<double> residuals;
  std::vector<double> coefficients;  // on m log m, m, log m, 1
};

// log|a_m| ~ sigma m log m + b m + c log m + d over the nonzero a_m, m >= 1
GevreyFit fit_gevrey_order(const std::vector<Complex>& a);
GevreyFit fit_gevrey_order(const std::vector<Real>& a);

struct RemainderFit {
  bool noise_floor = false;  // too few residuals above the floor; fit skipped
  double delta = 0;
  double intercept = 0;
  double r2 = 0;
  std::vector<std::size_t> used;  // grid indices entering the fit
  // p = 1..4: residual / h^p decreases towards small h
  std::vector<bool> superpolynomial;
  std::string note;
};

// log r ~ intercept - delta h^{-1/(2s-1)} on residuals above noise_floor
RemainderFit fit_remainder(const std::vector<Real>& h, const std::vector<Real>& residuals, const Real& s,
                           const Real& noise_floor);

struct ExpansionReport {
  std::string weight;
  Real C_hat;
  Real sigma;
  double sigma_hat = 0;  // NaN when fewer than 6 usable coefficients
  std::vector<Real> h;
  std::vector<long> n0;
  std::vector<Complex> partial_sums;
  std::vector<Real> oracle;
  std::vector<Real> residuals;
  RemainderFit remainder;
  std::vector<std::string> warnings;

  std::string csv() const;  // h, N0, partial_sum_re, partial_sum_im, residual
  std::string summary_json() const;
};

// oracle[i] is h K e^{-2 Phi/h} at the table's basepoint for h[i]
ExpansionReport expansion_report(const CoefficientTable& table, const std::vector<Real>& h,
                                 const std::vector<Real>& oracle, const Real& noise_floor);

}  // namespace bergman
