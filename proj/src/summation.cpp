#include "bergman/summation.hpp"

#include "bergman/combinatorics.hpp"
#include "bergman/csv.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bergman {

namespace {

std::vector<double> least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double& r2,
                                  std::vector<double>& residuals) {
  Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  Eigen::VectorXd res = y - X * beta;
  const double mean = y.mean();
  const double ss_tot = (y.array() - mean).square().sum();
  r2 = ss_tot > 0 ? 1 - res.squaredNorm() / ss_tot : 1;
  residuals.assign(res.data(), res.data() + res.size());
  return {beta.data(), beta.data() + beta.size()};
}

Real log_abs(const Complex& z) { return boost::multiprecision::log(abs(z)); }

}  // namespace

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit needs >= 2 paired points");
  Eigen::MatrixXd X(x.size(), 2);
  Eigen::VectorXd Y(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    X(i, 0) = x[i];
    X(i, 1) = 1;
    Y(i) = y[i];
  }
  LinearFit f;
  auto beta = least_squares(X, Y, f.r2, f.residuals);
  f.slope = beta[0];
  f.intercept = beta[1];
  return f;
}

long optimal_truncation(const Real& C, const Real& sigma, const Real& h) { return gevrey_argmin(C, sigma, h).k_c; }

Real estimate_gevrey_constant(const std::vector<Complex>& a, const Real& sigma) {
  bool any = false;
  Real best = 0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (a[m].is_zero()) continue;
    Real l = (log_abs(a[m]) - sigma * boost::multiprecision::lgamma(Real(m + 1))) / Real(m + 1);
    if (!any || l > best) best = l;
    any = true;
  }
  if (!any) throw std::invalid_argument("cannot estimate a Gevrey constant from an all-zero sequence");
  return boost::multiprecision::exp(best);
}

Real symbol_sigma(const WeightModel& weight) { return 2 * weight.gevrey_s() - 1; }

Complex partial_sum(const std::vector<Complex>& a, const Real& h, int terms) {
  Complex s;
  Real hp = 1;
  for (int m = 0; m < terms && m < static_cast<int>(a.size()); ++m) {
    s += a[m] * hp;
    hp *= h;
  }
  return s;
}

Realization realize_symbol(const CoefficientTable& table, const Real& h, const Real& C) {
  Realization r;
  r.n0 = optimal_truncation(C, symbol_sigma(table.weight), h);
  r.terms = static_cast<int>(std::min<long>(r.n0, table.M + 1));
  if (r.n0 > table.M + 1)
    r.warnings.push_back("N0 = " + std::to_string(r.n0) + " exceeds the table length M+1 = " +
                         std::to_string(table.M + 1) + " at h = " + format_real(h, 6));
  if (r.n0 == 0) r.warnings.push_back("N0 = 0 at h = " + format_real(h, 6) + "; the realization is empty");
  r.value = partial_sum(table.diagonal_values(), h, r.terms);
  return r;
}

GevreyFit fit_gevrey_order(const std::vector<Complex>& a) {
  std::vector<Real> mags;
  for (const auto& z : a) mags.push_back(abs(z));
  return fit_gevrey_order(mags);
}

GevreyFit fit_gevrey_order(const std::vector<Real>& a) {
  GevreyFit g;
  std::vector<double> y;
  for (std::size_t m = 1; m < a.size(); ++m) {
    if (a[m].is_zero()) continue;
    g.m.push_back(static_cast<int>(m));
    y.push_back(to_double(boost::multiprecision::log(boost::multiprecision::abs(a[m]))));
  }
  if (g.m.size() < 6)
    throw std::invalid_argument("fit_gevrey_order needs >= 6 nonzero coefficients with m >= 1, got " +
                                std::to_string(g.m.size()));
  Eigen::MatrixXd X(g.m.size(), 4);
  Eigen::VectorXd Y(g.m.size());
  for (std::size_t i = 0; i < g.m.size(); ++i) {
    const double m = g.m[i];
    X(i, 0) = m * std::log(m);
    X(i, 1) = m;
    X(i, 2) = std::log(m);
    X(i, 3) = 1;
    Y(i) = y[i];
  }
  g.coefficients = least_squares(X, Y, g.r2, g.residuals);
  g.sigma = g.coefficients[0];
  return g;
}

RemainderFit fit_remainder(const std::vector<Real>& h, const std::vector<Real>& residuals, const Real& s,
                           const Real& noise_floor) {
  if (h.size() != residuals.size()) throw std::invalid_argument("fit_remainder: h and residuals differ in length");
  RemainderFit f;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (residuals[i] < 0) throw std::invalid_argument("fit_remainder: negative residual");
    if (residuals[i] > noise_floor) f.used.push_back(i);
  }
  if (f.used.size() < 5) {
    f.noise_floor = true;
    f.note = std::to_string(f.used.size()) + " of " + std::to_string(h.size()) +
             " residuals above the noise floor " + format_real(noise_floor, 3) + "; fit skipped";
    return f;
  }
  std::sort(f.used.begin(), f.used.end(), [&](std::size_t a, std::size_t b) { return h[a] < h[b]; });
  const Real inv_sigma = 1 / (2 * s - 1);
  std::vector<double> x, y, lh;
  for (std::size_t i : f.used) {
    x.push_back(-to_double(boost::multiprecision::pow(h[i], -inv_sigma)));
    y.push_back(to_double(boost::multiprecision::log(residuals[i])));
    lh.push_back(to_double(boost::multiprecision::log(h[i])));
  }
  LinearFit lf = linear_fit(x, y);
  f.delta = lf.slope;
  f.intercept = lf.intercept;
  f.r2 = lf.r2;
  for (int p = 1; p <= 4; ++p) {
    std::vector<double> q;
    for (std::size_t i = 0; i < y.size(); ++i) q.push_back(y[i] - p * lh[i]);
    const bool min_at_smallest_h = std::min_element(q.begin(), q.end()) == q.begin();
    f.superpolynomial.push_back(min_at_smallest_h && linear_fit(lh, q).slope > 0);
  }
  return f;
}

std::string ExpansionReport::csv() const {
  CsvTable t;
  t.header = {"h", "N0", "partial_sum_re", "partial_sum_im", "residual"};
  for (std::size_t i = 0; i < h.size(); ++i)
    t.rows.push_back({format_real(h[i]), std::to_string(n0[i]), format_real(partial_sums[i].re),
                      format_real(partial_sums[i].im), format_real(residuals[i])});
  return t.str();
}

std::string ExpansionReport::summary_json() const {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["weight"] = weight;
  j["C_hat"] = format_real(C_hat, 12);
  j["sigma"] = format_real(sigma, 12);
  j["sigma_hat"] = num(sigma_hat);
  j["remainder"] = {{"noise_floor", remainder.noise_floor},
                    {"delta_hat", num(remainder.delta)},
                    {"r2", num(remainder.r2)},
                    {"points", remainder.used.size()},
                    {"superpolynomial_p1_to_p4", remainder.superpolynomial},
                    {"note", remainder.note}};
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

ExpansionReport expansion_report(const CoefficientTable& table, const std::vector<Real>& h,
                                 const std::vector<Real>& oracle, const Real& noise_floor) {
  if (h.size() != oracle.size()) throw std::invalid_argument("expansion_report: h and oracle differ in length");
  ExpansionReport r;
  r.weight = table.weight.spec();
  r.sigma = symbol_sigma(table.weight);
  const auto a = table.diagonal_values();
  r.C_hat = estimate_gevrey_constant(a, r.sigma);
  try {
    r.sigma_hat = fit_gevrey_order(a).sigma;
  } catch (const std::invalid_argument&) {
    r.sigma_hat = std::numeric_limits<double>::quiet_NaN();
  }
  r.h = h;
  for (std::size_t i = 0; i < h.size(); ++i) {
    Realization z = realize_symbol(table, h[i], r.C_hat);
    r.n0.push_back(z.n0);
    r.partial_sums.push_back(z.value);
    r.oracle.push_back(oracle[i]);
    r.residuals.push_back(abs(z.value - Complex(oracle[i])));
    r.warnings.insert(r.warnings.end(), z.warnings.begin(), z.warnings.end());
  }
  r.remainder = fit_remainder(r.h, r.residuals, table.weight.gevrey_s(), noise_floor);
  return r;
}

}  // namespace bergman
