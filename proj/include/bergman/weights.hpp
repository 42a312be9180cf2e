#pragma once

#include "bergman/jets.hpp"
#include "bergman/numeric.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bergman {

enum class WeightKind { gaussian, polynomial, radial_series, explicit_jet };

std::string to_string(WeightKind kind);

// Raised at model construction when the mixed Hessian is not positive definite.
class NotPositiveDefinite : public std::invalid_argument {
 public:
  NotPositiveDefinite(const std::string& what, double eigenvalue)
      : std::invalid_argument(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const { return eigenvalue_; }

 private:
  double eigenvalue_;
};

// A monomial c x^alpha xbar^beta of Phi around the origin (or around the
// jet center for explicit jets). Coefficients are kept as decimal text and
// converted at the working precision on use.
struct WeightTerm {
  MultiIndex alpha;
  MultiIndex beta;
  std::string re;
  std::string im = "0";
};

class WeightModel {
 public:
  // Phi = |x|^2/2
  static WeightModel gaussian(int n);
  // Phi = |x|^2/2 + sum_k c_k |x|^{2k}, given as (k, c_k) pairs
  static WeightModel radial_polynomial(int n, const std::vector<std::pair<int, std::string>>& coeffs);
  // Phi = |x|^2/2 + eps |x|^4
  static WeightModel quartic(int n, const std::string& eps);
  // Phi = |x|^2/2 + arbitrary real-symmetric monomials
  static WeightModel polynomial(int n, std::vector<WeightTerm> extra_terms, std::string label);
  // Phi = |x|^2/2 - (1/2) sum_{j>=2} j!^{2s-2} |x|^{2j}, a formal series
  static WeightModel radial_series(int n, const std::string& s);
  // Taylor data given directly at the basepoint, complete up to `order`
  static WeightModel explicit_jet(int n, std::vector<WeightTerm> terms, int order,
                                  const std::string& gevrey_s = "1");
  static WeightModel explicit_jet_from_csv(const std::string& path, std::optional<int> order,
                                           const std::string& gevrey_s = "1");

  // Parses "gaussian", "quartic:eps=0.01", "gevrey-radial:s=2",
  // "poly:r4=0.01,r6=-0.003", "explicit:file=phi.csv,order=12" with optional
  // n=<dim> and, for n = 1, x0=<re>,y0=<im> basepoint parameters.
  static WeightModel parse(const std::string& spec);

  // Returns a copy centered at another basepoint (closed-form kinds only).
  WeightModel at(const Point& basepoint) const;
  WeightModel at(const std::string& re, const std::string& im) const;

  int dim() const { return n_; }
  WeightKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  std::string spec() const;
  Point basepoint() const;
  bool centered_at_origin() const;
  // Gevrey index s of Phi (1 for real-analytic kinds)
  Real gevrey_s() const;
  const std::string& gevrey_s_text() const { return gevrey_s_; }
  // highest available jet order; -1 when unbounded
  int max_order() const;
  // polynomial degree of Phi; -1 for formal series
  int polynomial_degree() const;
  // n = 1, centered at 0, only (j,j) coefficients
  bool is_radial() const;

  Jet2n jet(int order) const;
  // radial profile c_j of Phi = sum_j c_j |x|^{2j}, j = 0..terms-1 (radial kinds only)
  std::vector<Real> radial_coefficients(int terms) const;

 private:
  WeightModel() = default;
  void certify();

  WeightKind kind_ = WeightKind::gaussian;
  int n_ = 1;
  std::string label_;
  std::vector<std::pair<int, std::string>> radial_poly_;  // (k, c_k) for c_k |x|^{2k}
  std::vector<WeightTerm> terms_;  // general monomials beyond |x|^2/2; all of them for explicit jets
  std::string radial_s_;
  std::string gevrey_s_ = "1";
  int explicit_order_ = -1;
  std::vector<std::pair<std::string, std::string>> basepoint_;  // (re, im) text
};

Jet2n weight_jet(const WeightModel& model, int order);

struct PolarizedWeight {
  Jet2n psi;  // variables (x - x0, y~ - conj x0)
  Point x0;
  Point x0_conj;

  // y~ := conj x
  Jet2n restrict_to_diagonal() const;
  // Psi(x, y~) at independent points
  Complex evaluate(const Point& x, const Point& y_tilde) const;
};

PolarizedWeight polarize(const Jet2n& phi);

struct HessianReport {
  ComplexMatrix matrix;
  double min_eigenvalue = 0;
  double max_eigenvalue = 0;
};

HessianReport mixed_hessian(const WeightModel& model);
HessianReport mixed_hessian(const Jet2n& phi);

struct HessianInverse {
  // g[i][j] = g^{i jbar} = (H^{-1})_{ji}
  ComplexMatrix g;
  Real residual;  // max |H H^{-1} - I|
  double condition = 0;
  std::vector<std::string> warnings;
};

HessianInverse hessian_inverse(const WeightModel& model, double condition_bound = 1e12);

// (alpha, beta, re, im) rows; one header line
void write_jet_csv(const Jet2n& jet, const std::string& path);
Jet2n read_jet_csv(const std::string& path, int dim_hint = 0);

}  // namespace bergman
