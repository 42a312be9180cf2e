#include "bergman/weights.hpp"

#include "bergman/csv.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <map>
#include <sstream>

namespace bergman {

namespace {

struct NumTerm {
  MultiIndex alpha;
  MultiIndex beta;
  Complex c;
};

Complex term_value(const WeightTerm& t) {
  return Complex(real_from_string(t.re), real_from_string(t.im.empty() ? "0" : t.im));
}

// monomials x^g xbar^g of |x|^{2j}, with multinomial weights j!/g!
void add_radial_power(int n, int j, const Complex& c, std::vector<NumTerm>& out) {
  auto basis = monomial_basis(n, j);
  for (std::size_t r = basis->degree_offset(j); r < basis->size(); ++r) {
    const MultiIndex& g = basis->monomial(r);
    out.push_back({g, g, c * (factorial(static_cast<unsigned>(j)) / g.factorial())});
  }
}

void check_symmetric_terms(int n, const std::vector<WeightTerm>& terms) {
  std::map<std::pair<MultiIndex, MultiIndex>, Complex> seen;
  for (const auto& t : terms) {
    if (t.alpha.size() != n || t.beta.size() != n)
      throw std::invalid_argument("weight term has multi-indices of the wrong length");
    seen[{t.alpha, t.beta}] += term_value(t);
  }
  for (const auto& [key, c] : seen) {
    auto it = seen.find({key.second, key.first});
    Complex mirror = it == seen.end() ? Complex() : it->second;
    Real scale = std::max(Real(1), abs(c));
    if (abs(c - conj(mirror)) > scale * Real("1e-30"))
      throw std::invalid_argument("weight terms are not real-valued: coefficient " +
                                  key.first.to_string() + key.second.to_string() +
                                  " does not match the conjugate of its mirror");
  }
}

std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("weight parameter '" + item + "' lacks '='");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  int x = 0;
  try {
    x = std::stoi(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size()) throw std::invalid_argument("parameter " + key + " expects an integer, got '" + v + "'");
  return x;
}

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  const int n = static_cast<int>(m.size());
  Eigen::MatrixXcd e(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e(i, j) = {to_double(m[i][j].re), to_double(m[i][j].im)};
  return e;
}

}  // namespace

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::gaussian: return "gaussian";
    case WeightKind::polynomial: return "polynomial-perturbation";
    case WeightKind::radial_series: return "radial-series";
    case WeightKind::explicit_jet: return "explicit-jet";
  }
  return "unknown";
}

WeightModel WeightModel::gaussian(int n) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  WeightModel w;
  w.kind_ = WeightKind::gaussian;
  w.n_ = n;
  w.label_ = "gaussian";
  w.basepoint_.assign(n, {"0", "0"});
  w.certify();
  return w;
}

WeightModel WeightModel::radial_polynomial(int n, const std::vector<std::pair<int, std::string>>& coeffs) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  std::string label = "poly";
  for (const auto& [k, c] : coeffs) {
    if (k < 1) throw std::invalid_argument("radial power must be |x|^{2k} with k >= 1");
    real_from_string(c);
    label += (label == "poly" ? ":" : ",") + std::string("r") + std::to_string(2 * k) + "=" + c;
  }
  WeightModel w;
  w.kind_ = WeightKind::polynomial;
  w.n_ = n;
  w.label_ = label;
  w.basepoint_.assign(n, {"0", "0"});
  w.radial_poly_ = coeffs;
  w.certify();
  return w;
}

WeightModel WeightModel::quartic(int n, const std::string& eps) {
  WeightModel w = radial_polynomial(n, {{2, eps}});
  w.label_ = "quartic:eps=" + eps;
  return w;
}

WeightModel WeightModel::polynomial(int n, std::vector<WeightTerm> extra_terms, std::string label) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  check_symmetric_terms(n, extra_terms);
  WeightModel w;
  w.kind_ = WeightKind::polynomial;
  w.n_ = n;
  w.label_ = std::move(label);
  w.basepoint_.assign(n, {"0", "0"});
  w.terms_ = std::move(extra_terms);
  w.certify();
  return w;
}

WeightModel WeightModel::radial_series(int n, const std::string& s) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  if (real_from_string(s) < 1) throw std::invalid_argument("Gevrey index s must be >= 1");
  WeightModel w;
  w.kind_ = WeightKind::radial_series;
  w.n_ = n;
  w.label_ = "gevrey-radial:s=" + s;
  w.radial_s_ = s;
  w.gevrey_s_ = s;
  w.basepoint_.assign(n, {"0", "0"});
  w.certify();
  return w;
}

WeightModel WeightModel::explicit_jet(int n, std::vector<WeightTerm> terms, int order,
                                      const std::string& gevrey_s) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  if (order < 2) throw std::invalid_argument("explicit jet must be given at least to order 2");
  for (const auto& t : terms)
    if (t.alpha.order() + t.beta.order() > order)
      throw std::invalid_argument("explicit jet term " + t.alpha.to_string() + t.beta.to_string() +
                                  " exceeds the declared order");
  check_symmetric_terms(n, terms);
  WeightModel w;
  w.kind_ = WeightKind::explicit_jet;
  w.n_ = n;
  w.label_ = "explicit";
  w.terms_ = std::move(terms);
  w.explicit_order_ = order;
  w.gevrey_s_ = gevrey_s;
  w.basepoint_.assign(n, {"0", "0"});
  w.certify();
  return w;
}

WeightModel WeightModel::explicit_jet_from_csv(const std::string& path, std::optional<int> order,
                                               const std::string& gevrey_s) {
  CsvTable t = read_csv_file(path);
  const int cols = static_cast<int>(t.header.size());
  if (cols < 4 || (cols - 2) % 2 != 0)
    throw std::invalid_argument("explicit jet CSV must have columns alpha..., beta..., re, im");
  const int n = (cols - 2) / 2;
  std::vector<WeightTerm> terms;
  int max_deg = 0;
  for (const auto& row : t.rows) {
    std::vector<int> a, b;
    for (int i = 0; i < n; ++i) a.push_back(parse_int("alpha", row[i]));
    for (int i = 0; i < n; ++i) b.push_back(parse_int("beta", row[n + i]));
    WeightTerm term{MultiIndex(a), MultiIndex(b), row[2 * n], row[2 * n + 1]};
    real_from_string(term.re);
    real_from_string(term.im);
    max_deg = std::max(max_deg, term.alpha.order() + term.beta.order());
    terms.push_back(std::move(term));
  }
  WeightModel w = explicit_jet(n, std::move(terms), order.value_or(max_deg), gevrey_s);
  w.label_ = "explicit:file=" + path;
  return w;
}

WeightModel WeightModel::parse(const std::string& spec) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  auto params = parse_params(colon == std::string::npos ? "" : spec.substr(colon + 1));
  auto take = [&params](const std::string& key) -> std::optional<std::string> {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    std::string v = it->second;
    params.erase(it);
    return v;
  };
  int n = 1;
  if (auto v = take("n")) n = parse_int("n", *v);
  auto x0 = take("x0");
  auto y0 = take("y0");

  std::optional<WeightModel> w;
  if (kind == "gaussian") {
    w = gaussian(n);
  } else if (kind == "quartic") {
    auto eps = take("eps");
    w = quartic(n, eps.value_or("0.01"));
  } else if (kind == "gevrey-radial" || kind == "radial-series") {
    auto s = take("s");
    if (!s) throw std::invalid_argument("gevrey-radial weight needs s=<index>");
    w = radial_series(n, *s);
  } else if (kind == "poly" || kind == "polynomial") {
    std::vector<std::pair<int, std::string>> coeffs;
    for (auto it = params.begin(); it != params.end();) {
      if (it->first.size() > 1 && it->first[0] == 'r') {
        int p = parse_int(it->first, it->first.substr(1));
        if (p < 2 || p % 2) throw std::invalid_argument("radial power " + it->first + " must be even and >= 2");
        coeffs.emplace_back(p / 2, it->second);
        it = params.erase(it);
      } else {
        ++it;
      }
    }
    std::sort(coeffs.begin(), coeffs.end());
    w = radial_polynomial(n, coeffs);
  } else if (kind == "explicit" || kind == "explicit-jet") {
    auto file = take("file");
    if (!file) throw std::invalid_argument("explicit weight needs file=<csv>");
    std::optional<int> order;
    if (auto o = take("order")) order = parse_int("order", *o);
    auto s = take("s");
    w = explicit_jet_from_csv(*file, order, s.value_or("1"));
  } else {
    throw std::invalid_argument("unknown weight kind '" + kind + "'");
  }
  if (!params.empty())
    throw std::invalid_argument("unknown parameter '" + params.begin()->first + "' for weight " + kind);
  if (x0 || y0) {
    if (n != 1) throw std::invalid_argument("x0/y0 basepoint parameters are for n = 1 only");
    *w = w->at(x0.value_or("0"), y0.value_or("0"));
  }
  return *w;
}

WeightModel WeightModel::at(const Point& basepoint) const {
  if (static_cast<int>(basepoint.size()) != n_)
    throw std::invalid_argument("basepoint dimension does not match the weight");
  WeightModel w = *this;
  w.basepoint_.clear();
  const int digits = roundtrip_digits();
  for (const auto& z : basepoint)
    w.basepoint_.emplace_back(z.re.str(digits, std::ios_base::scientific),
                              z.im.str(digits, std::ios_base::scientific));
  if (!w.centered_at_origin()) {
    if (kind_ == WeightKind::radial_series)
      throw std::invalid_argument("radial-series weights are formal at the origin and cannot be recentered");
    if (kind_ == WeightKind::explicit_jet)
      throw std::invalid_argument("explicit jets are fixed at their own center");
  }
  w.certify();
  return w;
}

WeightModel WeightModel::at(const std::string& re, const std::string& im) const {
  if (n_ != 1) throw std::invalid_argument("scalar basepoint given for a weight on C^n, n > 1");
  WeightModel w = *this;
  w.basepoint_ = {{re, im}};
  real_from_string(re);
  real_from_string(im);
  if (!w.centered_at_origin()) {
    if (kind_ == WeightKind::radial_series)
      throw std::invalid_argument("radial-series weights are formal at the origin and cannot be recentered");
    if (kind_ == WeightKind::explicit_jet)
      throw std::invalid_argument("explicit jets are fixed at their own center");
  }
  w.certify();
  return w;
}

std::string WeightModel::spec() const {
  std::string s = label_;
  if (n_ != 1) s += (s.find(':') == std::string::npos ? ":" : ",") + std::string("n=") + std::to_string(n_);
  if (!centered_at_origin() && n_ == 1)
    s += (s.find(':') == std::string::npos ? ":" : ",") + std::string("x0=") + basepoint_[0].first +
         ",y0=" + basepoint_[0].second;
  return s;
}

Point WeightModel::basepoint() const {
  Point p;
  for (const auto& [re, im] : basepoint_) p.emplace_back(real_from_string(re), real_from_string(im));
  return p;
}

bool WeightModel::centered_at_origin() const {
  for (const auto& z : basepoint())
    if (!z.is_zero()) return false;
  return true;
}

Real WeightModel::gevrey_s() const { return real_from_string(gevrey_s_); }

int WeightModel::max_order() const { return kind_ == WeightKind::explicit_jet ? explicit_order_ : -1; }

int WeightModel::polynomial_degree() const {
  switch (kind_) {
    case WeightKind::gaussian: return 2;
    case WeightKind::radial_series: return -1;
    case WeightKind::explicit_jet: return explicit_order_;
    case WeightKind::polynomial: {
      int d = 2;
      for (const auto& rc : radial_poly_) d = std::max(d, 2 * rc.first);
      for (const auto& t : terms_) d = std::max(d, t.alpha.order() + t.beta.order());
      return d;
    }
  }
  return -1;
}

bool WeightModel::is_radial() const {
  if (n_ != 1 || !centered_at_origin()) return false;
  if (kind_ == WeightKind::gaussian || kind_ == WeightKind::radial_series) return true;
  for (const auto& t : terms_)
    if (!(t.alpha == t.beta) || !real_from_string(t.im).is_zero()) return false;
  return true;
}

Jet2n WeightModel::jet(int order) const {
  if (order < 2) throw std::invalid_argument("weight jets need order >= 2");
  Point x0 = basepoint();
  Jet2n out(n_, order, x0);
  PowerSeries& s = out.series();

  if (kind_ == WeightKind::explicit_jet) {
    if (order > explicit_order_)
      throw std::out_of_range("explicit weight jet provides coefficients only up to order " +
                              std::to_string(explicit_order_) + ", order " + std::to_string(order) +
                              " requested");
    for (const auto& t : terms_)
      if (t.alpha.order() + t.beta.order() <= order) s.add_to_coeff(concat(t.alpha, t.beta), term_value(t));
    return out;
  }

  std::vector<NumTerm> terms;
  for (int i = 0; i < n_; ++i)
    terms.push_back({MultiIndex::unit(n_, i), MultiIndex::unit(n_, i), Complex(Real("0.5"))});
  if (kind_ == WeightKind::polynomial) {
    for (const auto& [k, c] : radial_poly_) add_radial_power(n_, k, Complex(real_from_string(c)), terms);
    for (const auto& t : terms_) terms.push_back({t.alpha, t.beta, term_value(t)});
  } else if (kind_ == WeightKind::radial_series) {
    Real s2 = 2 * real_from_string(radial_s_) - 2;
    for (int j = 2; 2 * j <= order; ++j) {
      Real jf = factorial(static_cast<unsigned>(j));
      Real c = -boost::multiprecision::pow(jf, s2) / 2;
      add_radial_power(n_, j, Complex(c), terms);
    }
  }

  if (centered_at_origin()) {
    for (const auto& t : terms)
      if (t.alpha.order() + t.beta.order() <= order) s.add_to_coeff(concat(t.alpha, t.beta), t.c);
    return out;
  }
  // expand (x0 + w)^alpha (conj x0 + wbar)^beta
  auto b = monomial_basis(n_, std::max(1, polynomial_degree()));
  for (const auto& t : terms) {
    for (std::size_t ra = 0; ra < b->size(); ++ra) {
      const MultiIndex& g = b->monomial(ra);
      if (!t.alpha.dominates(g)) continue;
      for (std::size_t rb = 0; rb < b->size(); ++rb) {
        const MultiIndex& d = b->monomial(rb);
        if (!t.beta.dominates(d) || g.order() + d.order() > order) continue;
        Complex c = t.c * (multi_binomial(t.alpha, g) * multi_binomial(t.beta, d));
        for (int i = 0; i < n_; ++i) {
          c *= pow(x0[i], t.alpha[i] - g[i]);
          c *= pow(conj(x0[i]), t.beta[i] - d[i]);
        }
        s.add_to_coeff(concat(g, d), c);
      }
    }
  }
  return out;
}

std::vector<Real> WeightModel::radial_coefficients(int terms) const {
  if (!is_radial()) throw std::invalid_argument("radial profile requested for a non-radial weight");
  std::vector<Real> c(terms, Real(0));
  if (terms > 1 && kind_ != WeightKind::explicit_jet) c[1] = Real("0.5");
  if (kind_ == WeightKind::radial_series) {
    Real s2 = 2 * real_from_string(radial_s_) - 2;
    for (int j = 2; j < terms; ++j) c[j] = -boost::multiprecision::pow(factorial(static_cast<unsigned>(j)), s2) / 2;
    return c;
  }
  for (const auto& [k, v] : radial_poly_) {
    if (k < terms) c[k] += real_from_string(v);
    else if (!real_from_string(v).is_zero())
      throw std::invalid_argument("radial profile truncated below the polynomial degree");
  }
  for (const auto& t : terms_) {
    int j = t.alpha[0];
    if (j < terms) c[j] += term_value(t).re;
    else if (!term_value(t).is_zero())
      throw std::invalid_argument("radial profile truncated below the polynomial degree");
  }
  return c;
}

void WeightModel::certify() {
  HessianReport h = mixed_hessian(jet(2));
  if (!(h.min_eigenvalue > 0)) {
    std::ostringstream os;
    os << "weight '" << spec() << "': mixed Hessian is not positive definite (smallest eigenvalue "
       << h.min_eigenvalue << ")";
    throw NotPositiveDefinite(os.str(), h.min_eigenvalue);
  }
}

Jet2n weight_jet(const WeightModel& model, int order) { return model.jet(order); }

Jet2n PolarizedWeight::restrict_to_diagonal() const { return psi; }

Complex PolarizedWeight::evaluate(const Point& x, const Point& y_tilde) const {
  return jet_eval_polarized(psi, x, y_tilde);
}

PolarizedWeight polarize(const Jet2n& phi) {
  PolarizedWeight p;
  // the coefficient of xbar^beta becomes the coefficient of y~^beta unchanged
  p.psi = phi;
  p.x0 = phi.basepoint();
  for (const auto& z : p.x0) p.x0_conj.push_back(conj(z));
  return p;
}

HessianReport mixed_hessian(const Jet2n& phi) {
  const int n = phi.dim();
  HessianReport r;
  r.matrix.assign(n, std::vector<Complex>(n));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) r.matrix[j][k] = phi.coeff(MultiIndex::unit(n, j), MultiIndex::unit(n, k));
  Real asym = max_abs_entry_difference(r.matrix, [&] {
    ComplexMatrix h(n, std::vector<Complex>(n));
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) h[j][k] = conj(r.matrix[k][j]);
    return h;
  }());
  if (asym > Real("1e-20") * (1 + abs(r.matrix[0][0])))
    throw std::invalid_argument("mixed Hessian is not Hermitian; the weight is not real-valued");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(r.matrix), Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.max_eigenvalue = es.eigenvalues().maxCoeff();
  return r;
}

HessianReport mixed_hessian(const WeightModel& model) { return mixed_hessian(model.jet(2)); }

HessianInverse hessian_inverse(const WeightModel& model, double condition_bound) {
  HessianReport h = mixed_hessian(model);
  const int n = model.dim();
  ComplexMatrix inv = inverse(h.matrix);
  HessianInverse out;
  out.residual = max_abs_entry_difference(matmul(h.matrix, inv), identity_matrix(n));
  out.condition = h.max_eigenvalue / h.min_eigenvalue;
  out.g.assign(n, std::vector<Complex>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.g[i][j] = inv[j][i];
  if (out.condition > condition_bound) {
    std::ostringstream os;
    os << "mixed Hessian condition number " << out.condition << " exceeds " << condition_bound;
    out.warnings.push_back(os.str());
  }
  return out;
}

void write_jet_csv(const Jet2n& jet, const std::string& path) {
  const int n = jet.dim();
  CsvTable t;
  for (int i = 0; i < n; ++i) t.header.push_back("alpha" + std::to_string(i + 1));
  for (int i = 0; i < n; ++i) t.header.push_back("beta" + std::to_string(i + 1));
  t.header.push_back("re");
  t.header.push_back("im");
  const PowerSeries& s = jet.series();
  for (std::size_t r = 0; r < s.size(); ++r) {
    Complex c = s.get(r);
    if (c.is_zero()) continue;
    const MultiIndex& m = s.basis().monomial(r);
    CsvRow row;
    for (int i = 0; i < 2 * n; ++i) row.push_back(std::to_string(m[i]));
    row.push_back(format_real(c.re));
    row.push_back(format_real(c.im));
    t.rows.push_back(std::move(row));
  }
  write_file_atomic(path, t.str());
}

Jet2n read_jet_csv(const std::string& path, int dim_hint) {
  CsvTable t = read_csv_file(path);
  const int cols = static_cast<int>(t.header.size());
  if (cols < 4 || (cols - 2) % 2 != 0)
    throw std::invalid_argument("jet CSV must have columns alpha..., beta..., re, im");
  const int n = (cols - 2) / 2;
  if (dim_hint && dim_hint != n) throw std::invalid_argument("jet CSV dimension mismatch");
  int order = 0;
  std::vector<std::pair<MultiIndex, Complex>> entries;
  for (const auto& row : t.rows) {
    std::vector<int> e;
    for (int i = 0; i < 2 * n; ++i) e.push_back(parse_int("exponent", row[i]));
    MultiIndex m(e);
    order = std::max(order, m.order());
    entries.emplace_back(m, Complex(real_from_string(row[2 * n]), real_from_string(row[2 * n + 1])));
  }
  Jet2n jet(n, order);
  for (const auto& [m, c] : entries) jet.series().add_to_coeff(m, c);
  return jet;
}

}  // namespace bergman
