#include "bergman/oracle.hpp"

#include "bergman/csv.hpp"
#include "bergman/summation.hpp"

#include <Eigen/Dense>

#include <algorithm>

namespace bergman {

namespace {

namespace mp = boost::multiprecision;

Real tolerance_of(const OracleOptions& opt) {
  return opt.tolerance ? *opt.tolerance : default_quadrature_options().rel_tol;
}

void require_radial(const WeightModel& w, const char* what) {
  if (!w.is_radial())
    throw std::invalid_argument(std::string(what) + " needs a radial weight in one variable centered at 0, got '" +
                                w.spec() + "'");
}

// upper bound for int_R^inf r^{2j+1} e^{-2 a r^2 / h} dr
Real gaussian_tail(int j, const Real& a, const Real& h, const Real& R) {
  const Real s = j + 1;
  const Real X = 2 * a * R * R / h;
  if (X <= s) return Real(-1);  // bound not applicable
  // Gamma(s, X) <= X^{s-1} e^{-X} / (1 - (s-1)/X)
  Real gamma_upper = mp::pow(X, s - 1) * mp::exp(-X) / (1 - (s - 1) / X);
  return mp::pow(h / (2 * a), s) * gamma_upper / 2;
}

// Householder least squares; A is rows x cols, column major per row vector
std::vector<Real> least_squares(std::vector<std::vector<Real>> A, std::vector<Real> b, Real& residual_norm) {
  const std::size_t rows = A.size(), cols = A[0].size();
  for (std::size_t k = 0; k < cols; ++k) {
    Real norm = 0;
    for (std::size_t i = k; i < rows; ++i) norm += A[i][k] * A[i][k];
    norm = mp::sqrt(norm);
    if (norm.is_zero()) throw std::domain_error("least squares: rank deficient design");
    if (A[k][k] > 0) norm = -norm;
    std::vector<Real> v(rows - k);
    for (std::size_t i = k; i < rows; ++i) v[i - k] = A[i][k];
    v[0] -= norm;
    Real vv = 0;
    for (const auto& x : v) vv += x * x;
    if (vv.is_zero()) continue;
    for (std::size_t c = k; c < cols; ++c) {
      Real dot = 0;
      for (std::size_t i = k; i < rows; ++i) dot += v[i - k] * A[i][c];
      dot = 2 * dot / vv;
      for (std::size_t i = k; i < rows; ++i) A[i][c] -= dot * v[i - k];
    }
    Real dot = 0;
    for (std::size_t i = k; i < rows; ++i) dot += v[i - k] * b[i];
    dot = 2 * dot / vv;
    for (std::size_t i = k; i < rows; ++i) b[i] -= dot * v[i - k];
  }
  std::vector<Real> x(cols);
  for (std::size_t k = cols; k-- > 0;) {
    Real s = b[k];
    for (std::size_t c = k + 1; c < cols; ++c) s -= A[k][c] * x[c];
    x[k] = s / A[k][k];
  }
  residual_norm = 0;
  for (std::size_t i = cols; i < rows; ++i) residual_norm += b[i] * b[i];
  residual_norm = mp::sqrt(residual_norm);
  return x;
}

}  // namespace

Real default_series_disc() { return Real("0.1"); }

Real RadialProfile::value(const Real& r) const {
  const Real r2 = r * r;
  Real v = 0;
  for (std::size_t j = c.size(); j-- > 0;) v = v * r2 + c[j];
  return v;
}

RadialProfile radial_profile(const WeightModel& weight, const OracleOptions& opt) {
  require_radial(weight, "radial_profile");
  RadialProfile p;
  if (weight.kind() == WeightKind::radial_series) {
    p.on_disc = true;
    p.disc = opt.disc_radius ? *opt.disc_radius : default_series_disc();
    int J = 0;
    if (opt.series_terms) {
      J = *opt.series_terms;
    } else {
      // keep terms while |c_j| disc^{2j} decreases
      std::vector<Real> c = weight.radial_coefficients(64);
      Real prev = -1;
      for (J = 2; J < 64; ++J) {
        Real t = mp::abs(c[J]) * mp::pow(p.disc, 2 * J);
        if (prev >= 0 && t > prev) break;
        prev = t;
      }
    }
    p.c = weight.radial_coefficients(J);
  } else {
    const int deg = std::max(weight.polynomial_degree(), 2);
    p.c = weight.radial_coefficients(deg / 2 + 1);
    if (opt.disc_radius) {
      p.on_disc = true;
      p.disc = *opt.disc_radius;
    } else {
      bool coercive = p.c.size() > 1 && p.c[1] > 0;
      for (std::size_t j = 2; j < p.c.size(); ++j)
        if (p.c[j] < 0) coercive = false;
      if (!coercive)
        throw std::invalid_argument("weight '" + weight.spec() +
                                    "' grows too slowly for whole-plane moments; configure a disc radius");
    }
  }
  if (p.on_disc) {
    // d dbar Phi = sum j^2 c_j r^{2j-2} must stay positive on the disc
    for (int k = 0; k <= 256; ++k) {
      const Real r = p.disc * k / 256;
      Real lap = 0;
      for (std::size_t j = 1; j < p.c.size(); ++j) lap += Real(j * j) * p.c[j] * mp::pow(r, 2 * static_cast<int>(j) - 2);
      if (!(lap > 0))
        throw NotPositiveDefinite("weight '" + weight.spec() + "' is not strictly plurisubharmonic on the disc of radius " +
                                      format_real(p.disc, 6),
                                  to_double(lap));
    }
  }
  return p;
}

namespace {

struct Moment {
  Real I, error, radius, cutoff;
};

Moment moment(const RadialProfile& p, const Real& h, int j, const Real& tol) {
  QuadratureOptions q = default_quadrature_options();
  q.rel_tol = tol;
  const Real c0 = p.c[0];
  const Real shift = 2 * pi() * mp::exp(-2 * c0 / h);
  auto f = [&](const Real& r) { return Complex(mp::pow(r, 2 * j + 1) * mp::exp(-2 * (p.value(r) - c0) / h)); };
  const std::string what = "moment I_" + std::to_string(j);
  if (p.on_disc) {
    auto r = integrate_or_throw(f, Real(0), p.disc, q, what);
    return {r.value.re * shift, r.error * shift, p.disc, mp::exp(-2 * (p.value(p.disc) - c0) / h)};
  }
  // whole plane: Phi - c0 >= c1 r^2 bounds the tail beyond R
  const Real a = p.c[1];
  Real X = Real(j + 1) - mp::log(tol) + 8;
  for (int attempt = 0;; ++attempt) {
    const Real R = mp::sqrt(X * h / (2 * a));
    auto r = integrate_or_throw(f, Real(0), R, q, what);
    const Real tail = gaussian_tail(j, a, h, R);
    if (tail >= 0 && tail <= tol * r.value.re)
      return {r.value.re * shift, (r.error + tail) * shift, R, tail / r.value.re};
    if (attempt >= 20) throw QuadratureFailure(what + ": tail not negligible at radius " + format_real(R, 6));
    X *= Real(1.5);
  }
}

void append_moment(MomentTable& m, const RadialProfile& p, const Real& tol) {
  const int j = static_cast<int>(m.I.size());
  Moment v = moment(p, m.h, j, tol);
  if (!(v.I > 0)) throw std::logic_error("moment I_" + std::to_string(j) + " is not positive");
  m.I.push_back(v.I);
  m.error.push_back(v.error);
  m.radius.push_back(v.radius);
  m.cutoff = std::max(m.cutoff, v.cutoff);
}

}  // namespace

MomentTable moments(const WeightModel& weight, const Real& h, int J, const OracleOptions& opt) {
  if (!(h > 0)) throw std::invalid_argument("moments need h > 0");
  if (J < 0) throw std::invalid_argument("moments need J >= 0");
  const RadialProfile p = radial_profile(weight, opt);
  const Real tol = tolerance_of(opt);
  MomentTable m;
  m.h = h;
  m.on_disc = p.on_disc;
  m.cutoff = 0;
  for (int j = 0; j <= J; ++j) append_moment(m, p, tol);
  return m;
}

std::vector<int> log_convexity_violations(const MomentTable& m, const Real& rel_tol) {
  std::vector<int> bad;
  for (std::size_t j = 0; j + 2 < m.I.size(); ++j)
    if (m.I[j] * m.I[j + 2] < m.I[j + 1] * m.I[j + 1] * (1 - rel_tol)) bad.push_back(static_cast<int>(j));
  return bad;
}

std::string moments_csv(const MomentTable& m) {
  CsvTable t;
  t.header = {"j", "I_j", "err"};
  for (std::size_t j = 0; j < m.I.size(); ++j)
    t.rows.push_back({std::to_string(j), format_real(m.I[j]), format_real(m.error[j], 6)});
  return t.str();
}

KernelValue kernel_diag(const WeightModel& weight, const Real& h, const Real& x, const OracleOptions& opt) {
  if (!(h > 0)) throw std::invalid_argument("kernel_diag needs h > 0");
  const RadialProfile p = radial_profile(weight, opt);
  if (p.on_disc && !(mp::abs(x) < p.disc))
    throw std::invalid_argument("kernel point lies outside the integration disc");
  const Real tol = tolerance_of(opt);
  const Real x2 = x * x;
  KernelValue k;
  k.K = 0;
  k.quadrature_error = 0;
  k.truncation_error = 0;
  MomentTable m;
  m.h = h;
  m.on_disc = p.on_disc;
  m.cutoff = 0;
  append_moment(m, p, tol);
  // the tail after term j is at most t_{j+1}/(1-q), q = x^2 I_j / I_{j+1},
  // since q is non-increasing by log-convexity of the moments
  for (int j = 0;; ++j) {
    const Real t = mp::pow(x2, j) / m.I[j];
    k.K += t;
    k.quadrature_error += t * m.error[j] / m.I[j];
    k.terms = j + 1;
    if (x2.is_zero()) break;
    if (j + 1 >= opt.max_kernel_terms)
      throw std::runtime_error("kernel series did not converge within " + std::to_string(opt.max_kernel_terms) +
                               " terms");
    append_moment(m, p, tol);
    const Real q = x2 * m.I[j] / m.I[j + 1];
    if (q < 1) {
      const Real tail = mp::pow(x2, j + 1) / m.I[j + 1] / (1 - q);
      if (tail <= tol * k.K) {
        k.truncation_error = tail;
        break;
      }
    }
  }
  k.normalized = h * k.K * mp::exp(-2 * p.value(x) / h);
  return k;
}

ExtractedCoefficients extract_coeffs(const WeightModel& weight, const Real& x, std::vector<Real> h_grid, int M,
                                     const OracleOptions& opt, double condition_bound) {
  if (M < 0) throw std::invalid_argument("extract_coeffs needs M >= 0");
  std::sort(h_grid.begin(), h_grid.end());
  const std::size_t W = static_cast<std::size_t>(M) + 3;
  if (h_grid.size() < W)
    throw std::invalid_argument("extract_coeffs needs at least M+3 = " + std::to_string(W) + " grid points");
  ExtractedCoefficients e;
  e.h = h_grid;
  for (const Real& h : h_grid) e.values.push_back(kernel_diag(weight, h, x, opt).normalized);

  bool found = false;
  Real best_score = 0;
  double worst_condition = 0;
  for (std::size_t b = 0; b + W <= h_grid.size(); ++b) {
    const Real hmax = h_grid[b + W - 1];
    std::vector<std::vector<Real>> A(W, std::vector<Real>(M + 1));
    std::vector<Real> y(W);
    Eigen::MatrixXd Ad(W, M + 1);
    for (std::size_t i = 0; i < W; ++i) {
      const Real t = h_grid[b + i] / hmax;
      Real p = 1;
      for (int c = 0; c <= M; ++c) {
        A[i][c] = p;
        Ad(i, c) = to_double(p);
        p *= t;
      }
      y[i] = e.values[b + i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ad);
    const auto& sv = svd.singularValues();
    const double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
    worst_condition = std::max(worst_condition, cond);
    if (!(cond <= condition_bound)) continue;
    Real res;
    std::vector<Real> coef = least_squares(A, y, res);
    const Real rms = res / mp::sqrt(Real(W));
    const Real score = rms / mp::pow(hmax, M);
    if (!found || score < best_score) {
      found = true;
      best_score = score;
      e.window_begin = b;
      e.window_end = b + W;
      e.condition = cond;
      e.rms_residual = rms;
      e.a_hat.clear();
      for (int c = 0; c <= M; ++c) e.a_hat.push_back(coef[c] / mp::pow(hmax, c));
    }
  }
  if (!found)
    throw std::runtime_error("extract_coeffs: Vandermonde condition number " + std::to_string(worst_condition) +
                             " exceeds " + std::to_string(condition_bound) +
                             " on every window; shrink the h-grid ratio or lower M");
  return e;
}

namespace {

// n = 1 jet in (z, conj z) regrouped by angular frequency p - q, so a ring
// |z| = r costs one pass over the frequencies per angle
class RingJet {
 public:
  explicit RingJet(const Jet2n& j) {
    const PowerSeries& s = j.series();
    deg_ = std::max(s.order(), 0);
    for (std::size_t r = 0; r < s.size(); ++r) {
      const Complex c = s.get(r);
      if (c.is_zero()) continue;
      const MultiIndex e = s.basis().monomial(r);
      terms_.push_back({e[0] - e[1], e[0] + e[1], c});
    }
  }
  // coefficients of e^{ik theta}, k = -deg..deg with deg >= degree()
  std::vector<Complex> at_radius(const Real& r, int deg) const {
    std::vector<Real> rp(deg_ + 1);
    rp[0] = 1;
    for (int d = 1; d <= deg_; ++d) rp[d] = rp[d - 1] * r;
    std::vector<Complex> fk(2 * deg + 1);
    for (const auto& t : terms_) fk[t.k + deg] += t.c * rp[t.d];
    return fk;
  }
  int degree() const { return deg_; }

 private:
  struct Term {
    int k, d;
    Complex c;
  };
  int deg_ = 0;
  std::vector<Term> terms_;
};

Complex eval_frequencies(const std::vector<Complex>& fk, const std::vector<Complex>& up, int deg) {
  Complex s = fk[deg];
  for (int k = 1; k <= deg; ++k) {
    s.fma(fk[deg + k], up[k]);
    s.fma(fk[deg - k], conj(up[k]));
  }
  return s;
}

}  // namespace

FioResult fio_residual(const WeightModel& weight, const CoefficientTable& table, const Real& h,
                       std::optional<int> terms, std::optional<Real> tolerance) {
  if (weight.dim() != 1) throw std::invalid_argument("fio_residual is implemented for n = 1");
  if (!(h > 0)) throw std::invalid_argument("fio_residual needs h > 0");
  if (table.entries.empty()) throw std::invalid_argument("fio_residual needs a non-empty table");
  const Point x0 = weight.basepoint();
  if (!same_point(table.entries[0].basepoint(), x0))
    throw std::invalid_argument("table basepoint differs from the weight basepoint");
  FioResult out;
  const Real tol = tolerance ? *tolerance : default_quadrature_options().rel_tol;
  const auto a = table.diagonal_values();
  out.n0 = optimal_truncation(estimate_gevrey_constant(a, symbol_sigma(weight)), symbol_sigma(weight), h);
  out.terms = terms ? *terms : static_cast<int>(std::min<long>(out.n0, table.M + 1));
  if (out.terms > table.M + 1) throw std::invalid_argument("fio_residual: more terms requested than the table holds");

  int order = table.budget;
  if (weight.max_order() >= 0) order = std::min(order, weight.max_order());
  const Jet2n f = hs_phase(weight, std::max(order, 2)).f;

  // a(x0 + z, conj x0 - conj z; h) as one jet
  int amp_order = 0;
  for (int m = 0; m < out.terms; ++m) amp_order = std::max(amp_order, table.entries[m].order());
  PowerSeries amp(2, amp_order);
  Real hp = 1;
  for (int m = 0; m < out.terms; ++m) {
    const Jet2n shifted = jet_shift_antidiag(table.entries[m]);
    const PowerSeries& s = shifted.series();
    for (std::size_t r = 0; r < s.size(); ++r) {
      const Complex c = s.get(r);
      if (!c.is_zero()) amp.add_to_coeff(s.basis().monomial(r), c * hp);
    }
    if (table.entries[m].order() < 2 * (out.terms - 1 - m) + 1)
      out.warnings.push_back("a_" + std::to_string(m) + " jet of order " + std::to_string(table.entries[m].order()) +
                             " limits the amplitude accuracy at " + std::to_string(out.terms) + " terms");
    hp *= h;
  }
  const Jet2n a_jet(x0, amp);
  const Complex ih = Complex(Real(0), 1 / h);
  auto F = [&](const Real& r, const Real& theta) {
    Point z{x0[0] + Complex(r * mp::cos(theta), r * mp::sin(theta))};
    return exp(ih * jet_eval(f, z)) * jet_eval(a_jet, z);
  };

  // r0 starts from the Gaussian decay e^{-2 H r^2/h}; it grows while the
  // integrand still decays monotonically and is not yet negligible. Whatever
  // is left at r0 is reported as a cutoff contribution.
  const double hmin = mixed_hessian(weight).min_eigenvalue;
  const Real scale = std::max(abs(F(Real(0), Real(0))), Real(1));
  auto edge_at = [&](const Real& r) -> Real {  // -1 when not monotone on [r/2, r]
    Real edge = 0;
    for (int k = 0; k < 8; ++k) {
      const Real theta = pi() * k / 4;
      Real prev = -1;
      for (int s = 4; s <= 8; ++s) {
        const Real v = abs(F(r * s / 8, theta));
        if (prev >= 0 && v > prev) return Real(-1);
        prev = v;
      }
      edge = std::max(edge, prev);
    }
    return edge;
  };
  out.r0 = mp::sqrt(h * (8 - mp::log(tol)) / (2 * Real(hmin)));
  Real edge = edge_at(out.r0);
  for (int k = 0; edge < 0; ++k) {
    if (k >= 20) throw QuadratureFailure("fio_residual: integrand does not decay near z = 0");
    out.r0 *= Real(0.8);
    edge = edge_at(out.r0);
  }
  for (int k = 0; k < 10 && edge > tol * scale; ++k) {
    const Real next = edge_at(out.r0 * Real(1.25));
    if (next < 0) break;
    out.r0 *= Real(1.25);
    edge = next;
  }
  const Real cutoff = edge * pi() * out.r0 * out.r0 / h;
  if (edge > tol * scale)
    out.warnings.push_back("integrand stops decaying beyond r0 = " + format_real(out.r0, 6) +
                           "; cutoff contribution up to " + format_real(cutoff, 3));

  const Real two_pi = 2 * pi();
  const Real inner_abs = tol * scale;
  const RingJet f_ring(f), a_ring(a_jet);
  const int deg = std::max(f_ring.degree(), a_ring.degree());
  Real theta_err = 0;
  auto ring = [&](const Real& r) {
    const std::vector<Complex> fk = f_ring.at_radius(r, deg), ak = a_ring.at_radius(r, deg);
    std::vector<Complex> up(deg + 1);
    auto point = [&](const Real& theta) {
      up[0] = Complex(1);
      up[1] = Complex(mp::cos(theta), mp::sin(theta));
      for (int k = 2; k <= deg; ++k) up[k] = up[k - 1] * up[1];
      return exp(ih * eval_frequencies(fk, up, deg)) * eval_frequencies(ak, up, deg);
    };
    // periodic trapezoid in theta; each doubling only adds the new midpoints
    int n = 16;
    Complex total;
    for (int k = 0; k < n; ++k) total += point(two_pi * k / n);
    Complex prev = total * (two_pi / n);
    for (;;) {
      for (int k = 0; k < n; ++k) total += point(two_pi * (2 * k + 1) / (2 * n));
      n *= 2;
      Complex next = total * (two_pi / n);
      const Real d = abs(next - prev);
      if (d <= inner_abs) {
        theta_err = std::max(theta_err, d);
        return next * r;
      }
      if (n >= 8192) throw QuadratureFailure("fio_residual: angular quadrature did not converge");
      prev = std::move(next);
    }
  };
  QuadratureOptions q = default_quadrature_options();
  q.rel_tol = tol;
  auto res = integrate_or_throw(ring, Real(0), out.r0, q, "fio_residual");
  out.value = res.value * (1 / h);
  out.quadrature_error = (res.error + out.r0 * theta_err) / h + (edge > tol * scale ? cutoff : Real(0));
  out.residual = abs(out.value - Complex(1));
  return out;
}

}  // namespace bergman
