#include "bergman/stationary_phase.hpp"

#include "bergman/summation.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace bergman {

namespace {

void check_im_positive(const ComplexMatrix& A, const char* what) {
  const int d = static_cast<int>(A.size());
  Eigen::MatrixXd im(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (A[i].size() != A.size()) throw std::invalid_argument(std::string(what) + ": matrix is not square");
      if (!(A[i][j] == A[j][i])) throw std::invalid_argument(std::string(what) + ": matrix is not symmetric");
      im(i, j) = to_double(A[i][j].im);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(im);
  if (!(es.eigenvalues().minCoeff() > 0))
    throw std::invalid_argument(std::string(what) + ": Im A is not positive definite (smallest eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()) + ")");
}

// (sum_ij B_ij xi_i xi_j)^nu as a series of order 2 nu
PowerSeries quadratic_form_power(const ComplexMatrix& B, int nu) {
  const int d = static_cast<int>(B.size());
  PowerSeries q(d, 2 * nu);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      MultiIndex e(d);
      e[i] += 1;
      e[j] += 1;
      if (2 * nu >= 2) q.add_to_coeff(e, B[i][j]);
    }
  PowerSeries p = PowerSeries::constant(d, 2 * nu, Complex(1));
  for (int k = 0; k < nu; ++k) p = p * q;
  return p;
}

// (B d.d)^nu P at 0 for the degree-2nu part of P
Complex contract(const PowerSeries& op_pow, const PowerSeries& P, int nu) {
  Complex s;
  const MonomialBasis& b = op_pow.basis();
  for (std::size_t r = b.degree_offset(2 * nu); r < b.size(); ++r) {
    const Complex q = op_pow.get(r);
    if (q.is_zero()) continue;
    const MultiIndex& alpha = b.monomial(r);
    const Complex c = P.coeff(alpha);
    if (c.is_zero()) continue;
    s += q * c * alpha.factorial();
  }
  return s;
}

Complex det_over_2pi_i(const ComplexMatrix& M) {
  const int d = static_cast<int>(M.size());
  Complex scale = Complex(Real(0), 2 * pi());
  return determinant(M) / pow(scale, d);
}

Complex eval_real(const PowerSeries& s, const std::vector<Real>& x) {
  std::vector<Complex> p;
  for (const auto& v : x) p.emplace_back(v);
  return s.evaluate(p);
}

}  // namespace

PhaseModel PhaseModel::make(PowerSeries f, PowerSeries u) {
  PhaseModel p;
  p.dim = f.nvars();
  if (u.nvars() != p.dim) throw std::invalid_argument("phase and amplitude jets have different dimensions");
  if (f.order() < 2) throw std::invalid_argument("phase jet must have order >= 2");
  if (!f.get(0).is_zero()) throw std::invalid_argument("phase must vanish at x0");
  for (int i = 0; i < p.dim; ++i)
    if (!f.coeff(MultiIndex::unit(p.dim, i)).is_zero())
      throw std::invalid_argument("phase must be critical at x0");
  p.hessian.assign(p.dim, std::vector<Complex>(p.dim));
  for (int i = 0; i < p.dim; ++i)
    for (int j = 0; j < p.dim; ++j) {
      MultiIndex e(p.dim);
      e[i] += 1;
      e[j] += 1;
      p.hessian[i][j] = f.coeff(e) * (i == j ? Real(2) : Real(1));
    }
  check_im_positive(p.hessian, "phase Hessian");
  p.g = f;
  const MonomialBasis& b = f.basis();
  for (std::size_t r = b.degree_offset(2); r < b.degree_offset(3) && r < b.size(); ++r) p.g.at(r) = Complex();
  p.f = std::move(f);
  p.u = std::move(u);
  return p;
}

Complex gaussian_prefactor(const ComplexMatrix& A) {
  check_im_positive(A, "gaussian_prefactor");
  const int d = static_cast<int>(A.size());
  auto path = [&](const Real& t) {
    ComplexMatrix M = A;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        M[i][j] = A[i][j] * t;
        if (i == j) M[i][j] += Complex(Real(0), 1 - t);
      }
    return det_over_2pi_i(M);
  };
  // sqrt(det) tracked along the segment; steps subdivide until the argument
  // of det moves by less than 1/2 per step
  Real t = 0;
  Complex D = path(t);
  Complex root = sqrt(D);
  Real step = Real(1) / 16;
  while (t < 1) {
    Real t1 = t + step;
    if (t1 > 1) t1 = 1;
    Complex D1 = path(t1);
    if (boost::multiprecision::abs(arg(D1 / D)) > Real(0.5)) {
      step /= 2;
      if (step < Real(1e-12)) throw std::domain_error("gaussian_prefactor: determinant vanishes on the path");
      continue;
    }
    Complex r1 = sqrt(D1);
    if (abs(r1 - root) > abs(r1 + root)) r1 = -r1;
    t = t1;
    D = D1;
    root = r1;
  }
  return Complex(1) / root;
}

Complex gaussian_moment(const ComplexMatrix& A, const PowerSeries& P) {
  const int d = static_cast<int>(A.size());
  if (P.nvars() != d) throw std::invalid_argument("gaussian_moment: polynomial dimension mismatch");
  int m = -1;
  const MonomialBasis& b = P.basis();
  for (std::size_t r = 0; r < P.size(); ++r) {
    if (P.get(r).is_zero()) continue;
    if (m >= 0 && b.degree(r) != m) throw std::invalid_argument("gaussian_moment: polynomial is not homogeneous");
    m = b.degree(r);
  }
  const Complex pref = gaussian_prefactor(A);
  if (m < 0 || m % 2) return Complex();
  const int l = m / 2;
  ComplexMatrix B = inverse(A);
  for (auto& row : B)
    for (auto& v : row) v *= imag_unit();
  Complex c = contract(quadratic_form_power(B, l), P, l);
  return pref * c / (boost::multiprecision::pow(Real(2), l) * factorial(static_cast<unsigned>(l)));
}

Complex lj_apply(const PhaseModel& phase, int j) {
  if (j < 0) throw std::invalid_argument("lj_apply needs j >= 0");
  if (phase.u.order() < 2 * j || (j > 0 && phase.f.order() < 2 * j + 2))
    throw JetBudgetExhausted("L_" + std::to_string(j) + " needs phase jets of order " + std::to_string(2 * j + 2) +
                             " and amplitude jets of order " + std::to_string(2 * j) + "; have " +
                             std::to_string(phase.f.order()) + " and " + std::to_string(phase.u.order()));
  const int d = phase.dim;
  const ComplexMatrix Hinv = inverse(phase.hessian);
  Complex total;
  for (int mu = 0; mu <= 2 * j; ++mu) {
    const int nu = j + mu;
    const int order = 2 * nu;
    PowerSeries g = phase.g.truncated(std::min(order, phase.g.order()));
    PowerSeries prod = phase.u.truncated(std::min(order, phase.u.order()));
    PowerSeries P(d, order);
    P += prod;
    for (int k = 0; k < mu; ++k) {
      PowerSeries next(d, order);
      next.add_product(P, g);
      P = std::move(next);
    }
    Complex c = contract(quadratic_form_power(Hinv, nu), P, nu);
    if (c.is_zero()) continue;
    Real denom = boost::multiprecision::pow(Real(2), nu) * factorial(static_cast<unsigned>(mu)) *
                 factorial(static_cast<unsigned>(nu));
    total += i_pow(mu + nu) * c / denom;
  }
  return total;
}

SpExpansion sp_expand(const PhaseModel& phase, int k, const Real& h) {
  if (k < 1) throw std::invalid_argument("sp_expand needs k >= 1");
  SpExpansion e;
  const Complex pref = gaussian_prefactor(phase.hessian) * boost::multiprecision::pow(h, Real(phase.dim) / 2);
  Real hp = 1;
  for (int j = 0; j < k; ++j) {
    e.lj.push_back(lj_apply(phase, j));
    e.terms.push_back(pref * e.lj.back() * hp);
    e.value += e.terms.back();
    hp *= h;
  }
  return e;
}

QuadratureReference quadrature_reference(const PhaseModel& phase, const Real& h, std::optional<Real> radius,
                                         std::optional<Real> rel_tol) {
  const int d = phase.dim;
  if (d < 1 || d > 2) throw std::invalid_argument("quadrature_reference supports d = 1 or 2");
  if (!(h > 0)) throw std::invalid_argument("quadrature_reference needs h > 0");
  QuadratureOptions opt = default_quadrature_options();
  if (rel_tol) opt.rel_tol = *rel_tol;
  QuadratureReference ref;
  if (radius) {
    ref.radius = *radius;
  } else {
    Eigen::MatrixXd im(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) im(i, j) = to_double(phase.hessian[i][j].im);
    const double lambda = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(im).eigenvalues().minCoeff();
    const Real L = 32 * boost::multiprecision::log(Real(2)) - boost::multiprecision::log(opt.rel_tol);
    ref.radius = boost::multiprecision::sqrt(2 * h * L / Real(lambda));
  }
  const Complex ih = Complex(Real(0), 1 / h);
  auto integrand = [&](const std::vector<Real>& x) {
    return exp(ih * eval_real(phase.f, x)) * eval_real(phase.u, x);
  };
  // boundary check: the Gaussian factor times the amplitude must be negligible
  Real edge = 0;
  for (int s = -1; s <= 1; s += 2)
    for (int i = 0; i < d; ++i) {
      std::vector<Real> x(d, Real(0));
      x[i] = ref.radius * s;
      edge = std::max(edge, Real(abs(exp(ih * eval_real(phase.f, x))) * std::max(Real(1), abs(eval_real(phase.u, x)))));
    }
  if (edge > opt.rel_tol)
    throw QuadratureFailure("quadrature_reference: integrand is not negligible at radius " +
                            format_real(ref.radius, 6));
  if (d == 1) {
    auto r = integrate_or_throw([&](const Real& x) { return integrand({x}); }, -ref.radius, ref.radius, opt,
                                "quadrature_reference");
    ref.value = r.value;
    ref.error = r.error;
    return ref;
  }
  // inner integrals share one absolute tolerance set by the central slice
  auto slice = [&](const Real& x1, const QuadratureOptions& o) {
    return integrate_or_throw([&](const Real& x2) { return integrand({x1, x2}); }, -ref.radius, ref.radius, o,
                              "quadrature_reference (inner)");
  };
  QuadratureOptions inner = opt;
  inner.abs_tol = opt.rel_tol * std::max(abs(slice(Real(0), opt).value), opt.rel_tol);
  inner.rel_tol = 0;
  inner.initial_panels = 2;
  Real inner_err = 0;
  auto r = integrate_or_throw(
      [&](const Real& x1) {
        auto in = slice(x1, inner);
        inner_err = std::max(inner_err, in.error);
        return in.value;
      },
      -ref.radius, ref.radius, opt, "quadrature_reference");
  ref.value = r.value;
  ref.error = r.error + 2 * ref.radius * inner_err;
  return ref;
}

std::vector<SpRemainderRow> sp_remainder_table(const PhaseModel& phase, const std::vector<Real>& h_grid,
                                               int k_max, std::optional<Real> rel_tol) {
  std::vector<SpRemainderRow> rows;
  for (const Real& h : h_grid) {
    const QuadratureReference ref = quadrature_reference(phase, h, std::nullopt, rel_tol);
    const SpExpansion e = sp_expand(phase, k_max, h);
    Complex partial;
    for (int k = 1; k <= k_max; ++k) {
      partial += e.terms[k - 1];
      rows.push_back({h, k, partial, ref.value, abs(partial - ref.value)});
    }
  }
  return rows;
}

std::vector<SpSlope> sp_remainder_slopes(const std::vector<SpRemainderRow>& rows, int dim, int k_max) {
  std::vector<SpSlope> out;
  for (int k = 1; k <= k_max; ++k) {
    std::vector<double> x, y;
    for (const auto& r : rows)
      if (r.k == k && r.error > 0) {
        x.push_back(to_double(boost::multiprecision::log(r.h)));
        y.push_back(to_double(boost::multiprecision::log(r.error)));
      }
    SpSlope s{k, std::nan(""), k + dim / 2.0, std::nan("")};
    if (x.size() >= 2) {
      LinearFit f = linear_fit(x, y);
      s.slope = f.slope;
      s.r2 = f.r2;
    }
    out.push_back(s);
  }
  return out;
}

PhaseModel cubic_test_phase(int dim, const Real& c, int order) {
  PowerSeries f(dim, order), u(dim, order);
  for (int i = 0; i < dim; ++i) {
    MultiIndex sq(dim), cube(dim);
    sq[i] = 2;
    cube[i] = 3;
    f.set_coeff(sq, Complex(Real(0), Real(0.5)));
    if (order >= 3) f.set_coeff(cube, Complex(c));
  }
  u.set_coeff(MultiIndex(dim), Complex(1));
  if (order >= 1) u.set_coeff(MultiIndex::unit(dim, 0), Complex(Real(0.5)));
  return PhaseModel::make(f, u);
}

}  // namespace bergman
