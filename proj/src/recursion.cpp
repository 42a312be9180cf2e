#include "bergman/recursion.hpp"

#include "bergman/csv.hpp"

#include <sstream>

namespace bergman {

namespace {

// Power series in (z, zbar) on C^n whose coefficients are themselves power
// series ("fields") in the 2n polarized basepoint offsets. Holomorphic and
// antiholomorphic degrees are truncated separately.
class ZSeries {
 public:
  ZSeries(int n, int cap_a, int cap_b, int field_vars, int field_order)
      : ba_(monomial_basis(n, cap_a)), bb_(monomial_basis(n, cap_b)),
        field_vars_(field_vars), field_order_(field_order), e_(ba_->size() * bb_->size()) {}

  const MonomialBasis& basis_a() const { return *ba_; }
  const MonomialBasis& basis_b() const { return *bb_; }
  int cap_a() const { return ba_->order(); }
  int cap_b() const { return bb_->order(); }
  int field_order() const { return field_order_; }

  PowerSeries& at(std::size_t ra, std::size_t rb) {
    PowerSeries& f = e_[ra * bb_->size() + rb];
    if (f.nvars() == 0) f = PowerSeries(field_vars_, field_order_);
    return f;
  }
  // nullptr when the entry was never written or lies outside the caps
  const PowerSeries* find(long ra, long rb) const {
    if (ra < 0 || rb < 0 || static_cast<std::size_t>(ra) >= ba_->size() ||
        static_cast<std::size_t>(rb) >= bb_->size())
      return nullptr;
    const PowerSeries& f = e_[static_cast<std::size_t>(ra) * bb_->size() + static_cast<std::size_t>(rb)];
    return f.has_storage() ? &f : nullptr;
  }
  const PowerSeries* find(const MultiIndex& a, const MultiIndex& b) const {
    return find(ba_->rank(a), bb_->rank(b));
  }

  struct Entry {
    std::size_t ra, rb;
    const PowerSeries* f;
  };
  std::vector<Entry> nonzero() const {
    std::vector<Entry> out;
    for (std::size_t ra = 0; ra < ba_->size(); ++ra)
      for (std::size_t rb = 0; rb < bb_->size(); ++rb) {
        const PowerSeries& f = e_[ra * bb_->size() + rb];
        if (f.has_storage() && !f.is_zero()) out.push_back({ra, rb, &f});
      }
    return out;
  }

 private:
  std::shared_ptr<const MonomialBasis> ba_, bb_;
  int field_vars_, field_order_;
  std::vector<PowerSeries> e_;
};

ZSeries zmul(const ZSeries& x, const ZSeries& y, int cap_a, int cap_b, int field_vars) {
  ZSeries out(x.basis_a().nvars(), cap_a, cap_b, field_vars, x.field_order());
  const auto xs = x.nonzero();
  const auto ys = y.nonzero();
  const MonomialBasis& ba = out.basis_a();
  const MonomialBasis& bb = out.basis_b();
  for (const auto& u : xs) {
    const int da = x.basis_a().degree(u.ra), db = x.basis_b().degree(u.rb);
    if (da > cap_a || db > cap_b) continue;
    for (const auto& v : ys) {
      if (da + y.basis_a().degree(v.ra) > cap_a || db + y.basis_b().degree(v.rb) > cap_b) continue;
      const long ra = ba.sum_rank(u.ra, v.ra);
      const long rb = bb.sum_rank(u.rb, v.rb);
      out.at(static_cast<std::size_t>(ra), static_cast<std::size_t>(rb)).add_product(*u.f, *v.f);
    }
  }
  return out;
}

PowerSeries scaled(const PowerSeries& f, const Complex& s) {
  PowerSeries r = f;
  r *= s;
  return r;
}

class Engine {
 public:
  Engine(const WeightModel& weight, Method method, int M, int budget)
      : weight_(weight), method_(method), M_(M), budget_(budget), n_(weight.dim()),
        B_(budget - minimal_budget(M)), psi_(weight.jet(budget)) {}

  CoefficientTable run() {
    CoefficientTable t{weight_, M_, method_, precision_bits(), budget_, {}, {}};
    for (int m = 0; m <= M_; ++m) {
      const int D = field_order(m);
      setup_operator(D, m);
      a_.push_back(m == 0 ? leading() : step(m, D));
      t.entries.emplace_back(weight_.basepoint(), a_.back());
    }
    return t;
  }

 private:
  int field_order(int m) const { return B_ + (method_ == Method::charles ? 1 : 2) * (M_ - m); }

  PowerSeries taylor(const MultiIndex& alpha, const MultiIndex& beta, int order) const {
    return psi_.series().taylor_shift(concat(alpha, beta), order);
  }

  // (H^{-1})_{ji} as fields and the powers of sum_ij (H^{-1})_{ji} xi_i eta_j
  void setup_operator(int D, int m) {
    SeriesMatrix H(n_, std::vector<PowerSeries>(n_));
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k) H[i][k] = taylor(MultiIndex::unit(n_, i), MultiIndex::unit(n_, k), D);
    hessian_ = H;
    SeriesMatrix inv = series_inverse(H);
    op_pow_.clear();
    ZSeries one(n_, 0, 0, 2 * n_, D);
    one.at(0, 0) = PowerSeries::constant(2 * n_, D, Complex(1));
    op_pow_.push_back(one);
    if (m == 0) return;
    ZSeries op1(n_, 1, 1, 2 * n_, D);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        const PowerSeries& g = inv[j][i];
        if (!g.is_zero())
          op1.at(static_cast<std::size_t>(op1.basis_a().rank(MultiIndex::unit(n_, i))),
                 static_cast<std::size_t>(op1.basis_b().rank(MultiIndex::unit(n_, j)))) = g;
      }
    for (int nu = 1; nu <= 3 * m; ++nu) op_pow_.push_back(zmul(op_pow_.back(), op1, nu, nu, 2 * n_));
  }

  PowerSeries leading() const {
    PowerSeries det = series_determinant(hessian_);
    Real c = boost::multiprecision::pow(2 / pi(), n_);
    det *= Complex(c);
    return det;
  }

  // third-order part of the phase: g~ (Charles) or g = f - 2i H zbar.z (HS)
  ZSeries cubic_phase(int m, int D) const {
    ZSeries g(n_, m + 1, m + 1, 2 * n_, D);
    const MonomialBasis& b = g.basis_a();
    const Complex hs_factor = Complex(Real(0), Real(-2));
    for (std::size_t ra = 1; ra < b.size(); ++ra)
      for (std::size_t rb = 1; rb < b.size(); ++rb) {
        const MultiIndex& alpha = b.monomial(ra);
        const MultiIndex& beta = g.basis_b().monomial(rb);
        if (alpha.order() + beta.order() < 3) continue;
        PowerSeries t = taylor(alpha, beta, D);
        if (t.is_zero()) continue;
        if (method_ == Method::hs) t *= (beta.order() % 2 ? -hs_factor : hs_factor);
        g.at(ra, rb) = std::move(t);
      }
    return g;
  }

  // a_k at the shifted arguments: (x, xtilde + wbar) for Charles,
  // (y + z, ytilde - zbar) for HS
  ZSeries amplitude(int k, int j, int D) const {
    const int cap_a = method_ == Method::charles ? 0 : j;
    ZSeries A(n_, cap_a, j, 2 * n_, D);
    for (std::size_t ra = 0; ra < A.basis_a().size(); ++ra)
      for (std::size_t rb = 0; rb < A.basis_b().size(); ++rb) {
        const MultiIndex& gamma = A.basis_a().monomial(ra);
        const MultiIndex& delta = A.basis_b().monomial(rb);
        PowerSeries f = a_[k].taylor_shift(concat(gamma, delta), D);
        if (f.is_zero()) continue;
        if (method_ == Method::hs && delta.order() % 2) f *= Complex(-1);
        A.at(ra, rb) = std::move(f);
      }
    return A;
  }

  PowerSeries step(int m, int D) {
    for (int k = 0; k < m; ++k)
      if (a_[k].order() < D + (method_ == Method::charles ? 1 : 2) * (m - k))
        throw std::logic_error("internal: amplitude jet shorter than the recursion step needs");
    ZSeries g1 = cubic_phase(m, D);
    std::vector<ZSeries> powers;
    ZSeries p0(n_, m, m, 2 * n_, D);
    p0.at(0, 0) = PowerSeries::constant(2 * n_, D, Complex(1));
    powers.push_back(std::move(p0));
    for (int mu = 1; mu <= 2 * m; ++mu) powers.push_back(zmul(powers.back(), g1, mu + m, mu + m, 2 * n_));

    PowerSeries result(2 * n_, D);
    for (int j = 1; j <= m; ++j) {
      ZSeries A = amplitude(m - j, j, D);
      const auto amp = A.nonzero();
      for (int mu = 0; mu <= 2 * j; ++mu) {
        const int nu = mu + j;
        PowerSeries contraction(2 * n_, D);
        for (const auto& op : op_pow_[nu].nonzero()) {
          const MultiIndex& alpha = op_pow_[nu].basis_a().monomial(op.ra);
          const MultiIndex& beta = op_pow_[nu].basis_b().monomial(op.rb);
          if (alpha.order() != nu || beta.order() != nu) continue;
          PowerSeries q(2 * n_, D);
          for (const auto& e : amp) {
            const MultiIndex& gamma = A.basis_a().monomial(e.ra);
            const MultiIndex& delta = A.basis_b().monomial(e.rb);
            if (!alpha.dominates(gamma) || !beta.dominates(delta)) continue;
            const PowerSeries* p = powers[mu].find(alpha - gamma, beta - delta);
            if (p) q.add_product(*p, *e.f);
          }
          if (q.is_zero()) continue;
          contraction.add_product(scaled(*op.f, Complex(alpha.factorial() * beta.factorial())), q);
        }
        if (contraction.is_zero()) continue;
        // (-1)^mu / (2^j mu! nu!) for Charles, i^mu / (2^nu mu! nu!) for HS
        Real denom = factorial(static_cast<unsigned>(mu)) * factorial(static_cast<unsigned>(nu));
        Complex c;
        if (method_ == Method::charles) {
          denom *= boost::multiprecision::pow(Real(2), j);
          c = Complex(Real(mu % 2 ? -1 : 1) / denom);
        } else {
          denom *= boost::multiprecision::pow(Real(2), nu);
          c = i_pow(mu) * (1 / denom);
        }
        result.add_scaled(contraction, -c);
      }
    }
    return result;
  }

  const WeightModel& weight_;
  Method method_;
  int M_, budget_, n_, B_;
  Jet2n psi_;
  SeriesMatrix hessian_;
  std::vector<ZSeries> op_pow_;
  std::vector<PowerSeries> a_;
};

int resolve_budget(const WeightModel& weight, int M, std::optional<int> budget) {
  if (M < 0) throw std::invalid_argument("coefficient count M must be >= 0");
  int b = budget.value_or(default_budget(M));
  if (weight.max_order() >= 0) {
    if (budget && *budget > weight.max_order())
      throw std::invalid_argument("jet budget " + std::to_string(*budget) + " exceeds the weight jet order " +
                                  std::to_string(weight.max_order()));
    b = std::min(b, weight.max_order());
  }
  if (b < minimal_budget(M)) {
    const int reachable = (b - 2) / 2;  // largest M' with 2M'+2 <= b
    throw BudgetExhausted(reachable + 1, minimal_budget(reachable + 1), b);
  }
  return b;
}

CoefficientTable run(Method method, const WeightModel& weight, int M, std::optional<int> budget) {
  const int b = resolve_budget(weight, M, budget);
  CoefficientTable t = Engine(weight, method, M, b).run();
  HessianInverse hi = hessian_inverse(weight);
  t.warnings.insert(t.warnings.end(), hi.warnings.begin(), hi.warnings.end());
  return t;
}

}  // namespace

std::string to_string(Method m) { return m == Method::charles ? "charles" : "hs"; }

Method parse_method(const std::string& name) {
  if (name == "charles") return Method::charles;
  if (name == "hs") return Method::hs;
  throw std::invalid_argument("unknown method '" + name + "' (expected charles or hs)");
}

BudgetExhausted::BudgetExhausted(int m, int needed, int available)
    : std::out_of_range("derivative budget exhausted: a_" + std::to_string(m) +
                        " needs weight derivatives of order " + std::to_string(needed) +
                        ", the jet budget is " + std::to_string(available)),
      m_(m), needed_(needed), available_(available) {}

Complex CoefficientTable::diagonal(int m) const { return entries.at(m).constant_term(); }

std::vector<Complex> CoefficientTable::diagonal_values() const {
  std::vector<Complex> v;
  for (const auto& e : entries) v.push_back(e.constant_term());
  return v;
}

int minimal_budget(int M) { return 2 * M + 2; }
int default_budget(int M) { return 2 * M + 4; }

GTildeJet build_g_tilde(const WeightModel& weight, int order) {
  if (weight.max_order() >= 0 && order > weight.max_order())
    throw BudgetExhausted(0, order, weight.max_order());
  const int n = weight.dim();
  Jet2n psi = polarize(weight.jet(order)).psi;
  const PowerSeries& s = psi.series();
  // Phi(y) + Phi(x) - Psi(x, ybar) - Psi(y, xbar) - H (ybar - xbar).(y - x), y = x + w
  PowerSeries out = s;
  for (std::size_t r = 0; r < s.size(); ++r) {
    const MultiIndex& e = s.basis().monomial(r);
    int ha = 0, hb = 0;
    for (int i = 0; i < n; ++i) {
      ha += e[i];
      hb += e[n + i];
    }
    const Complex c = s.get(r);
    if (ha == 0) out.at(r) -= c;  // Psi(x, ybar)
    if (hb == 0) out.at(r) -= c;  // Psi(y, xbar)
    if (ha == 0 && hb == 0) out.at(r) += c;  // Phi(x)
    if (ha == 1 && hb == 1) out.at(r) -= c;  // mixed Hessian term
  }
  for (std::size_t r = 0; r < out.size(); ++r) {
    const MultiIndex& e = out.basis().monomial(r);
    int ha = 0, hb = 0;
    for (int i = 0; i < n; ++i) {
      ha += e[i];
      hb += e[n + i];
    }
    if ((ha == 0 || hb == 0 || ha + hb <= 2) && !out.get(r).is_zero())
      throw std::logic_error("g~ jet does not vanish where it must at " + e.to_string());
  }
  return {Jet2n(psi.basepoint(), out)};
}

HsPhase hs_phase(const WeightModel& weight, int order) {
  if (weight.max_order() >= 0 && order > weight.max_order())
    throw BudgetExhausted(0, order, weight.max_order());
  const int n = weight.dim();
  Jet2n psi = polarize(weight.jet(order)).psi;
  const PowerSeries& s = psi.series();
  // Psi(y+z, ybar-zbar) - Psi(y+z, ybar) - Psi(y, ybar-zbar) + Psi(y, ybar)
  PowerSeries e1 = jet_shift_antidiag(psi).series();
  PowerSeries e2(2 * n, order), e3(2 * n, order), e4(2 * n, order);
  for (std::size_t r = 0; r < s.size(); ++r) {
    const MultiIndex& e = s.basis().monomial(r);
    int ha = 0, hb = 0;
    for (int i = 0; i < n; ++i) {
      ha += e[i];
      hb += e[n + i];
    }
    const Complex c = s.get(r);
    if (c.is_zero()) continue;
    if (hb == 0) e2.at(r) = c;
    if (ha == 0) e3.at(r) = hb % 2 ? -c : c;
    if (ha == 0 && hb == 0) e4.at(r) = c;
  }
  PowerSeries phi = e1 - e2 - e3 + e4;
  PowerSeries f = phi * Complex(Real(0), Real(-2));
  PowerSeries g = f;
  for (std::size_t r = 0; r < g.size(); ++r) {
    const MultiIndex& e = g.basis().monomial(r);
    int ha = 0, hb = 0;
    for (int i = 0; i < n; ++i) {
      ha += e[i];
      hb += e[n + i];
    }
    if (ha == 1 && hb == 1) g.at(r) = Complex();
  }
  Real scale = std::max(Real(1), f.max_abs());
  Real tol = scale * boost::multiprecision::ldexp(Real(1), -static_cast<int>(precision_bits()) + 16);
  for (std::size_t r = 0; r < g.size(); ++r)
    if (g.basis().degree(r) <= 2 && abs(g.get(r)) > tol)
      throw std::logic_error("HS phase: g does not vanish to third order at " +
                             g.basis().monomial(r).to_string());
  return {Jet2n(psi.basepoint(), f), Jet2n(psi.basepoint(), g)};
}

CoefficientTable charles_coeffs(const WeightModel& weight, int M, std::optional<int> budget) {
  return run(Method::charles, weight, M, budget);
}

CoefficientTable hs_coeffs(const WeightModel& weight, int M, std::optional<int> budget) {
  return run(Method::hs, weight, M, budget);
}

CoefficientTable compute_coeffs(Method method, const WeightModel& weight, int M, std::optional<int> budget) {
  return run(method, weight, M, budget);
}

Complex operator_power_coefficient(const ComplexMatrix& G, int nu, const MultiIndex& alpha,
                                   const MultiIndex& beta) {
  const int n = static_cast<int>(G.size());
  if (alpha.order() != nu || beta.order() != nu) return Complex();
  if (nu == 0) return Complex(1);
  PowerSeries xi_eta(2 * n, 2 * nu);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      MultiIndex e(2 * n);
      e[i] += 1;
      e[n + j] += 1;
      xi_eta.add_to_coeff(e, G[i][j]);
    }
  PowerSeries p = PowerSeries::constant(2 * n, 2 * nu, Complex(1));
  for (int k = 0; k < nu; ++k) p = p * xi_eta;
  return p.coeff(concat(alpha, beta));
}

void write_table_csv(const CoefficientTable& table, const std::string& path) {
  const int n = table.weight.dim();
  CsvTable t;
  t.header.push_back("m");
  for (int i = 0; i < n; ++i) t.header.push_back("alpha" + std::to_string(i + 1));
  for (int i = 0; i < n; ++i) t.header.push_back("beta" + std::to_string(i + 1));
  for (const char* c : {"re", "im", "precision_bits", "budget"}) t.header.push_back(c);
  for (int m = 0; m <= table.M; ++m) {
    const PowerSeries& s = table.entries[m].series();
    for (std::size_t r = 0; r < s.size(); ++r) {
      const MultiIndex& e = s.basis().monomial(r);
      const Complex c = s.get(r);
      CsvRow row{std::to_string(m)};
      for (int i = 0; i < 2 * n; ++i) row.push_back(std::to_string(e[i]));
      row.push_back(format_real(c.re));
      row.push_back(format_real(c.im));
      row.push_back(std::to_string(table.precision_bits));
      row.push_back(std::to_string(s.order()));
      t.rows.push_back(std::move(row));
    }
  }
  write_file_atomic(path, t.str());
}

CoefficientTable read_table_csv(const std::string& path, const WeightModel& weight, Method method) {
  CsvTable t = read_csv_file(path);
  const int n = weight.dim();
  if (static_cast<int>(t.header.size()) != 2 * n + 5 || t.header[0] != "m")
    throw std::invalid_argument("'" + path + "' is not a coefficient table for dimension " + std::to_string(n));
  CoefficientTable table{weight, -1, method, 0, 0, {}, {}};
  std::vector<std::vector<std::pair<MultiIndex, Complex>>> rows;
  std::vector<int> orders;
  for (const auto& row : t.rows) {
    const int m = std::stoi(row[0]);
    if (m < 0) throw std::invalid_argument("negative coefficient index in table");
    if (m >= static_cast<int>(rows.size())) {
      rows.resize(m + 1);
      orders.resize(m + 1, -1);
    }
    std::vector<int> e;
    for (int i = 0; i < 2 * n; ++i) e.push_back(std::stoi(row[1 + i]));
    rows[m].emplace_back(MultiIndex(e), Complex(real_from_string(row[2 * n + 1]), real_from_string(row[2 * n + 2])));
    table.precision_bits = static_cast<unsigned>(std::stoul(row[2 * n + 3]));
    const int order = std::stoi(row[2 * n + 4]);
    if (orders[m] >= 0 && orders[m] != order)
      throw std::invalid_argument("inconsistent budget for a_" + std::to_string(m) + " in table");
    orders[m] = order;
  }
  table.M = static_cast<int>(rows.size()) - 1;
  for (int m = 0; m <= table.M; ++m) {
    if (orders[m] < 0) throw std::invalid_argument("table has no rows for a_" + std::to_string(m));
    Jet2n jet(n, orders[m], weight.basepoint());
    for (const auto& [e, c] : rows[m]) jet.series().add_to_coeff(e, c);
    table.entries.push_back(std::move(jet));
  }
  table.budget = table.M >= 0 ? minimal_budget(table.M) + orders[table.M] : 0;
  return table;
}

}  // namespace bergman
