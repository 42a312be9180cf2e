#include "bergman/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace bergman {

namespace {

// rule size grows with the precision: about one node per five bits
int rule_points() { return std::clamp(static_cast<int>(precision_bits() / 5), 20, 96); }

std::vector<std::pair<Real, Real>> legendre_rule(int n) {
  std::vector<std::pair<Real, Real>> rule(n);
  const Real p = pi();
  const Real eps = boost::multiprecision::ldexp(Real(1), -static_cast<int>(precision_bits()) + 4);
  for (int i = 0; i < n; ++i) {
    Real x = boost::multiprecision::cos(p * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
    Real dp;
    for (int it = 0; it < 200; ++it) {
      Real p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      Real dx = p1 / dp;
      x -= dx;
      if (boost::multiprecision::abs(dx) <= eps) break;
    }
    rule[i] = {x, 2 / ((1 - x * x) * dp * dp)};
  }
  return rule;
}

Complex panel(const std::function<Complex(const Real&)>& f, const Real& a, const Real& b,
              const std::vector<std::pair<Real, Real>>& rule, long& evals) {
  const Real mid = (a + b) / 2, half = (b - a) / 2;
  Complex s;
  for (const auto& [x, w] : rule) s += f(mid + half * x) * w;
  evals += static_cast<long>(rule.size());
  return s * half;
}

}  // namespace

QuadratureOptions default_quadrature_options() {
  QuadratureOptions o;
  o.abs_tol = 0;
  o.rel_tol = boost::multiprecision::ldexp(Real(1), -static_cast<int>(precision_bits()) + 16);
  return o;
}

const std::vector<std::pair<Real, Real>>& gauss_legendre_rule(int n) {
  static std::mutex mu;
  static std::map<std::pair<int, unsigned>, std::vector<std::pair<Real, Real>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(n, precision_bits());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, legendre_rule(n)).first;
  return it->second;
}

QuadratureResult integrate(const std::function<Complex(const Real&)>& f, const Real& a, const Real& b,
                           const QuadratureOptions& opt) {
  const auto& rule = gauss_legendre_rule(rule_points());
  QuadratureResult r;
  r.error = 0;
  if (a == b) return r;
  const Real len = b - a;

  struct Panel {
    Real a, b;
    Complex whole;
    int depth;
  };
  std::vector<Panel> stack;
  Real scale = 0;
  for (int k = opt.initial_panels - 1; k >= 0; --k) {
    Real pa = a + len * k / opt.initial_panels, pb = a + len * (k + 1) / opt.initial_panels;
    Complex w = panel(f, pa, pb, rule, r.evaluations);
    scale += abs(w);
    stack.push_back({pa, pb, w, 0});
  }
  // panels are processed left to right, so the sum order is deterministic
  while (!stack.empty()) {
    Panel p = std::move(stack.back());
    stack.pop_back();
    const Real mid = (p.a + p.b) / 2;
    Complex left = panel(f, p.a, mid, rule, r.evaluations);
    Complex right = panel(f, mid, p.b, rule, r.evaluations);
    Complex refined = left + right;
    const Real diff = abs(refined - p.whole);
    const Real share = boost::multiprecision::abs((p.b - p.a) / len);
    const Real tol = std::max(opt.abs_tol, Real(opt.rel_tol * scale)) * share;
    if (diff <= tol || p.depth >= opt.max_depth) {
      if (diff > tol) r.converged = false;
      r.value += refined;
      r.error += diff;
      continue;
    }
    stack.push_back({mid, p.b, right, p.depth + 1});
    stack.push_back({p.a, mid, left, p.depth + 1});
  }
  return r;
}

QuadratureResult integrate_or_throw(const std::function<Complex(const Real&)>& f, const Real& a, const Real& b,
                                    const QuadratureOptions& opt, const std::string& what) {
  QuadratureResult r = integrate(f, a, b, opt);
  if (!r.converged)
    throw QuadratureFailure(what + ": adaptive quadrature did not converge (error estimate " +
                            format_real(r.error, 6) + ")");
  return r;
}

}  // namespace bergman
