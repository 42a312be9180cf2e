#include "bergman/combinatorics.hpp"

#include <stdexcept>

namespace bergman {

namespace {

void partition_rec(const MultiIndex& rest, int parts_left, Partition& cur,
                   const std::function<void(const Partition&)>& visit) {
  if (parts_left == 1) {
    cur.push_back(rest);
    visit(cur);
    cur.pop_back();
    return;
  }
  // candidates for the next part: every multi-index dominated by `rest`,
  // larger leading entries first
  const int n = rest.size();
  MultiIndex part(n);
  std::function<void(int)> choose = [&](int i) {
    if (i == n) {
      cur.push_back(part);
      partition_rec(rest - part, parts_left - 1, cur, visit);
      cur.pop_back();
      return;
    }
    for (int v = rest[i]; v >= 0; --v) {
      part[i] = v;
      choose(i + 1);
    }
    part[i] = 0;
  };
  choose(0);
}

Real log_factorial(long k) {
  return boost::multiprecision::lgamma(Real(k + 1));
}

}  // namespace

void enumerate_partitions(const PartitionSpec& spec, const std::function<void(const Partition&)>& visit) {
  if (spec.m < 1) throw std::invalid_argument("partitions need m >= 1 parts");
  Partition cur;
  cur.reserve(spec.m);
  partition_rec(spec.alpha, spec.m, cur, visit);
}

std::vector<Partition> list_partitions(const PartitionSpec& spec) {
  std::vector<Partition> out;
  enumerate_partitions(spec, [&out](const Partition& p) { out.push_back(p); });
  return out;
}

BigInt big_factorial(unsigned k) {
  BigInt r = 1;
  for (unsigned i = 2; i <= k; ++i) r *= i;
  return r;
}

BigInt big_binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

BigInt count_partitions(const PartitionSpec& spec) {
  if (spec.m < 1) throw std::invalid_argument("partitions need m >= 1 parts");
  BigInt c = 1;
  for (int k = 0; k < spec.alpha.size(); ++k) {
    unsigned a = static_cast<unsigned>(spec.alpha[k]);
    c *= big_binomial(a + spec.m - 1, a);
  }
  return c;
}

FactorialProductBound factorial_product_bound(const std::vector<int>& m, int a) {
  if (m.empty()) throw std::invalid_argument("factorial_product_bound needs at least one entry");
  if (a < 0) throw std::invalid_argument("factorial_product_bound needs a >= 0");
  long total = 0;
  for (int v : m) {
    if (v < a) throw std::invalid_argument("factorial_product_bound requires every m_j >= a");
    total += v;
  }
  const long k = static_cast<long>(m.size());
  FactorialProductBound r;
  r.lhs = 1;
  for (int v : m) r.lhs *= big_factorial(static_cast<unsigned>(v));
  r.rhs = big_factorial(static_cast<unsigned>(total - a * (k - 1)));
  BigInt af = big_factorial(static_cast<unsigned>(a));
  for (long i = 0; i < k - 1; ++i) r.rhs *= af;
  r.holds = r.lhs <= r.rhs;
  return r;
}

bool factorial_spread_lemma_holds(int k1, int l1, int k2, int l2) {
  if (k1 + l1 != k2 + l2) throw std::invalid_argument("factorial lemma needs k1 + l1 = k2 + l2");
  if (std::abs(k1 - l1) <= std::abs(k2 - l2)) return true;
  return big_factorial(k1) * big_factorial(l1) > big_factorial(k2) * big_factorial(l2);
}

long gevrey_index(const Real& C, const Real& sigma, const Real& h) {
  if (!(C > 0) || !(h > 0)) throw std::invalid_argument("gevrey index needs C, h > 0");
  if (sigma < 1) throw std::invalid_argument("gevrey index needs sigma >= 1");
  Real t = boost::multiprecision::pow(C * h, -1 / sigma);
  Real r = boost::multiprecision::round(t);
  // inputs like h = 1e-4 are not exact binary numbers; do not let the
  // representation error move an exact integer to the integer below
  Real slack = t * boost::multiprecision::ldexp(Real(1), -static_cast<int>(precision_bits()) + 8);
  if (boost::multiprecision::abs(t - r) <= slack) return r.convert_to<long>();
  return boost::multiprecision::floor(t).convert_to<long>();
}

Real gevrey_log_term(const Real& C, const Real& sigma, const Real& h, long k) {
  return Real(k) * boost::multiprecision::log(C * h) + sigma * log_factorial(k);
}

GevreyArgmin gevrey_argmin(const Real& C, const Real& sigma, const Real& h) {
  GevreyArgmin r;
  r.k_c = gevrey_index(C, sigma, h);
  r.a_min = boost::multiprecision::exp(gevrey_log_term(C, sigma, h, r.k_c));
  // a_k / a_{k-1} = C h k^sigma increases with k, so checking the ratio at
  // k_c and k_c + 1 settles the monotonicity on all of [1, 2 k_c]
  Real eps = boost::multiprecision::ldexp(Real(1), -static_cast<int>(precision_bits()) + 8);
  auto ratio = [&](long k) { return C * h * boost::multiprecision::pow(Real(k), sigma); };
  r.monotone = ratio(r.k_c + 1) >= 1 - eps && (r.k_c == 0 || ratio(r.k_c) <= 1 + eps);
  return r;
}

Real gaussian_tail_bound(const Real& C, const Real& h, int N) {
  if (!(C > 0) || !(h > 0) || N < 0) throw std::invalid_argument("gaussian_tail_bound needs C, h > 0, N >= 0");
  Real half = Real(N) / 2;
  return boost::multiprecision::pow(C, -half) * boost::multiprecision::sqrt(factorial(static_cast<unsigned>(N))) *
         boost::multiprecision::pow(h, half);
}

StirlingBounds stirling_bounds(int N) {
  if (N < 1) throw std::invalid_argument("stirling_bounds needs N >= 1");
  StirlingBounds s;
  Real n = N;
  Real base = boost::multiprecision::sqrt(2 * pi() * n) *
              boost::multiprecision::pow(n / boost::multiprecision::exp(Real(1)), n);
  s.lower = base * boost::multiprecision::exp(1 / (12 * n + 1));
  s.upper = base * boost::multiprecision::exp(1 / (12 * n));
  s.value = factorial(static_cast<unsigned>(N));
  s.holds = s.lower < s.value && s.value < s.upper;
  return s;
}

}  // namespace bergman
