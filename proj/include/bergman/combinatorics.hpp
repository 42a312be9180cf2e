#pragma once

#include "bergman/multi_index.hpp"
#include "bergman/numeric.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <vector>

namespace bergman {

using BigInt = boost::multiprecision::cpp_int;

struct PartitionSpec {
  MultiIndex alpha;
  int m = 1;
};

using Partition = std::vector<MultiIndex>;

// Visits every m-tuple (alpha_1, ..., alpha_m) of multi-indices summing to
// alpha exactly once. Each part runs through the multi-indices below what is
// left, larger leading entries first.
void enumerate_partitions(const PartitionSpec& spec, const std::function<void(const Partition&)>& visit);
std::vector<Partition> list_partitions(const PartitionSpec& spec);
BigInt count_partitions(const PartitionSpec& spec);

BigInt big_factorial(unsigned k);
BigInt big_binomial(unsigned n, unsigned k);

struct FactorialProductBound {
  BigInt lhs;  // m_1! ... m_k!
  BigInt rhs;  // a!^{k-1} (M - a(k-1))!
  bool holds = false;
};

FactorialProductBound factorial_product_bound(const std::vector<int>& m, int a);

// For k1 + l1 = k2 + l2: does |k1 - l1| > |k2 - l2| imply k1! l1! > k2! l2!?
// Returns true also when the premise is false.
bool factorial_spread_lemma_holds(int k1, int l1, int k2, int l2);

struct GevreyArgmin {
  long k_c = 0;
  Real a_min;  // C^k k!^sigma h^k at k = k_c
  bool monotone = false;  // decrease up to k_c, increase after; read off the ratio C h k^sigma
};

// floor((C h)^{-1/sigma}); values within a few ulps of an integer snap to it
long gevrey_index(const Real& C, const Real& sigma, const Real& h);
GevreyArgmin gevrey_argmin(const Real& C, const Real& sigma, const Real& h);
// log of C^k k!^sigma h^k
Real gevrey_log_term(const Real& C, const Real& sigma, const Real& h, long k);

Real gaussian_tail_bound(const Real& C, const Real& h, int N);

struct StirlingBounds {
  Real lower;
  Real value;  // N!
  Real upper;
  bool holds = false;
};

StirlingBounds stirling_bounds(int N);

}  // namespace bergman
