#pragma once

#include "bergman/numeric.hpp"

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

namespace bergman {

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(int n) : e_(n, 0) {}
  MultiIndex(std::initializer_list<int> entries);
  explicit MultiIndex(std::vector<int> entries);

  static MultiIndex unit(int n, int i);

  int size() const { return static_cast<int>(e_.size()); }
  int order() const;
  int operator[](int i) const { return e_[i]; }
  int& operator[](int i) { return e_[i]; }
  const std::vector<int>& entries() const { return e_; }

  // componentwise comparison
  bool dominates(const MultiIndex& o) const;
  Real factorial() const;

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
  friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b);
  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e_ == b.e_; }
  friend bool operator<(const MultiIndex& a, const MultiIndex& b) { return a.e_ < b.e_; }

  std::string to_string() const;

 private:
  std::vector<int> e_;
};

MultiIndex concat(const MultiIndex& a, const MultiIndex& b);
// product over components of binom(a_k, b_k)
Real multi_binomial(const MultiIndex& a, const MultiIndex& b);

// Monomials in `nvars` variables of total degree <= order, in graded-lex
// order: by degree, then lexicographically with larger leading exponents first.
class MonomialBasis {
 public:
  MonomialBasis(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  std::size_t size() const { return monos_.size(); }
  const MultiIndex& monomial(std::size_t rank) const { return monos_[rank]; }
  int degree(std::size_t rank) const { return degrees_[rank]; }
  // number of monomials of degree < d
  std::size_t degree_offset(int d) const;
  // -1 when the degree exceeds the order
  long rank(const MultiIndex& e) const;
  // rank of monomial(i) + monomial(j), or -1 if above the order
  long sum_rank(std::size_t i, std::size_t j) const;
  // for rank > 0: the rank of the monomial with one power of parent_var removed
  std::size_t parent(std::size_t rank) const { return parent_[rank]; }
  int parent_var(std::size_t rank) const { return parent_var_[rank]; }

 private:
  int nvars_;
  int order_;
  std::vector<MultiIndex> monos_;
  std::vector<int> degrees_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<std::size_t>> counts_;  // counts_[k][s]: monomials in k vars of degree s
  std::vector<std::size_t> parent_;
  std::vector<int> parent_var_;
  std::vector<int> sum_table_;  // dense addition table when small enough
};

// Shared, cached basis for (nvars, order).
std::shared_ptr<const MonomialBasis> monomial_basis(int nvars, int order);

}  // namespace bergman
