#pragma once

#include "bergman/jets.hpp"
#include "bergman/weights.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bergman {

enum class Method { charles, hs };

std::string to_string(Method m);
Method parse_method(const std::string& name);

// Raised when a requested coefficient needs more derivatives of the weight
// than the jet budget provides.
class BudgetExhausted : public std::out_of_range {
 public:
  BudgetExhausted(int m, int needed, int available);
  int m() const { return m_; }
  int needed() const { return needed_; }
  int available() const { return available_; }

 private:
  int m_, needed_, available_;
};

struct CoefficientTable {
  WeightModel weight;
  int M = 0;
  Method method = Method::charles;
  unsigned precision_bits = 0;
  int budget = 0;  // order of the weight jet consumed
  // a_m as jets in (x - x0, xbar - conj x0); entries[m].order() is the budget D_m
  std::vector<Jet2n> entries;
  std::vector<std::string> warnings;

  // a_m(x0, conj x0)
  Complex diagonal(int m) const;
  std::vector<Complex> diagonal_values() const;
  int order(int m) const { return entries.at(m).order(); }
};

struct GTildeJet {
  Jet2n jet;
};

struct HsPhase {
  Jet2n f;  // -2i phi(y, ybar; y+z, ybar-zbar) in (z, zbar)
  Jet2n g;  // f minus its quadratic part
};

// Smallest weight jet order that feeds a_0..a_M.
int minimal_budget(int M);
// Minimal budget plus two spare orders (enough for amplitude quadrature checks).
int default_budget(int M);

GTildeJet build_g_tilde(const WeightModel& weight, int order);
HsPhase hs_phase(const WeightModel& weight, int order);

CoefficientTable charles_coeffs(const WeightModel& weight, int M, std::optional<int> budget = std::nullopt);
CoefficientTable hs_coeffs(const WeightModel& weight, int M, std::optional<int> budget = std::nullopt);
CoefficientTable compute_coeffs(Method method, const WeightModel& weight, int M,
                                std::optional<int> budget = std::nullopt);

// Coefficient of xi^alpha eta^beta in (sum_{ij} G_ij xi_i eta_j)^nu, i.e. the
// sum over ordered pairings that expands (G d.dbar)^nu into partial derivatives.
Complex operator_power_coefficient(const ComplexMatrix& G, int nu, const MultiIndex& alpha,
                                   const MultiIndex& beta);

// columns m, alpha..., beta..., re, im, precision_bits, budget
void write_table_csv(const CoefficientTable& table, const std::string& path);
CoefficientTable read_table_csv(const std::string& path, const WeightModel& weight, Method method);

}  // namespace bergman
