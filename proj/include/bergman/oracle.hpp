#pragma once

#include "bergman/quadrature.hpp"
#include "bergman/recursion.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bergman {

struct OracleOptions {
  // integrate over |x| <= disc_radius instead of the whole plane
  std::optional<Real> disc_radius;
  // number of radial terms kept for formal series weights (automatic when unset)
  std::optional<int> series_terms;
  // relative accuracy target for moments and kernel sums (default 2^{-(bits-16)})
  std::optional<Real> tolerance;
  int max_kernel_terms = 4000;
};

// Disc used for formal radial series when none is configured.
Real default_series_disc();

// Phi(r) = sum_j c_j r^{2j} as integrated by the oracle.
struct RadialProfile {
  std::vector<Real> c;
  bool on_disc = false;
  Real disc;  // meaningful when on_disc
  Real value(const Real& r) const;
};

RadialProfile radial_profile(const WeightModel& weight, const OracleOptions& opt = {});

struct MomentTable {
  Real h;
  std::vector<Real> I;       // I_j = 2 pi int r^{2j+1} e^{-2 Phi/h} dr
  std::vector<Real> error;   // quadrature plus tail estimate
  std::vector<Real> radius;  // outer integration radius per moment
  bool on_disc = false;
  // whole plane: tail bound relative to I_j; disc: e^{-2(Phi(disc)-Phi(0))/h}
  Real cutoff;
};

MomentTable moments(const WeightModel& weight, const Real& h, int J, const OracleOptions& opt = {});
// j with I_j I_{j+2} < I_{j+1}^2 (1 - rel_tol)
std::vector<int> log_convexity_violations(const MomentTable& m, const Real& rel_tol);
std::string moments_csv(const MomentTable& m);

struct KernelValue {
  Real K;
  Real normalized;  // h K e^{-2 Phi(x)/h}
  Real truncation_error;
  Real quadrature_error;
  int terms = 0;
};

KernelValue kernel_diag(const WeightModel& weight, const Real& h, const Real& x, const OracleOptions& opt = {});

struct ExtractedCoefficients {
  std::vector<Real> a_hat;
  std::vector<Real> h;       // full grid, ascending
  std::vector<Real> values;  // h K e^{-2 Phi/h} on the grid
  std::size_t window_begin = 0, window_end = 0;  // fit window [begin, end)
  double condition = 0;
  Real rms_residual;
};

// Least-squares fit of h K e^{-2 Phi/h} by a degree-M polynomial in h on the
// window of M+3 consecutive grid points with the smallest residual per h^M.
ExtractedCoefficients extract_coeffs(const WeightModel& weight, const Real& x, std::vector<Real> h_grid, int M,
                                     const OracleOptions& opt = {}, double condition_bound = 1e12);

struct FioResult {
  Real residual;  // |(A a)(x0) - 1|
  Complex value;
  Real quadrature_error;
  Real r0;
  int terms = 0;
  long n0 = 0;
  std::vector<std::string> warnings;
};

// (1/h) int e^{i f/h} a(x0 + z, conj x0 - conj z; h) over |z| <= r0 in polar
// coordinates, with a summed to min(N0, M+1) terms (or `terms` when given).
FioResult fio_residual(const WeightModel& weight, const CoefficientTable& table, const Real& h,
                       std::optional<int> terms = std::nullopt, std::optional<Real> tolerance = std::nullopt);

}  // namespace bergman
