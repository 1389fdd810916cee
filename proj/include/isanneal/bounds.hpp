#pragma once

#include <complex>
#include <string>
#include <vector>

#include "isanneal/schedule.hpp"

namespace isanneal::bounds {

/// Constant of the Magnus-term norm bound: int_0^{2pi} dx / (4 + x (1 - cot(x/2))).
inline constexpr double kXi = 1.0868687;

/// Inputs and derived constants of the interaction-picture leakage bound.
struct BoundParams {
  double omega_max = 0.0;
  double delta_max = 0.0;
  double lipschitz_k = 0.0;
  double t_total = 1.0;
  double omega0 = 1.0;
  int n = 1;

  double tau = 0.0;          ///< 2 pi / (omega0 T), length of one blockade period
  double intervals_l = 0.0;  ///< omega0 T / 2 pi
  double a1 = 0.0;           ///< Omega_max T / 2
  double a2 = 0.0;           ///< Omega_max^2 T^2 / 8
  double a3 = 0.0;           ///< (Omega_max Delta_max T^2 + 2 pi K T) / (4 pi)
  double a4 = 0.0;           ///< (pi + 1) Omega_max Delta_max^2 T^3 / (8 pi^2)
  double xi = kXi;

  /// omega0 T / 2 pi is more than 1e-9 away from an integer.
  bool non_integer_intervals = false;
  /// The schedule's detuning varies in s; the derivation assumes it constant
  /// within each blockade period.
  bool delta_not_piecewise_constant = false;
};

/// Throws DomainError for T <= 0, omega0 <= 0, n < 1 or negative bounds.
BoundParams derive_constants(double omega_max, double delta_max, double lipschitz_k, double t_total,
                             double omega0, int n);
BoundParams derive_constants(const Schedule& schedule, double t_total, double omega0, int n);

/// pi Omega_max n / omega0 < 1.
bool magnus_convergence_check(const BoundParams& bp);

struct LeakageBoundReport {
  double leading_term = 0.0;  ///< a1 a3 n^2 tau
  double second_term = 0.0;   ///< (a1^2 a3 + pi/8 Omega_max^3 T^3) n^3 tau^2
  double truncated_bound = 0.0;
  /// Size estimate of the dropped n^4 tau^3 order:
  /// (pi/8 Omega_max^4 T^4 + a1 a2 a3) n^4 tau^3.
  double tail_estimate = 0.0;
  bool convergence_ok = false;
  /// convergence_ok and tail_estimate < 5% of truncated_bound.
  bool certified = false;
  double asymptotic_value = 0.0;  ///< asymptotic_leakage with tau0 = tau n^2
  double approx_ratio = 0.0;
  std::vector<std::string> annotations;
};

/// Upper bound on sqrt(1 - P_IS), truncated after the n^3 tau^2 order.
LeakageBoundReport leakage_upper_bound(const BoundParams& bp);

/// n -> infinity limit of the leading term under tau = tau0 / n^2:
///   (Omega_max T / 8 pi)(Omega_max Delta_max T^2 + 2 pi K T) tau0.
double asymptotic_leakage(const BoundParams& bp, double tau0);

/// pi (Omega_max T / 2)^k (n tau)^k, bound on the k-th Magnus term times tau.
double magnus_term_norm_bound(const BoundParams& bp, int k);

/// pi (tau Omega_max T n / (2 xi))^k, the same bound before dropping xi.
double magnus_term_norm_bound_xi(const BoundParams& bp, int k);

/// Hermitian matrix with at most `rows_nonzero` nonzeros per row, entries
/// bounded by `max_entry`: spectral radius <= rows_nonzero * max_entry.
double spectral_radius_bound(double rows_nonzero, double max_entry);

/// Interaction-picture coupling from an IS to a non-IS state with `n_e`
/// violated edges: (Omega(s) T / 2) exp(i T int_0^s [n_e omega0 - Delta]).
std::complex<double> hopping_coefficient(const BoundParams& bp, const Schedule& schedule, int n_e,
                                         double s);

/// Omega_max / (2 omega0).
double approx_adiabatic_ratio(const BoundParams& bp);
/// max_s Omega(s) / (2 omega0) sampled on a uniform grid.
double approx_adiabatic_ratio(const Schedule& schedule, double omega0, int samples = 10001);

}  // namespace isanneal::bounds
