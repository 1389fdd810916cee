#include "isanneal/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "isanneal/errors.hpp"

namespace isanneal::bounds {

using std::numbers::pi;

BoundParams derive_constants(double omega_max, double delta_max, double lipschitz_k, double t_total,
                             double omega0, int n) {
  if (!(t_total > 0.0)) throw DomainError("runtime T must be positive");
  if (!(omega0 > 0.0)) throw DomainError("blockade strength omega0 must be positive");
  if (n < 1) throw DomainError("vertex count must be positive");
  if (!(omega_max >= 0.0) || !(delta_max >= 0.0) || !(lipschitz_k >= 0.0)) {
    throw DomainError("Omega_max, Delta_max and K must be nonnegative");
  }
  BoundParams bp;
  bp.omega_max = omega_max;
  bp.delta_max = delta_max;
  bp.lipschitz_k = lipschitz_k;
  bp.t_total = t_total;
  bp.omega0 = omega0;
  bp.n = n;

  const double t = t_total;
  bp.tau = 2.0 * pi / (omega0 * t);
  bp.intervals_l = omega0 * t / (2.0 * pi);
  bp.a1 = omega_max * t / 2.0;
  bp.a2 = omega_max * omega_max * t * t / 8.0;
  bp.a3 = (omega_max * delta_max * t * t + 2.0 * pi * lipschitz_k * t) / (4.0 * pi);
  bp.a4 = (pi + 1.0) * omega_max * delta_max * delta_max * t * t * t / (8.0 * pi * pi);
  bp.non_integer_intervals = std::abs(bp.intervals_l - std::round(bp.intervals_l)) > 1e-9;
  return bp;
}

BoundParams derive_constants(const Schedule& schedule, double t_total, double omega0, int n) {
  BoundParams bp = derive_constants(schedule.omega_max(), schedule.delta_max(), schedule.lipschitz_k(),
                                    t_total, omega0, n);
  bp.delta_not_piecewise_constant = schedule.delta_max() > 0.0 && schedule.delta_varies();
  return bp;
}

bool magnus_convergence_check(const BoundParams& bp) {
  return pi * bp.omega_max * bp.n / bp.omega0 < 1.0;
}

double asymptotic_leakage(const BoundParams& bp, double tau0) {
  if (!(tau0 > 0.0)) throw DomainError("tau0 must be positive");
  const double t = bp.t_total;
  return bp.omega_max * t / (8.0 * pi) *
         (bp.omega_max * bp.delta_max * t * t + 2.0 * pi * bp.lipschitz_k * t) * tau0;
}

LeakageBoundReport leakage_upper_bound(const BoundParams& bp) {
  LeakageBoundReport r;
  const double n = bp.n;
  const double tau = bp.tau;
  const double rabi_t = bp.omega_max * bp.t_total;

  r.leading_term = bp.a1 * bp.a3 * n * n * tau;
  r.second_term = (bp.a1 * bp.a1 * bp.a3 + pi / 8.0 * std::pow(rabi_t, 3)) * std::pow(n, 3) * tau * tau;
  r.truncated_bound = r.leading_term + r.second_term;
  r.tail_estimate = (pi / 8.0 * std::pow(rabi_t, 4) + bp.a1 * bp.a2 * bp.a3) * std::pow(n, 4) *
                    std::pow(tau, 3);
  r.convergence_ok = magnus_convergence_check(bp);
  const bool tail_small =
      r.tail_estimate == 0.0 || r.tail_estimate < 0.05 * r.truncated_bound;
  r.certified = r.convergence_ok && tail_small;
  r.asymptotic_value = asymptotic_leakage(bp, tau * n * n);
  r.approx_ratio = approx_adiabatic_ratio(bp);

  if (!r.convergence_ok) r.annotations.emplace_back("magnus convergence condition violated");
  if (!tail_small) r.annotations.emplace_back("dropped n^4 tau^3 order exceeds 5% of the bound");
  if (bp.non_integer_intervals) r.annotations.emplace_back("omega0 T / 2pi is not an integer");
  if (bp.delta_not_piecewise_constant) {
    r.annotations.emplace_back("detuning varies within blockade periods");
  }
  return r;
}

double magnus_term_norm_bound(const BoundParams& bp, int k) {
  if (k < 1) throw DomainError("Magnus order must be >= 1");
  return pi * std::pow(bp.omega_max * bp.t_total / 2.0, k) * std::pow(bp.n * bp.tau, k);
}

double magnus_term_norm_bound_xi(const BoundParams& bp, int k) {
  if (k < 1) throw DomainError("Magnus order must be >= 1");
  return pi * std::pow(bp.tau * bp.omega_max * bp.t_total * bp.n / (2.0 * bp.xi), k);
}

double spectral_radius_bound(double rows_nonzero, double max_entry) {
  if (!(rows_nonzero >= 0.0) || !(max_entry >= 0.0)) {
    throw DomainError("row count and entry bound must be nonnegative");
  }
  return rows_nonzero * max_entry;
}

std::complex<double> hopping_coefficient(const BoundParams& bp, const Schedule& schedule, int n_e,
                                         double s) {
  if (n_e < 1) throw DomainError("a non-independent state has at least one violated edge");
  const double t = bp.t_total;
  const double phase = t * (n_e * bp.omega0 * s - schedule.delta_integral(s));
  return schedule.omega(s) * t / 2.0 * std::polar(1.0, phase);
}

double approx_adiabatic_ratio(const BoundParams& bp) { return bp.omega_max / (2.0 * bp.omega0); }

double approx_adiabatic_ratio(const Schedule& schedule, double omega0, int samples) {
  if (!(omega0 > 0.0)) throw DomainError("blockade strength omega0 must be positive");
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    best = std::max(best, schedule.omega(static_cast<double>(i) / (samples - 1)));
  }
  return best / (2.0 * omega0);
}

}  // namespace isanneal::bounds
