#include "isanneal/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "isanneal/errors.hpp"

namespace isanneal {

namespace {

// psi <- exp(-i int_a^b D(s) ds) psi, D = -Delta T n_m + omega0 T N_e(m).
// The phase depends on (n_m, N_e) only, so it is tabulated once per call.
void apply_diagonal(const BasisTable& basis, const AnnealParams& p, double a, double b,
                    const std::vector<std::uint32_t>& phase_index, std::vector<cplx>& phase,
                    StateVector& psi) {
  const double detune_angle = p.t_total * p.schedule.delta_integral(a, b);
  const double block_angle = -p.omega0 * p.t_total * (b - a);
  const std::size_t occ_count = static_cast<std::size_t>(basis.num_vertices()) + 1;
  const std::size_t viol_count = static_cast<std::size_t>(basis.max_violated()) + 1;
  const cplx detune = std::polar(1.0, detune_angle);
  const cplx block = std::polar(1.0, block_angle);
  cplx row = 1.0;
  for (std::size_t v = 0; v < viol_count; ++v) {
    cplx f = row;
    for (std::size_t k = 0; k < occ_count; ++k) {
      phase[v * occ_count + k] = f;
      f *= detune;
    }
    row *= block;
  }
  auto* z = reinterpret_cast<double*>(psi.data());
  const auto* f = reinterpret_cast<const double*>(phase.data());
  const std::size_t dim = psi.size();
  for (std::size_t m = 0; m < dim; ++m) {
    const std::size_t idx = 2 * std::size_t{phase_index[m]};
    const double fr = f[idx];
    const double fi = f[idx + 1];
    const double zr = z[2 * m];
    const double zi = z[2 * m + 1];
    z[2 * m] = zr * fr - zi * fi;
    z[2 * m + 1] = zr * fi + zi * fr;
  }
}

// psi <- prod_j exp(-i theta X_j) psi.
void apply_transverse(int n, double theta, StateVector& psi) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  auto* z = reinterpret_cast<double*>(psi.data());
  const std::size_t dim = psi.size();
  for (int j = 0; j < n; ++j) {
    const std::size_t stride = std::size_t{1} << j;
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
      double* __restrict lo = z + 2 * base;
      double* __restrict hi = z + 2 * (base + stride);
      for (std::size_t i = 0; i < 2 * stride; i += 2) {
        const double ar = lo[i], ai = lo[i + 1];
        const double br = hi[i], bi = hi[i + 1];
        lo[i] = c * ar + s * bi;
        lo[i + 1] = c * ai - s * br;
        hi[i] = c * br + s * ai;
        hi[i + 1] = c * bi - s * ar;
      }
    }
  }
}

void propagate_split4(const BasisTable& basis, const AnnealParams& p, StateVector& psi,
                      double s_begin, double s_end, std::size_t steps) {
  const double cbrt2 = std::cbrt(2.0);
  const double w_outer = 1.0 / (2.0 - cbrt2);
  const double w_inner = 1.0 - 2.0 * w_outer;
  const double weights[3] = {w_outer, w_inner, w_outer};
  const double h = (s_end - s_begin) / static_cast<double>(steps);

  std::vector<cplx> phase((static_cast<std::size_t>(basis.num_vertices()) + 1) *
                          (static_cast<std::size_t>(basis.max_violated()) + 1));
  std::vector<std::uint32_t> phase_index(basis.dim());
  for (std::size_t m = 0; m < basis.dim(); ++m) {
    phase_index[m] = static_cast<std::uint32_t>(basis.violated(m) * (basis.num_vertices() + 1) +
                                                basis.occupation(m));
  }

  // Adjacent half-step diagonal factors commute and are merged: the pending
  // diagonal interval always runs from the previous transverse midpoint.
  double diag_from = s_begin;
  for (std::size_t k = 0; k < steps; ++k) {
    const double step_start = s_begin + static_cast<double>(k) * h;
    double s = step_start;
    for (int sub = 0; sub < 3; ++sub) {
      const double dt = weights[sub] * h;
      const double mid = s + 0.5 * dt;
      apply_diagonal(basis, p, diag_from, mid, phase_index, phase, psi);
      apply_transverse(basis.num_vertices(), 0.5 * p.schedule.omega(mid) * p.t_total * dt, psi);
      diag_from = mid;
      s += dt;
    }
  }
  apply_diagonal(basis, p, diag_from, s_end, phase_index, phase, psi);
}

void propagate_rk4(const BasisTable& basis, const AnnealParams& p, StateVector& psi, double s_begin,
                   double s_end, std::size_t steps) {
  const std::size_t dim = psi.size();
  const double h = (s_end - s_begin) / static_cast<double>(steps);
  const cplx minus_i(0.0, -1.0);
  StateVector k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  auto deriv = [&](double s, const StateVector& x, StateVector& out) {
    apply_h0(basis, p, s, x, out);
    for (auto& v : out) v *= minus_i;
  };
  for (std::size_t k = 0; k < steps; ++k) {
    const double s = s_begin + static_cast<double>(k) * h;
    deriv(s, psi, k1);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + 0.5 * h * k1[i];
    deriv(s + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + 0.5 * h * k2[i];
    deriv(s + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + h * k3[i];
    deriv(s + h, tmp, k4);
    for (std::size_t i = 0; i < dim; ++i) {
      psi[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
}

void check_s_end(double s_end) {
  if (!(s_end > 0.0 && s_end <= 1.0)) throw DomainError("s_end must lie in (0, 1]");
}

std::size_t initial_step_count(const Graph& g, const AnnealParams& p, double s_end,
                               Integrator integrator) {
  double rate = 0.0;
  if (integrator == Integrator::rk4) {
    rate = h0_norm_bound(g, p) / 0.1;
  } else {
    // Split steps are exact for each factor separately; the step only has to
    // resolve the blockade oscillation and the Rabi / detuning rates.
    const double n = g.num_vertices();
    const double t = p.t_total;
    rate = std::max({p.omega0 * t, p.schedule.omega_max() * t * n / 2.0,
                     p.schedule.delta_max() * t * n, 4.0}) / 4.0;
  }
  const double steps = std::ceil(rate * s_end);
  return static_cast<std::size_t>(std::max(1.0, steps));
}

// Every probability that EvolutionResult reports, in a fixed order.
std::vector<double> reported_probabilities(const EvolutionResult& r, int n) {
  std::vector<double> out{r.p_is};
  for (int k = 0; k <= n; ++k) {
    auto it = r.sizes.by_size.find(k);
    const SizeProbability sp = it == r.sizes.by_size.end() ? SizeProbability{} : it->second;
    out.push_back(sp.unconditioned);
    out.push_back(r.sizes.conditioned_defined ? sp.conditioned : 0.0);
  }
  return out;
}

EvolutionResult summarize(StateVector psi, const Graph& g, std::size_t steps) {
  EvolutionResult r;
  r.sizes = size_distribution(psi, g);
  r.p_is = r.sizes.p_is;
  r.leakage = leakage_probability(psi, g);
  r.norm_drift = std::abs(norm(psi) - 1.0);
  r.steps_taken = steps;
  r.final_state = std::move(psi);
  return r;
}

}  // namespace

StateVector propagate(const BasisTable& basis, const AnnealParams& p, StateVector psi, double s_begin,
                      double s_end, std::size_t steps, Integrator integrator) {
  p.validate();
  if (psi.size() != basis.dim()) {
    throw DimensionError("state has " + std::to_string(psi.size()) + " entries, basis has " +
                         std::to_string(basis.dim()));
  }
  if (steps == 0) throw DomainError("step count must be positive");
  if (integrator == Integrator::split4) {
    propagate_split4(basis, p, psi, s_begin, s_end, steps);
  } else {
    propagate_rk4(basis, p, psi, s_begin, s_end, steps);
  }
  return psi;
}

EvolutionResult evolve_fixed_steps(const Graph& g, const AnnealParams& p, double s_end,
                                   std::size_t steps, Integrator integrator) {
  check_s_end(s_end);
  const BasisTable basis(g);
  StateVector psi(basis.dim());
  psi[0] = 1.0;
  return summarize(propagate(basis, p, std::move(psi), 0.0, s_end, steps, integrator), g, steps);
}

EvolutionResult evolve_full(const Graph& g, const AnnealParams& p, double s_end,
                            const EvolveOptions& opts) {
  p.validate();
  check_s_end(s_end);
  if (!(opts.tol > 0.0)) throw DomainError("tolerance must be positive");
  const BasisTable basis(g, opts.max_vertices);

  auto run = [&](std::size_t steps) {
    StateVector psi(basis.dim());
    psi[0] = 1.0;
    return summarize(propagate(basis, p, std::move(psi), 0.0, s_end, steps, opts.integrator), g, steps);
  };

  std::size_t steps = opts.initial_steps ? opts.initial_steps
                                         : initial_step_count(g, p, s_end, opts.integrator);
  if (steps > opts.max_steps) {
    throw ConvergenceError("initial step count " + std::to_string(steps) + " exceeds max_steps");
  }
  EvolutionResult coarse = run(steps);
  const int n = g.num_vertices();
  for (;;) {
    if (2 * steps > opts.max_steps) {
      throw ConvergenceError("step halving did not reach tol " + std::to_string(opts.tol) +
                             " within " + std::to_string(opts.max_steps) + " steps");
    }
    steps *= 2;
    EvolutionResult fine = run(steps);
    const auto a = reported_probabilities(coarse, n);
    const auto b = reported_probabilities(fine, n);
    double change = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) change = std::max(change, std::abs(a[i] - b[i]));
    const bool leakage_ok = opts.leakage_rtol <= 0.0 ||
                            std::abs(coarse.leakage - fine.leakage) <= opts.leakage_rtol * fine.leakage;
    if (change < opts.tol && leakage_ok) {
      fine.halving_change = change;
      return fine;
    }
    coarse = std::move(fine);
  }
}

double norm(std::span<const cplx> state) {
  double acc = 0.0;
  for (const auto& a : state) acc += std::norm(a);
  return std::sqrt(acc);
}

namespace {

void check_dim(std::span<const cplx> state, const Graph& g) {
  const int n = g.num_vertices();
  if (n >= kMaxVertices || state.size() != (std::size_t{1} << n)) {
    throw DimensionError("state has " + std::to_string(state.size()) + " entries, expected 2^" +
                         std::to_string(n));
  }
}

}  // namespace

double probability_in_is(std::span<const cplx> state, const Graph& g) {
  check_dim(state, g);
  double acc = 0.0;
  for (std::size_t m = 0; m < state.size(); ++m) {
    if (is_independent(g, VertexSet(m))) acc += std::norm(state[m]);
  }
  return acc;
}

double leakage_probability(std::span<const cplx> state, const Graph& g) {
  check_dim(state, g);
  double acc = 0.0;
  for (std::size_t m = 0; m < state.size(); ++m) {
    if (!is_independent(g, VertexSet(m))) acc += std::norm(state[m]);
  }
  return acc;
}

SizeDistribution size_distribution(std::span<const cplx> state, const Graph& g) {
  check_dim(state, g);
  const int n = g.num_vertices();
  std::vector<double> by_size(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<bool> present(static_cast<std::size_t>(n) + 1, false);
  for (std::size_t m = 0; m < state.size(); ++m) {
    const VertexSet s(m);
    if (!is_independent(g, s)) continue;
    const double prob = std::norm(state[m]);
    if (prob == 0.0) continue;
    by_size[static_cast<std::size_t>(s.size())] += prob;
    present[static_cast<std::size_t>(s.size())] = true;
  }
  SizeDistribution out;
  // Fixed summation order (ascending size) keeps p_is bitwise reproducible.
  out.p_is = std::accumulate(by_size.begin(), by_size.end(), 0.0);
  out.conditioned_defined = out.p_is > 0.0;
  for (int k = 0; k <= n; ++k) {
    if (!present[static_cast<std::size_t>(k)]) continue;
    const double u = by_size[static_cast<std::size_t>(k)];
    out.by_size[k] = {u, out.conditioned_defined ? u / out.p_is
                                                 : std::numeric_limits<double>::quiet_NaN()};
  }
  return out;
}

double expected_is_size(std::span<const cplx> state, const Graph& g) {
  const SizeDistribution d = size_distribution(state, g);
  if (!d.conditioned_defined) throw DomainError("state has no weight on independent sets");
  double acc = 0.0;
  for (const auto& [k, prob] : d.by_size) acc += k * prob.conditioned;
  return acc;
}

int sample_is_size(std::span<const cplx> state, const Graph& g, Engine& eng) {
  const SizeDistribution d = size_distribution(state, g);
  if (!d.conditioned_defined) throw DomainError("state has no weight on independent sets");
  const double u = uniform01(eng);
  double acc = 0.0;
  int last = 0;
  for (const auto& [k, prob] : d.by_size) {
    acc += prob.conditioned;
    last = k;
    if (u < acc) return k;
  }
  return last;
}

}  // namespace isanneal
