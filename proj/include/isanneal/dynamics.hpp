#pragma once

#include <cstddef>
#include <map>
#include <span>

#include "isanneal/graph.hpp"
#include "isanneal/hilbert.hpp"
#include "isanneal/rng.hpp"

namespace isanneal {

/// Time stepper for i dpsi/ds = H0(s) psi.
enum class Integrator {
  /// Fourth-order Yoshida composition of symmetric splittings
  /// exp(-i D/2) exp(-i X) exp(-i D/2): the diagonal factor uses the exact
  /// integral of the detuning, the transverse factor is a product of
  /// single-vertex rotations at the substep midpoint. Exactly unitary.
  split4,
  /// Classical explicit Runge-Kutta 4 on the matrix-free H0.
  rk4,
};

struct EvolveOptions {
  /// Step-halving contract: the run is accepted when doubling the step count
  /// changes every reported probability by less than `tol`.
  double tol = 1e-6;
  Integrator integrator = Integrator::split4;
  /// Starting step count; 0 picks one from the Hamiltonian scales.
  std::size_t initial_steps = 0;
  /// When positive, the leakage 1 - p_is (summed directly over non-IS states)
  /// must also agree to this relative tolerance between step counts. Needed
  /// when leakage itself is the observable, since it sits far below `tol`.
  double leakage_rtol = 0.0;
  std::size_t max_steps = std::size_t{1} << 22;
  int max_vertices = 20;
};

struct SizeProbability {
  double unconditioned = 0.0;
  /// unconditioned / p_is; NaN when p_is == 0.
  double conditioned = 0.0;
};

/// Probability of measuring an independent set of each size.
struct SizeDistribution {
  std::map<int, SizeProbability> by_size;
  double p_is = 0.0;
  bool conditioned_defined = false;
};

struct EvolutionResult {
  StateVector final_state;
  double p_is = 0.0;
  /// Probability outside the IS subspace, summed over non-IS amplitudes.
  double leakage = 0.0;
  SizeDistribution sizes;
  /// | ||psi|| - 1 | at the end; the state is never renormalized.
  double norm_drift = 0.0;
  std::size_t steps_taken = 0;
  /// Largest change of any reported probability between the last two step
  /// counts (0 for single fixed-step runs).
  double halving_change = 0.0;
};

/// Evolves |empty set> from s = 0 to s_end under H0 and certifies the result by
/// step halving. Throws ConvergenceError past `max_steps`, ResourceError past
/// the vertex guard, DomainError for invalid parameters.
EvolutionResult evolve_full(const Graph& g, const AnnealParams& p, double s_end,
                            const EvolveOptions& opts = {});

/// One fixed-step run without certification.
EvolutionResult evolve_fixed_steps(const Graph& g, const AnnealParams& p, double s_end,
                                   std::size_t steps, Integrator integrator = Integrator::split4);

/// Same as `evolve_fixed_steps` but from an arbitrary initial state.
StateVector propagate(const BasisTable& basis, const AnnealParams& p, StateVector psi, double s_begin,
                      double s_end, std::size_t steps, Integrator integrator);

double probability_in_is(std::span<const cplx> state, const Graph& g);

/// Sum of |psi_m|^2 over non-independent basis states.
double leakage_probability(std::span<const cplx> state, const Graph& g);

SizeDistribution size_distribution(std::span<const cplx> state, const Graph& g);

/// Mean IS size conditioned on measuring an IS. Throws DomainError if p_is == 0.
double expected_is_size(std::span<const cplx> state, const Graph& g);

/// One simulated measurement conditioned on landing in the IS subspace:
/// draws a size from the conditioned distribution. Throws DomainError if p_is == 0.
int sample_is_size(std::span<const cplx> state, const Graph& g, Engine& eng);

double norm(std::span<const cplx> state);

}  // namespace isanneal
