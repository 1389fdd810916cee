#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "isanneal/graph.hpp"
#include "isanneal/schedule.hpp"

namespace isanneal {

using cplx = std::complex<double>;
using StateVector = std::vector<cplx>;

/// Runtime T, blockade strength omega0 and the (Omega, Delta) schedule.
/// Dimensionless: the state obeys i dpsi/ds = H0(s) psi with
///   H0(s) = (Omega(s) T / 2) sum_j X_j - Delta(s) T sum_j n_j + omega0 T sum_<ij> n_i n_j.
struct AnnealParams {
  double t_total = 1.0;
  double omega0 = 1.0;
  Schedule schedule = Schedule::fig4();

  /// Throws DomainError unless t_total > 0 and omega0 > 0.
  void validate() const;
};

inline constexpr int kMaxFullSpaceVertices = 26;

/// Occupation n_m and violated-edge count N_e(m) of every basis state m < 2^n.
class BasisTable {
 public:
  explicit BasisTable(const Graph& g, int max_vertices = kMaxFullSpaceVertices);

  std::size_t dim() const noexcept { return occupation_.size(); }
  int num_vertices() const noexcept { return n_; }
  int occupation(std::size_t m) const { return occupation_[m]; }
  int violated(std::size_t m) const { return violated_[m]; }
  bool independent(std::size_t m) const { return violated_[m] == 0; }
  int max_violated() const noexcept { return max_violated_; }

 private:
  int n_;
  int max_violated_ = 0;
  std::vector<std::uint8_t> occupation_;
  std::vector<std::uint16_t> violated_;
};

/// Diagonal entry of H0(s): -Delta(s) T n_m + omega0 T N_e(m).
double diagonal_energy(const Graph& g, VertexSet m, double s, const AnnealParams& p);

/// y = H0(s) x, matrix-free. Throws DimensionError unless both spans have 2^n entries.
void apply_h0(const BasisTable& basis, const AnnealParams& p, double s, std::span<const cplx> x,
              std::span<cplx> y);
StateVector apply_h0(const Graph& g, const AnnealParams& p, double s, std::span<const cplx> x);

/// Diagonal element of the interaction-picture transform U_I(s) for basis state m:
///   exp(-i (N_e(m) omega0 T s - n_m T int_0^s Delta)).
cplx interaction_phase(const Graph& g, const AnnealParams& p, VertexSet m, double s);

/// Upper bound on the spectral norm of H0 over the schedule, from the
/// row-sum estimate Omega_max T n / 2 + Delta_max T n + omega0 T |E|.
double h0_norm_bound(const Graph& g, const AnnealParams& p);

}  // namespace isanneal
