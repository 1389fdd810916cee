#include "isanneal/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isanneal/errors.hpp"

namespace isanneal {

void AnnealParams::validate() const {
  if (!(t_total > 0.0) || !std::isfinite(t_total)) throw DomainError("runtime T must be positive");
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw DomainError("blockade strength omega0 must be positive");
}

BasisTable::BasisTable(const Graph& g, int max_vertices) : n_(g.num_vertices()) {
  if (n_ > max_vertices || n_ > kMaxFullSpaceVertices) {
    throw ResourceError("full Hilbert space limited to " +
                        std::to_string(std::min(max_vertices, kMaxFullSpaceVertices)) +
                        " vertices, got " + std::to_string(n_));
  }
  const std::size_t dim = std::size_t{1} << n_;
  occupation_.resize(dim);
  violated_.resize(dim);
  for (std::size_t m = 1; m < dim; ++m) {
    // Strip the lowest vertex v: N_e(m) = N_e(m \ v) + |nbr(v) & m|.
    const int v = std::countr_zero(m);
    const std::size_t rest = m & (m - 1);
    occupation_[m] = static_cast<std::uint8_t>(occupation_[rest] + 1);
    violated_[m] = static_cast<std::uint16_t>(violated_[rest] + std::popcount(g.neighbors(v) & rest));
    max_violated_ = std::max<int>(max_violated_, violated_[m]);
  }
}

double diagonal_energy(const Graph& g, VertexSet m, double s, const AnnealParams& p) {
  const double t = p.t_total;
  return -p.schedule.delta(s) * t * m.size() + p.omega0 * t * violated_edges(g, m);
}

void apply_h0(const BasisTable& basis, const AnnealParams& p, double s, std::span<const cplx> x,
              std::span<cplx> y) {
  const std::size_t dim = basis.dim();
  if (x.size() != dim || y.size() != dim) {
    throw DimensionError("state has " + std::to_string(x.size()) + " entries, basis has " +
                         std::to_string(dim));
  }
  const double half_rabi = 0.5 * p.schedule.omega(s) * p.t_total;
  const double detuning = p.schedule.delta(s) * p.t_total;
  const double blockade = p.omega0 * p.t_total;
  const int n = basis.num_vertices();
  for (std::size_t m = 0; m < dim; ++m) {
    cplx flip_sum = 0.0;
    for (int j = 0; j < n; ++j) flip_sum += x[m ^ (std::size_t{1} << j)];
    const double diag = -detuning * basis.occupation(m) + blockade * basis.violated(m);
    y[m] = half_rabi * flip_sum + diag * x[m];
  }
}

StateVector apply_h0(const Graph& g, const AnnealParams& p, double s, std::span<const cplx> x) {
  const BasisTable basis(g);
  StateVector y(basis.dim());
  apply_h0(basis, p, s, x, y);
  return y;
}

cplx interaction_phase(const Graph& g, const AnnealParams& p, VertexSet m, double s) {
  const double t = p.t_total;
  const double energy = violated_edges(g, m) * p.omega0 * t;
  const double angle = energy * s - m.size() * t * p.schedule.delta_integral(s);
  return std::polar(1.0, -angle);
}

double h0_norm_bound(const Graph& g, const AnnealParams& p) {
  const double n = g.num_vertices();
  const double t = p.t_total;
  return p.schedule.omega_max() * t * n / 2.0 + p.schedule.delta_max() * t * n +
         p.omega0 * t * static_cast<double>(g.num_edges());
}

}  // namespace isanneal
