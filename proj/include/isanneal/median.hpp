#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "isanneal/graph.hpp"
#include "isanneal/hilbert.hpp"

namespace isanneal {

/// The independent-set lattice of a graph: one node per independent set
/// (ascending by mask, node 0 is the empty set), edges between sets that
/// differ in exactly one vertex.
class MedianGraph {
 public:
  using Index = std::uint32_t;

  /// Throws ResourceError when the graph has more than `limit` independent sets.
  static MedianGraph build(const Graph& g, std::size_t limit = kDefaultIsLimit);

  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  std::size_t num_edges() const noexcept { return adj_.size() / 2; }
  const std::vector<VertexSet>& nodes() const noexcept { return nodes_; }
  VertexSet node(std::size_t i) const { return nodes_[i]; }
  int occupation(std::size_t i) const { return nodes_[i].size(); }

  std::span<const Index> neighbors(std::size_t i) const {
    return {adj_.data() + offsets_[i], adj_.data() + offsets_[i + 1]};
  }
  int max_degree() const noexcept { return max_degree_; }

  /// Index of an independent set, or nullopt if `s` is not a node.
  std::optional<Index> index_of(VertexSet s) const;

  /// Adjacent pairs (i < j), ascending.
  std::vector<std::pair<Index, Index>> edge_list() const;

  const Graph& source_graph() const noexcept { return source_; }

 private:
  Graph source_;
  std::vector<VertexSet> nodes_;
  std::vector<std::size_t> offsets_;
  std::vector<Index> adj_;
  int max_degree_ = 0;
};

/// y = T (Omega/2 A - Delta D) x with A the lattice adjacency and D the
/// diagonal of occupation numbers |mask|. Throws DimensionError on size mismatch.
void apply_h_eff(const MedianGraph& mg, double omega, double delta, double t_total,
                 std::span<const cplx> x, std::span<cplx> y);
StateVector apply_h_eff(const MedianGraph& mg, double omega, double delta, double t_total,
                        std::span<const cplx> x);

struct WalkResult {
  StateVector state;
  /// Probability on size-2 independent sets.
  double p2 = 0.0;
  std::map<int, double> size_probs;
  double norm_drift = 0.0;
  std::size_t steps = 0;
};

/// exp(-i H_eff s_end)|empty set>, by a Taylor series on substeps with
/// ||H_eff|| h <= 1; each substep's series is truncated once the remainder
/// bound drops below tol / substeps.
WalkResult walk_evolve(const MedianGraph& mg, double omega, double delta, double t_total,
                       double s_end, double tol = 1e-13);

/// Same propagation from an arbitrary start state.
StateVector walk_propagate(const MedianGraph& mg, double omega, double delta, double t_total,
                           StateVector psi, double s, double tol = 1e-13);

/// Closed-form short-time size-2 probability, counting every non-adjacent pair equally:
///   Omega^2 T^2 s^4 (n(n-1)/2 - m)^2 / 8.
double p2_short_time(int n, long long m, double omega, double t_total, double s);

/// Leading s^4 term of the size-2 probability computed from the lattice:
///   sum_i (s^4/4) |<pair_i| H_eff^2 |empty>|^2  with Delta = 0.
double p2_perturbative_oracle(const MedianGraph& mg, double omega, double t_total, double s);

/// (0.5 - c)^2 Omega^2 T^2 kappa^4 / 8 for edge density m ~ c n^2, 0 <= c <= 0.5.
double p2_asymptotic_lower_bound(double c, double omega, double t_total, double kappa);

/// Text export: "nodes N edges E", then N lines "<index> <mask> <bitstring>",
/// then E lines "<i> <j>".
void write_median_graph(std::ostream& out, const MedianGraph& mg);

}  // namespace isanneal
