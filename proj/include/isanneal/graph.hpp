#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace isanneal {

using Mask = std::uint64_t;

inline constexpr int kMaxVertices = 64;

/// Subset of vertices as a bitmask; bit i set means vertex i is selected
/// (equivalently, atom i is in the Rydberg state). Doubles as a computational
/// basis index.
struct VertexSet {
  Mask mask = 0;

  constexpr VertexSet() = default;
  constexpr explicit VertexSet(Mask m) : mask(m) {}

  static VertexSet of(std::initializer_list<int> vertices);

  constexpr int size() const noexcept { return std::popcount(mask); }
  constexpr bool contains(int v) const noexcept { return (mask >> v) & 1U; }
  constexpr bool empty() const noexcept { return mask == 0; }
  std::vector<int> vertices() const;

  friend constexpr bool operator==(VertexSet, VertexSet) = default;
  friend constexpr auto operator<=>(VertexSet a, VertexSet b) { return a.mask <=> b.mask; }
};

using Edge = std::pair<int, int>;

/// Simple undirected graph on vertices 0..n-1, n <= 64. Immutable once built.
class Graph {
 public:
  Graph() = default;

  /// Throws DomainError on self-loops, duplicates or out-of-range endpoints.
  Graph(int n, const std::vector<Edge>& edges);

  static Graph empty(int n);
  static Graph complete(int n);

  int num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  /// Edges with i < j, sorted lexicographically.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  Mask neighbors(int v) const { return nbr_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return std::popcount(neighbors(v)); }
  bool has_edge(int i, int j) const { return (neighbors(i) >> j) & 1U; }

  /// All-ones mask over the n vertices.
  Mask full_mask() const noexcept { return n_ == 64 ? ~Mask{0} : (Mask{1} << n_) - 1; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<Mask> nbr_;
};

/// G(n, p): each of the C(n,2) pairs (i<j, lexicographic order) is included
/// when uniform01(mt19937_64(seed)) < p.
Graph erdos_renyi(int n, double p, std::uint64_t seed);

bool is_independent(const Graph& g, VertexSet s);

/// Number of edges with both endpoints in `s`.
int violated_edges(const Graph& g, VertexSet s);

/// No vertex outside `s` can be added without creating a violated edge.
bool is_maximal_independent(const Graph& g, VertexSet s);

inline constexpr std::size_t kDefaultIsLimit = std::size_t{1} << 24;

/// All independent sets, ascending by mask (so the empty set comes first).
/// Throws ResourceError once more than `limit` sets have been found.
std::vector<VertexSet> enumerate_independent_sets(const Graph& g,
                                                  std::size_t limit = kDefaultIsLimit);

/// Number of independent sets, without materializing them.
std::size_t count_independent_sets(const Graph& g, std::size_t limit = kDefaultIsLimit);

/// Minimum-degree greedy: repeatedly take the vertex of least degree in the
/// residual induced subgraph (smallest label on ties) and delete its closed
/// neighborhood.
VertexSet greedy_mis(const Graph& g);

inline constexpr int kExactMisMaxVertices = 48;

/// A maximum independent set. Among optima the one with the smallest mask
/// value is returned. Throws ResourceError above `max_vertices`.
VertexSet exact_mis(const Graph& g, int max_vertices = kExactMisMaxVertices);

/// Independence number alpha(g).
int mis_size(const Graph& g, int max_vertices = kExactMisMaxVertices);

// Text format: "n m" then m lines "i j", 0-based, i < j, lexicographic order.
// Blank lines and lines starting with '#' are ignored on input.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);
void write_graph_file(const std::string& path, const Graph& g);

}  // namespace isanneal
