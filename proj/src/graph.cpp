#include "isanneal/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "isanneal/errors.hpp"
#include "isanneal/rng.hpp"

namespace isanneal {

namespace {

constexpr Mask bit(int v) { return Mask{1} << v; }

int lowest(Mask m) { return std::countr_zero(m); }

// Branch-and-bound for the independence number of the subgraph induced by a
// candidate mask. Reductions: a residual vertex of degree <= 1 is always in
// some maximum set. Branching: some maximum set contains the minimum-degree
// vertex v or one of its residual neighbours.
class MisSearch {
 public:
  explicit MisSearch(const Graph& g) : g_(g) {}

  int alpha(Mask cand, int lower_bound) {
    best_ = lower_bound;
    search(cand, 0);
    return best_;
  }

 private:
  int clique_cover_bound(Mask rem) const {
    int count = 0;
    while (rem) {
      const int v = lowest(rem);
      Mask clique_cands = g_.neighbors(v) & rem;
      rem &= ~bit(v);
      while (clique_cands) {
        const int u = lowest(clique_cands);
        rem &= ~bit(u);
        clique_cands &= g_.neighbors(u);
      }
      ++count;
    }
    return count;
  }

  void search(Mask cand, int size) {
    for (;;) {
      if (cand == 0) {
        best_ = std::max(best_, size);
        return;
      }
      if (size + std::popcount(cand) <= best_) return;

      int v = -1;
      int best_deg = kMaxVertices + 1;
      for (Mask rest = cand; rest; rest &= rest - 1) {
        const int u = lowest(rest);
        const int d = std::popcount(g_.neighbors(u) & cand);
        if (d < best_deg) {
          best_deg = d;
          v = u;
          if (d <= 1) break;
        }
      }
      if (best_deg > 1) break;
      cand &= ~(g_.neighbors(v) | bit(v));
      ++size;
    }

    if (size + clique_cover_bound(cand) <= best_) return;

    int v = -1;
    int best_deg = kMaxVertices + 1;
    for (Mask rest = cand; rest; rest &= rest - 1) {
      const int u = lowest(rest);
      const int d = std::popcount(g_.neighbors(u) & cand);
      if (d < best_deg) {
        best_deg = d;
        v = u;
      }
    }

    // Branch u in N[v]; vertices already branched on are excluded afterwards.
    search(cand & ~(g_.neighbors(v) | bit(v)), size + 1);
    Mask tried = bit(v);
    for (Mask rest = g_.neighbors(v) & cand; rest; rest &= rest - 1) {
      const int u = lowest(rest);
      search(cand & ~(g_.neighbors(u) | bit(u) | tried), size + 1);
      tried |= bit(u);
    }
  }

  const Graph& g_;
  int best_ = 0;
};

}  // namespace

VertexSet VertexSet::of(std::initializer_list<int> vertices) {
  Mask m = 0;
  for (int v : vertices) {
    if (v < 0 || v >= kMaxVertices) throw DomainError("vertex label out of range");
    m |= bit(v);
  }
  return VertexSet(m);
}

std::vector<int> VertexSet::vertices() const {
  std::vector<int> out;
  for (Mask m = mask; m; m &= m - 1) out.push_back(lowest(m));
  return out;
}

Graph::Graph(int n, const std::vector<Edge>& edges) : n_(n), nbr_(static_cast<std::size_t>(n), 0) {
  if (n < 0 || n > kMaxVertices) {
    throw DomainError("vertex count must be in [0, " + std::to_string(kMaxVertices) + "]");
  }
  edges_.reserve(edges.size());
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw DomainError("edge (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
    }
    if (i == j) throw DomainError("self-loop at vertex " + std::to_string(i));
    if (i > j) std::swap(i, j);
    if (nbr_[static_cast<std::size_t>(i)] & bit(j)) {
      throw DomainError("duplicate edge (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    nbr_[static_cast<std::size_t>(i)] |= bit(j);
    nbr_[static_cast<std::size_t>(j)] |= bit(i);
    edges_.emplace_back(i, j);
  }
  std::sort(edges_.begin(), edges_.end());
}

Graph Graph::empty(int n) { return Graph(n, {}); }

Graph Graph::complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, e);
}

Graph erdos_renyi(int n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("edge probability must lie in [0, 1]");
  if (n < 0 || n > kMaxVertices) throw DomainError("vertex count out of range");
  Engine eng(seed);
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (uniform01(eng) < p) e.emplace_back(i, j);
  return Graph(n, e);
}

bool is_independent(const Graph& g, VertexSet s) {
  for (Mask m = s.mask; m; m &= m - 1)
    if (g.neighbors(lowest(m)) & s.mask) return false;
  return true;
}

int violated_edges(const Graph& g, VertexSet s) {
  int twice = 0;
  for (Mask m = s.mask; m; m &= m - 1) twice += std::popcount(g.neighbors(lowest(m)) & s.mask);
  return twice / 2;
}

bool is_maximal_independent(const Graph& g, VertexSet s) {
  if (!is_independent(g, s)) return false;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (!s.contains(v) && !(g.neighbors(v) & s.mask)) return false;
  return true;
}

namespace {

// Visits each independent set exactly once: extend only with vertices above
// the last one added.
template <class Visit>
void for_each_independent_set(const Graph& g, Mask current, Mask cand, Visit& visit) {
  visit(current);
  for (Mask rest = cand; rest; rest &= rest - 1) {
    const int v = lowest(rest);
    const Mask above = ~((bit(v) << 1) - 1);
    for_each_independent_set(g, current | bit(v), cand & above & ~g.neighbors(v), visit);
  }
}

}  // namespace

std::vector<VertexSet> enumerate_independent_sets(const Graph& g, std::size_t limit) {
  std::vector<VertexSet> out;
  auto visit = [&](Mask m) {
    if (out.size() >= limit) {
      throw ResourceError("independent-set count exceeds limit " + std::to_string(limit));
    }
    out.emplace_back(m);
  };
  for_each_independent_set(g, 0, g.full_mask(), visit);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t count_independent_sets(const Graph& g, std::size_t limit) {
  std::size_t count = 0;
  auto visit = [&](Mask) {
    if (count >= limit) {
      throw ResourceError("independent-set count exceeds limit " + std::to_string(limit));
    }
    ++count;
  };
  for_each_independent_set(g, 0, g.full_mask(), visit);
  return count;
}

VertexSet greedy_mis(const Graph& g) {
  Mask chosen = 0;
  Mask remaining = g.full_mask();
  while (remaining) {
    int pick = -1;
    int pick_deg = kMaxVertices + 1;
    for (Mask rest = remaining; rest; rest &= rest - 1) {
      const int u = lowest(rest);  // ascending, so strict < keeps the smallest label
      const int d = std::popcount(g.neighbors(u) & remaining);
      if (d < pick_deg) {
        pick_deg = d;
        pick = u;
      }
    }
    chosen |= bit(pick);
    remaining &= ~(bit(pick) | g.neighbors(pick));
  }
  return VertexSet(chosen);
}

namespace {

void check_exact_guard(const Graph& g, int max_vertices) {
  if (g.num_vertices() > max_vertices) {
    throw ResourceError("exact MIS limited to " + std::to_string(max_vertices) + " vertices, got " +
                        std::to_string(g.num_vertices()));
  }
}

int alpha_of(const Graph& g, Mask cand) {
  MisSearch search(g);
  return search.alpha(cand, 0);
}

}  // namespace

int mis_size(const Graph& g, int max_vertices) {
  check_exact_guard(g, max_vertices);
  MisSearch search(g);
  return search.alpha(g.full_mask(), greedy_mis(g).size() - 1);
}

VertexSet exact_mis(const Graph& g, int max_vertices) {
  const int alpha = mis_size(g, max_vertices);
  // Fix vertices from the highest label down, excluding whenever an optimum
  // survives: this yields the optimum with the smallest mask value.
  Mask chosen = 0;
  Mask cand = g.full_mask();
  for (int v = g.num_vertices() - 1; v >= 0; --v) {
    if (!(cand & bit(v))) continue;
    const Mask without = cand & ~bit(v);
    if (std::popcount(chosen) + alpha_of(g, without) == alpha) {
      cand = without;
    } else {
      chosen |= bit(v);
      cand &= ~(bit(v) | g.neighbors(v));
    }
  }
  return VertexSet(chosen);
}

Graph read_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_content_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      const auto first = out.find_first_not_of(" \t\r");
      if (first == std::string::npos || out[first] == '#') continue;
      return true;
    }
    return false;
  };

  if (!next_content_line(line)) throw ParseError(0, "empty graph file: expected header 'n m'");
  long long n = -1;
  long long m = -1;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> n >> m) || (hs >> extra)) throw ParseError(lineno, "expected header 'n m'");
  }
  if (n < 0 || n > kMaxVertices) {
    throw ParseError(lineno, "vertex count must be in [0, " + std::to_string(kMaxVertices) + "]");
  }
  if (m < 0 || m > n * (n - 1) / 2) throw ParseError(lineno, "edge count out of range");

  std::vector<Edge> edges;
  Edge previous{-1, -1};
  for (long long k = 0; k < m; ++k) {
    if (!next_content_line(line)) {
      throw ParseError(lineno, "expected " + std::to_string(m) + " edges, found " + std::to_string(k));
    }
    std::istringstream es(line);
    long long i = 0;
    long long j = 0;
    std::string extra;
    if (!(es >> i >> j) || (es >> extra)) throw ParseError(lineno, "expected edge 'i j'");
    if (i < 0 || j < 0 || i >= n || j >= n) throw ParseError(lineno, "edge endpoint out of range");
    if (i == j) throw ParseError(lineno, "self-loop");
    if (i > j) std::swap(i, j);
    const Edge e{static_cast<int>(i), static_cast<int>(j)};
    if (e == previous) throw ParseError(lineno, "duplicate edge");
    previous = e;
    edges.push_back(e);
  }
  if (next_content_line(line)) throw ParseError(lineno, "unexpected content after edge list");
  try {
    return Graph(static_cast<int>(n), edges);
  } catch (const DomainError& err) {
    throw ParseError(0, err.what());
  }
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open graph file '" + path + "'");
  return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (auto [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

void write_graph_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw ResourceError("cannot write graph file '" + path + "'");
  write_graph(out, g);
}

}  // namespace isanneal
