#include "isanneal/median.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "isanneal/errors.hpp"

namespace isanneal {

MedianGraph MedianGraph::build(const Graph& g, std::size_t limit) {
  MedianGraph mg;
  mg.source_ = g;
  mg.nodes_ = enumerate_independent_sets(g, limit);
  if (mg.nodes_.size() > std::size_t{UINT32_MAX}) throw ResourceError("median graph too large");

  // Each lattice edge is found from its larger endpoint by removing one vertex.
  std::vector<std::vector<Index>> lists(mg.nodes_.size());
  for (std::size_t i = 0; i < mg.nodes_.size(); ++i) {
    const Mask m = mg.nodes_[i].mask;
    for (Mask rest = m; rest; rest &= rest - 1) {
      const Mask smaller = m & ~(rest & (~rest + 1));
      const auto j = *mg.index_of(VertexSet(smaller));
      lists[i].push_back(j);
      lists[j].push_back(static_cast<Index>(i));
    }
  }
  mg.offsets_.reserve(lists.size() + 1);
  mg.offsets_.push_back(0);
  for (auto& l : lists) {
    std::sort(l.begin(), l.end());
    mg.max_degree_ = std::max(mg.max_degree_, static_cast<int>(l.size()));
    mg.adj_.insert(mg.adj_.end(), l.begin(), l.end());
    mg.offsets_.push_back(mg.adj_.size());
  }
  return mg;
}

std::optional<MedianGraph::Index> MedianGraph::index_of(VertexSet s) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), s);
  if (it == nodes_.end() || *it != s) return std::nullopt;
  return static_cast<Index>(it - nodes_.begin());
}

std::vector<std::pair<MedianGraph::Index, MedianGraph::Index>> MedianGraph::edge_list() const {
  std::vector<std::pair<Index, Index>> out;
  out.reserve(num_edges());
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (Index j : neighbors(i))
      if (j > i) out.emplace_back(static_cast<Index>(i), j);
  return out;
}

void apply_h_eff(const MedianGraph& mg, double omega, double delta, double t_total,
                 std::span<const cplx> x, std::span<cplx> y) {
  const std::size_t dim = mg.num_nodes();
  if (x.size() != dim || y.size() != dim) {
    throw DimensionError("state has " + std::to_string(x.size()) + " entries, median graph has " +
                         std::to_string(dim) + " nodes");
  }
  const double hop = 0.5 * omega * t_total;
  const double detune = delta * t_total;
  for (std::size_t i = 0; i < dim; ++i) {
    cplx acc = 0.0;
    for (auto j : mg.neighbors(i)) acc += x[j];
    y[i] = hop * acc - detune * mg.occupation(i) * x[i];
  }
}

StateVector apply_h_eff(const MedianGraph& mg, double omega, double delta, double t_total,
                        std::span<const cplx> x) {
  StateVector y(mg.num_nodes());
  apply_h_eff(mg, omega, delta, t_total, x, y);
  return y;
}

namespace {

double h_eff_norm_bound(const MedianGraph& mg, double omega, double delta, double t_total) {
  int occ = 0;
  for (const auto& s : mg.nodes()) occ = std::max(occ, s.size());
  return std::abs(t_total) * (0.5 * std::abs(omega) * mg.max_degree() + std::abs(delta) * occ);
}

// Smallest K with e * x^{K+1} / (K+1)! <= eps for x <= 1.
int taylor_order(double x, double eps) {
  double term = std::exp(1.0) * x;
  int k = 0;
  while (term > eps && k < 200) {
    ++k;
    term *= x / (k + 1);
  }
  return std::max(k, 1);
}

}  // namespace

StateVector walk_propagate(const MedianGraph& mg, double omega, double delta, double t_total,
                           StateVector psi, double s, double tol) {
  if (psi.size() != mg.num_nodes()) {
    throw DimensionError("state has " + std::to_string(psi.size()) + " entries, median graph has " +
                         std::to_string(mg.num_nodes()) + " nodes");
  }
  if (!(s >= 0.0)) throw DomainError("walk time must be nonnegative");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (s == 0.0) return psi;

  const double bound = h_eff_norm_bound(mg, omega, delta, t_total);
  const auto substeps = static_cast<std::size_t>(std::max(1.0, std::ceil(bound * s)));
  const double h = s / static_cast<double>(substeps);
  const int order = taylor_order(bound * h, tol / static_cast<double>(substeps));

  const std::size_t dim = psi.size();
  StateVector term(dim), next(dim);
  for (std::size_t step = 0; step < substeps; ++step) {
    term = psi;
    for (int k = 1; k <= order; ++k) {
      apply_h_eff(mg, omega, delta, t_total, term, next);
      const cplx factor = cplx(0.0, -h / k);
      for (std::size_t i = 0; i < dim; ++i) {
        term[i] = factor * next[i];
        psi[i] += term[i];
      }
    }
  }
  return psi;
}

WalkResult walk_evolve(const MedianGraph& mg, double omega, double delta, double t_total,
                       double s_end, double tol) {
  StateVector psi(mg.num_nodes());
  psi[0] = 1.0;
  WalkResult r;
  const double bound = h_eff_norm_bound(mg, omega, delta, t_total);
  r.steps = s_end > 0.0 ? static_cast<std::size_t>(std::max(1.0, std::ceil(bound * s_end))) : 0;
  r.state = walk_propagate(mg, omega, delta, t_total, std::move(psi), s_end, tol);
  double total = 0.0;
  for (std::size_t i = 0; i < r.state.size(); ++i) {
    const double prob = std::norm(r.state[i]);
    r.size_probs[mg.occupation(i)] += prob;
    total += prob;
  }
  r.p2 = r.size_probs.count(2) ? r.size_probs.at(2) : 0.0;
  r.norm_drift = std::abs(std::sqrt(total) - 1.0);
  return r;
}

double p2_short_time(int n, long long m, double omega, double t_total, double s) {
  if (!(s >= 0.0)) throw DomainError("s must be nonnegative");
  const double pairs = 0.5 * n * (n - 1.0) - static_cast<double>(m);
  return omega * omega * t_total * t_total * std::pow(s, 4) * pairs * pairs / 8.0;
}

double p2_perturbative_oracle(const MedianGraph& mg, double omega, double t_total, double s) {
  StateVector start(mg.num_nodes());
  start[0] = 1.0;
  const StateVector once = apply_h_eff(mg, omega, 0.0, t_total, start);
  const StateVector twice = apply_h_eff(mg, omega, 0.0, t_total, once);
  double acc = 0.0;
  for (std::size_t i = 0; i < twice.size(); ++i)
    if (mg.occupation(i) == 2) acc += std::norm(twice[i]);
  return std::pow(s, 4) / 4.0 * acc;
}

double p2_asymptotic_lower_bound(double c, double omega, double t_total, double kappa) {
  if (!(c >= 0.0 && c <= 0.5)) throw DomainError("density constant c must lie in [0, 0.5]");
  const double gap = 0.5 - c;
  return gap * gap * omega * omega * t_total * t_total * std::pow(kappa, 4) / 8.0;
}

void write_median_graph(std::ostream& out, const MedianGraph& mg) {
  const int n = mg.source_graph().num_vertices();
  out << "nodes " << mg.num_nodes() << " edges " << mg.num_edges() << '\n';
  for (std::size_t i = 0; i < mg.num_nodes(); ++i) {
    std::string bits(static_cast<std::size_t>(n), '0');
    for (int v : mg.node(i).vertices()) bits[static_cast<std::size_t>(v)] = '1';
    out << i << ' ' << mg.node(i).mask << ' ' << bits << '\n';
  }
  for (auto [i, j] : mg.edge_list()) out << i << ' ' << j << '\n';
}

}  // namespace isanneal
