#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "isanneal/dynamics.hpp"
#include "isanneal/errors.hpp"
#include "isanneal/median.hpp"
#include "oracles.hpp"

using namespace isanneal;

namespace {

StateVector random_state(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  StateVector v(dim);
  for (auto& a : v) a = {nd(rng), nd(rng)};
  return v;
}

}  // namespace

TEST_SUITE("median") {
  TEST_CASE("lattice of the five-vertex example") {
    const MedianGraph mg = MedianGraph::build(oracle::fig2_graph());
    CHECK(mg.num_nodes() == 11);
    CHECK(mg.num_edges() == 16);
    CHECK(mg.node(0).empty());
    int by_level[3] = {0, 0, 0};
    for (auto [i, j] : mg.edge_list()) by_level[std::min(mg.occupation(i), mg.occupation(j))]++;
    CHECK(by_level[0] == 5);
    CHECK(by_level[1] == 8);
    CHECK(by_level[2] == 3);
    CHECK(mg.index_of(VertexSet::of({0, 2, 4})).has_value());
    CHECK_FALSE(mg.index_of(VertexSet::of({0, 1})).has_value());
  }

  TEST_CASE("small lattices") {
    const MedianGraph square = MedianGraph::build(Graph::empty(2));
    CHECK(square.num_nodes() == 4);
    CHECK(square.num_edges() == 4);
    for (int n = 1; n <= 7; ++n) {
      const MedianGraph star = MedianGraph::build(Graph::complete(n));
      CHECK(star.num_nodes() == static_cast<std::size_t>(n + 1));
      CHECK(star.num_edges() == static_cast<std::size_t>(n));
      CHECK(star.max_degree() == n);
    }
    CHECK_THROWS_AS(MedianGraph::build(Graph::empty(12), 100), ResourceError);
  }

  TEST_CASE("nodes and adjacency equal the brute-force relation") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 40; ++trial) {
      const Graph g = erdos_renyi(1 + trial % 12, 0.45, rng());
      const MedianGraph mg = MedianGraph::build(g);
      const auto sets = oracle::all_independent_sets(g);
      REQUIRE(mg.num_nodes() == sets.size());
      std::size_t pairs = 0;
      for (std::size_t i = 0; i < sets.size(); ++i) {
        REQUIRE(mg.node(i).mask == sets[i]);
        for (std::size_t j = i + 1; j < sets.size(); ++j) pairs += std::popcount(sets[i] ^ sets[j]) == 1;
      }
      REQUIRE(mg.num_edges() == pairs);
      for (auto [i, j] : mg.edge_list()) REQUIRE(std::popcount(mg.node(i).mask ^ mg.node(j).mask) == 1);
    }
  }

  TEST_CASE("effective Hamiltonian action") {
    const MedianGraph sq = MedianGraph::build(Graph::empty(2));
    StateVector e0(4);
    e0[0] = 1.0;
    const StateVector y = apply_h_eff(sq, 0.6, 0.0, 5.0, e0);
    CHECK(std::abs(y[1] - cplx(1.5)) < 1e-15);
    CHECK(std::abs(y[2] - cplx(1.5)) < 1e-15);
    CHECK(y[0] == cplx(0.0));
    CHECK(y[3] == cplx(0.0));
    CHECK_THROWS_AS(apply_h_eff(sq, 1.0, 0.0, 1.0, StateVector(3)), DimensionError);
  }

  TEST_CASE("effective Hamiltonian is Hermitian") {
    std::mt19937_64 rng(8);
    const MedianGraph mg = MedianGraph::build(erdos_renyi(9, 0.4, 2));
    for (int trial = 0; trial < 20; ++trial) {
      const StateVector u = random_state(mg.num_nodes(), rng);
      const StateVector v = random_state(mg.num_nodes(), rng);
      const StateVector hv = apply_h_eff(mg, 1.1, 0.7, 3.0, v);
      const StateVector hu = apply_h_eff(mg, 1.1, 0.7, 3.0, u);
      cplx a = 0.0, b = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        a += std::conj(u[i]) * hv[i];
        b += std::conj(v[i]) * hu[i];
      }
      REQUIRE(std::abs(a - std::conj(b)) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
  }

  TEST_CASE("effective Hamiltonian is the independent-set block of the full Hamiltonian") {
    std::mt19937_64 rng(19);
    for (int n = 1; n <= 5; ++n) {
      for (int trial = 0; trial < 3; ++trial) {
        const Graph g = erdos_renyi(n, 0.5, rng());
        const MedianGraph mg = MedianGraph::build(g);
        const double omega = 0.9, delta = -0.4, t = 2.5, omega0 = 13.0;
        const Eigen::MatrixXcd h = oracle::dense_h0(g, omega, delta, t, omega0);
        for (std::size_t j = 0; j < mg.num_nodes(); ++j) {
          StateVector e(mg.num_nodes());
          e[j] = 1.0;
          const StateVector col = apply_h_eff(mg, omega, delta, t, e);
          for (std::size_t i = 0; i < mg.num_nodes(); ++i) {
            const auto r = static_cast<Eigen::Index>(mg.node(i).mask);
            const auto c = static_cast<Eigen::Index>(mg.node(j).mask);
            REQUIRE(std::abs(col[i] - h(r, c)) <= 1e-12);
          }
        }
      }
    }
  }

  TEST_CASE("two free vertices follow the product solution") {
    const MedianGraph sq = MedianGraph::build(Graph::empty(2));
    for (double t : {1.0, 4.0}) {
      for (double s : {0.05, 0.3, 0.75, 1.0}) {
        const WalkResult w = walk_evolve(sq, 1.0, 0.0, t, s);
        CHECK(w.p2 == doctest::Approx(std::pow(std::sin(t * s / 2.0), 4)).epsilon(1e-12));
        CHECK(w.norm_drift <= 1e-12);
      }
    }
  }

  TEST_CASE("zero walk time") {
    const MedianGraph mg = MedianGraph::build(oracle::fig2_graph());
    const WalkResult w = walk_evolve(mg, 1.0, 0.0, 3.0, 0.0);
    CHECK(w.p2 == 0.0);
    CHECK(w.state[0] == cplx(1.0));
    CHECK_THROWS_AS(walk_evolve(mg, 1.0, 0.0, 3.0, -0.1), DomainError);
  }

  TEST_CASE("walk matches the dense exponential of the projected Hamiltonian") {
    std::mt19937_64 rng(4);
    const Graph g = erdos_renyi(7, 0.4, rng());
    const MedianGraph mg = MedianGraph::build(g);
    const auto dim = static_cast<Eigen::Index>(mg.num_nodes());
    Eigen::MatrixXcd h(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      StateVector e(mg.num_nodes());
      e[static_cast<std::size_t>(j)] = 1.0;
      h.col(j) = oracle::to_eigen(apply_h_eff(mg, 1.0, 0.3, 6.0, e));
    }
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(dim);
    e0(0) = 1.0;
    const Eigen::VectorXcd expect = oracle::expm_apply(h, 0.8, e0);
    const WalkResult w = walk_evolve(mg, 1.0, 0.3, 6.0, 0.8);
    for (Eigen::Index i = 0; i < dim; ++i) REQUIRE(std::abs(w.state[static_cast<std::size_t>(i)] - expect(i)) <= 1e-11);
  }

  TEST_CASE("walk agrees with the full space in the deep-blockade limit") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 4; ++trial) {
      const Graph g = erdos_renyi(4 + trial % 3, 0.5, rng());
      const double t = 2.0, s = 1.0;
      const MedianGraph mg = MedianGraph::build(g);
      const WalkResult w = walk_evolve(mg, 1.0, 0.0, t, s);
      const auto full = evolve_full(g, AnnealParams{t, 1e4, Schedule::fig3()}, s, EvolveOptions{.tol = 1e-6});
      double tv = 0.5 * full.leakage;
      for (std::size_t i = 0; i < mg.num_nodes(); ++i) {
        tv += 0.5 * std::abs(std::norm(w.state[i]) - std::norm(full.final_state[mg.node(i).mask]));
      }
      CHECK(tv <= 1e-3);
    }
  }

  TEST_CASE("short-time closed form") {
    CHECK(p2_short_time(6, 15, 1.0, 2.0, 0.4) == 0.0);
    CHECK(p2_short_time(6, 3, 1.0, 2.0, 0.0) == 0.0);
    CHECK(p2_short_time(20, 95, 1.0, 1.0, 0.1) == doctest::Approx(0.1128125).epsilon(1e-12));
    CHECK_THROWS_AS(p2_short_time(5, 0, 1.0, 1.0, -0.5), DomainError);
  }

  TEST_CASE("perturbative oracle") {
    const MedianGraph sq = MedianGraph::build(Graph::empty(2));
    for (double t : {1.0, 3.0}) {
      CHECK(p2_perturbative_oracle(sq, 1.0, t, 1.0) == doctest::Approx(std::pow(t, 4) / 16.0).epsilon(1e-12));
    }
    CHECK(p2_perturbative_oracle(MedianGraph::build(Graph::complete(6)), 1.0, 2.0, 0.3) == 0.0);

    const MedianGraph mg = MedianGraph::build(oracle::fig2_graph());
    const double coeff = p2_perturbative_oracle(mg, 1.0, 1.0, 1.0);
    // Four non-adjacent pairs, each reached along two paths of amplitude 1/4.
    CHECK(coeff == doctest::Approx(4.0 * 0.25 / 4.0).epsilon(1e-12));
    const double s = 1e-3;
    CHECK(walk_evolve(mg, 1.0, 0.0, 1.0, s).p2 / std::pow(s, 4) == doctest::Approx(coeff).epsilon(1e-4));
  }

  TEST_CASE("asymptotic lower bound") {
    CHECK(p2_asymptotic_lower_bound(0.5, 1.0, 1.0, 1.0) == 0.0);
    CHECK(p2_asymptotic_lower_bound(0.0, 1.0, 1.0, 1.0) == doctest::Approx(1.0 / 32.0));
    CHECK(p2_asymptotic_lower_bound(0.25, 1.0, 1.0, 20.0) == doctest::Approx(0.0625 * 160000.0 / 8.0));
    CHECK_THROWS_AS(p2_asymptotic_lower_bound(0.6, 1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(p2_asymptotic_lower_bound(-0.1, 1.0, 1.0, 1.0), DomainError);
  }

  TEST_CASE("walk unitarity and probability range") {
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 20; ++trial) {
      const Graph g = erdos_renyi(6 + trial % 8, 0.5, rng());
      const MedianGraph mg = MedianGraph::build(g);
      const WalkResult w = walk_evolve(mg, 1.0, 0.2, 20.0 / g.num_vertices(), 1.0);
      REQUIRE(w.norm_drift <= 1e-9);
      REQUIRE(w.p2 >= 0.0);
      REQUIRE(w.p2 <= 1.0);
    }
  }

  TEST_CASE("text export") {
    std::ostringstream out;
    write_median_graph(out, MedianGraph::build(Graph(3, {{0, 1}})));
    CHECK(out.str() ==
          "nodes 6 edges 7\n"
          "0 0 000\n1 1 100\n2 2 010\n3 4 001\n4 5 101\n5 6 011\n"
          "0 1\n0 2\n0 3\n1 4\n2 5\n3 4\n3 5\n");
  }
}
