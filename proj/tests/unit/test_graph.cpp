#include <doctest.h>

#include <random>
#include <sstream>

#include "isanneal/errors.hpp"
#include "isanneal/graph.hpp"
#include "isanneal/rng.hpp"
#include "oracles.hpp"

using namespace isanneal;

namespace {

Graph random_graph(std::mt19937_64& rng, int n_min, int n_max) {
  std::uniform_int_distribution<int> nd(n_min, n_max);
  std::uniform_real_distribution<double> pd(0.0, 1.0);
  return erdos_renyi(nd(rng), pd(rng), rng());
}

}  // namespace

TEST_SUITE("graph") {
  TEST_CASE("construction normalizes and validates edges") {
    const Graph g(4, {{2, 1}, {0, 3}, {1, 0}});
    CHECK(g.edges() == std::vector<Edge>{{0, 1}, {0, 3}, {1, 2}});
    CHECK(g.has_edge(2, 1));
    CHECK(g.has_edge(1, 2));
    CHECK(g.degree(1) == 2);
    CHECK_THROWS_AS(Graph(3, {{1, 1}}), DomainError);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), DomainError);
    CHECK_THROWS_AS(Graph(3, {{0, 3}}), DomainError);
    CHECK_THROWS_AS(Graph(3, {{-1, 2}}), DomainError);
    CHECK_THROWS_AS(Graph(65, {}), DomainError);
  }

  TEST_CASE("neighbor masks are symmetric") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const Graph g = random_graph(rng, 1, 20);
      for (int i = 0; i < g.num_vertices(); ++i)
        for (int j = 0; j < g.num_vertices(); ++j) REQUIRE(g.has_edge(i, j) == g.has_edge(j, i));
    }
  }

  TEST_CASE("erdos_renyi extremes and domain") {
    CHECK(erdos_renyi(5, 0.0, 123).num_edges() == 0);
    CHECK(erdos_renyi(4, 1.0, 99).num_edges() == 6);
    CHECK(erdos_renyi(4, 1.0, 99) == Graph::complete(4));
    CHECK_THROWS_AS(erdos_renyi(4, -0.1, 1), DomainError);
    CHECK_THROWS_AS(erdos_renyi(4, 1.5, 1), DomainError);
  }

  TEST_CASE("erdos_renyi follows the documented generator") {
    for (std::uint64_t seed : {1ULL, 42ULL, 0xDEADBEEFULL}) {
      std::mt19937_64 eng(seed);
      std::vector<Edge> expect;
      for (int i = 0; i < 9; ++i)
        for (int j = i + 1; j < 9; ++j)
          if (static_cast<double>(eng() >> 11) * 0x1.0p-53 < 0.37) expect.emplace_back(i, j);
      CHECK(erdos_renyi(9, 0.37, seed).edges() == expect);
    }
  }

  TEST_CASE("erdos_renyi golden value and binomial mean") {
    CHECK(erdos_renyi(10, 0.5, 42).num_edges() == 24);
    CHECK(erdos_renyi(10, 0.5, 42) == erdos_renyi(10, 0.5, 42));
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) sum += static_cast<double>(erdos_renyi(10, 0.5, seed).num_edges());
    const double mean = sum / 1000.0;
    const double sigma_of_mean = std::sqrt(45 * 0.25 / 1000.0);
    CHECK(std::abs(mean - 22.5) <= 3.0 * sigma_of_mean);
  }

  TEST_CASE("seed derivation is stable") {
    static_assert(derive_seed(1, 8, 0) == splitmix64(splitmix64(splitmix64(1) ^ 8) ^ 0));
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
    CHECK(derive_seed(1, 8, 0) != derive_seed(1, 8, 1));
    CHECK(derive_seed(1, 8, 0) != derive_seed(2, 8, 0));
  }

  TEST_CASE("independence and violated edges on the five-vertex example") {
    const Graph g = oracle::fig2_graph();
    CHECK(is_independent(g, VertexSet::of({0, 2, 4})));
    CHECK(is_independent(g, VertexSet{}));
    CHECK_FALSE(is_independent(g, VertexSet::of({0, 1})));
    CHECK(violated_edges(g, VertexSet::of({1, 3, 4})) == 3);
    CHECK(violated_edges(g, VertexSet{}) == 0);
    CHECK(violated_edges(Graph::complete(4), VertexSet(0xF)) == 6);
  }

  TEST_CASE("violated_edges matches brute force and the full set") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      const Graph g = random_graph(rng, 1, 10);
      CHECK(violated_edges(g, VertexSet(g.full_mask())) == static_cast<int>(g.num_edges()));
      for (Mask m = 0; m < (Mask{1} << g.num_vertices()); m += 3) {
        REQUIRE(violated_edges(g, VertexSet(m)) == oracle::edges_inside(g, m));
        REQUIRE(is_independent(g, VertexSet(m)) == (oracle::edges_inside(g, m) == 0));
      }
    }
  }

  TEST_CASE("enumerate_independent_sets on small graphs") {
    const auto sets = enumerate_independent_sets(oracle::fig2_graph());
    std::vector<VertexSet> expect{VertexSet{},          VertexSet::of({0}),    VertexSet::of({1}),
                                  VertexSet::of({2}),   VertexSet::of({3}),    VertexSet::of({4}),
                                  VertexSet::of({0, 2}), VertexSet::of({0, 4}), VertexSet::of({2, 3}),
                                  VertexSet::of({2, 4}), VertexSet::of({0, 2, 4})};
    std::sort(expect.begin(), expect.end());
    CHECK(sets == expect);
    CHECK(enumerate_independent_sets(Graph::empty(3)).size() == 8);
    CHECK(enumerate_independent_sets(Graph::complete(4)).size() == 5);
    CHECK_THROWS_AS(enumerate_independent_sets(Graph::empty(10), 1000), ResourceError);
    CHECK_THROWS_AS(count_independent_sets(Graph::empty(10), 1000), ResourceError);
  }

  TEST_CASE("enumeration equals brute force for n <= 12") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
      const Graph g = random_graph(rng, 0, 12);
      const auto sets = enumerate_independent_sets(g);
      const auto expect = oracle::all_independent_sets(g);
      REQUIRE(sets.size() == expect.size());
      for (std::size_t i = 0; i < sets.size(); ++i) REQUIRE(sets[i].mask == expect[i]);
      CHECK(count_independent_sets(g) == expect.size());
    }
  }

  TEST_CASE("greedy baseline") {
    CHECK(greedy_mis(oracle::fig2_graph()) == VertexSet::of({0, 2, 4}));
    CHECK(greedy_mis(Graph::empty(6)).mask == 0x3F);
    CHECK(greedy_mis(Graph::complete(7)) == VertexSet::of({0}));
    CHECK(greedy_mis(Graph::empty(0)).mask == 0);
  }

  TEST_CASE("greedy agrees with a step-by-step trace and is maximal") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 300; ++trial) {
      const Graph g = random_graph(rng, 0, 16);
      const VertexSet s = greedy_mis(g);
      REQUIRE(s.mask == oracle::greedy_step_by_step(g));
      REQUIRE(is_independent(g, s));
      REQUIRE(is_maximal_independent(g, s));
    }
  }

  TEST_CASE("exact MIS examples") {
    const VertexSet s = exact_mis(oracle::fig2_graph());
    CHECK(s.size() == 3);
    CHECK(s.mask == 21);
    CHECK(exact_mis(Graph::complete(9)).size() == 1);
    CHECK(exact_mis(Graph::complete(9)).mask == 1);
    const Graph g = erdos_renyi(12, 0.8, 7);
    CHECK(exact_mis(g).mask == oracle::brute_force_mis(g));
    CHECK(mis_size(g) == std::popcount(oracle::brute_force_mis(g)));
    CHECK_THROWS_AS(exact_mis(Graph::empty(49)), ResourceError);
    CHECK(exact_mis(Graph::empty(40)).size() == 40);
  }

  TEST_CASE("exact MIS matches brute force, dominates greedy and is maximal") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 300; ++trial) {
      const Graph g = random_graph(rng, 0, 14);
      const VertexSet s = exact_mis(g);
      REQUIRE(s.mask == oracle::brute_force_mis(g));
      REQUIRE(is_maximal_independent(g, s));
      REQUIRE(s.size() >= greedy_mis(g).size());
      REQUIRE(mis_size(g) == s.size());
    }
  }

  TEST_CASE("exact MIS on larger sparse graphs stays consistent") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      const Graph g = erdos_renyi(36, 0.15, rng());
      const VertexSet s = exact_mis(g);
      CHECK(is_maximal_independent(g, s));
      CHECK(s.size() == mis_size(g));
      CHECK(s.size() >= greedy_mis(g).size());
    }
  }

  TEST_CASE("text round trip") {
    const Graph g = erdos_renyi(9, 0.4, 3);
    std::stringstream ss;
    write_graph(ss, g);
    CHECK(read_graph(ss) == g);
    std::istringstream with_comments("# comment\n\n3 2\n0 1\n# inner\n1 2\n");
    CHECK(read_graph(with_comments) == Graph(3, {{0, 1}, {1, 2}}));
  }

  TEST_CASE("parse errors name the offending line") {
    auto line_of = [](const std::string& text) -> std::size_t {
      std::istringstream in(text);
      try {
        read_graph(in);
      } catch (const ParseError& e) {
        return e.line();
      }
      return 0;
    };
    CHECK(line_of("3 2\n0 1\n1 x\n") == 3);
    CHECK(line_of("3 2\n0 1\n") == 2);
    CHECK(line_of("3 1\n0 5\n") == 2);
    CHECK(line_of("3 1\n1 1\n") == 2);
    CHECK(line_of("3 2\n0 1\n1 0\n") == 3);
    CHECK(line_of("three 1\n") == 1);
    CHECK(line_of("3 1\n0 1 2\n") == 2);
    std::istringstream bad("3 2\n0 1\n1 x\n");
    try {
      read_graph(bad);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(read_graph_file("/nonexistent/graph.txt"), ParseError);
  }
}
