#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "isanneal/errors.hpp"
#include "isanneal/schedule.hpp"

using namespace isanneal;
using std::numbers::pi;

namespace {

void check_stated_bounds(const Schedule& sch) {
  for (int i = 0; i <= 10000; ++i) {
    const double s = i / 10000.0;
    REQUIRE(std::abs(sch.omega(s)) <= sch.omega_max() + 1e-12);
    REQUIRE(std::abs(sch.delta(s)) <= sch.delta_max() + 1e-12);
  }
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    REQUIRE(std::abs(sch.omega(a) - sch.omega(b)) <= sch.lipschitz_k() * std::abs(a - b) + 1e-12);
  }
}

}  // namespace

TEST_SUITE("schedule") {
  TEST_CASE("built-in profiles") {
    const Schedule f4 = Schedule::fig4();
    CHECK(f4.omega(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(f4.delta(0.5)) < 1e-15);
    CHECK(f4.omega(0.0) == 0.0);
    CHECK(f4.delta(0.0) == 1.0);
    CHECK(f4.omega_max() == 1.0);
    CHECK(f4.delta_max() == 1.0);
    CHECK(f4.lipschitz_k() == doctest::Approx(pi));

    const Schedule f3 = Schedule::fig3();
    for (double s : {0.0, 0.3, 0.77, 1.0}) {
      CHECK(f3.omega(s) == 1.0);
      CHECK(f3.delta(s) == 0.0);
    }
    CHECK(f3.lipschitz_k() == 0.0);
    CHECK(f3.delta_max() == 0.0);
  }

  TEST_CASE("builtin_schedule lookup") {
    CHECK(builtin_schedule("fig4").name() == "fig4");
    CHECK(builtin_schedule("fig3").omega(0.4) == 1.0);
    const Schedule c = builtin_schedule("constant:2.5,-0.5");
    CHECK(c.omega(0.1) == 2.5);
    CHECK(c.delta(0.9) == -0.5);
    CHECK(c.omega_max() == 2.5);
    CHECK(c.delta_max() == 0.5);
    CHECK_THROWS_AS(builtin_schedule("fig5"), DomainError);
    CHECK_THROWS_AS(builtin_schedule("constant:1"), DomainError);
    CHECK_THROWS_AS(builtin_schedule("constant:a,b"), DomainError);
  }

  TEST_CASE("stated bounds hold on a fine grid") {
    check_stated_bounds(Schedule::fig4());
    check_stated_bounds(Schedule::fig3());
    check_stated_bounds(Schedule::constant(0.7, -1.3));
    check_stated_bounds(Schedule::tabulated({{0.0, 0.0, -1.0}, {0.3, 0.9, 0.2}, {0.6, 0.4, 0.8}, {1.0, 0.0, 1.0}}));
  }

  TEST_CASE("detuning integral") {
    const Schedule f4 = Schedule::fig4();
    CHECK(std::abs(f4.delta_integral(1.0)) < 1e-14);
    CHECK(f4.delta_integral(0.5) == doctest::Approx(1.0 / pi).epsilon(1e-14));
    CHECK(f4.delta_integral(0.7, 0.2) == doctest::Approx(-f4.delta_integral(0.2, 0.7)));
    // A schedule without a closed form falls back to quadrature.
    const Schedule q("quad", [](double s) { return s; }, [](double s) { return std::exp(s); }, 1.0, std::exp(1.0), 1.0);
    CHECK(q.delta_integral(0.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));
    CHECK(q.delta_integral(0.25, 0.75) == doctest::Approx(std::exp(0.75) - std::exp(0.25)).epsilon(1e-10));
  }

  TEST_CASE("adaptive Simpson") {
    CHECK(integrate_adaptive_simpson([](double x) { return std::sin(x); }, 0.0, pi) ==
          doctest::Approx(2.0).epsilon(1e-11));
    CHECK(integrate_adaptive_simpson([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0) ==
          doctest::Approx(pi / 4.0).epsilon(1e-11));
    CHECK(integrate_adaptive_simpson([](double x) { return x; }, 1.0, 0.0) == doctest::Approx(-0.5));
  }

  TEST_CASE("tabulated schedule") {
    const Schedule t = Schedule::tabulated({{0.0, 0.0, 1.0}, {0.5, 1.0, 0.0}, {1.0, 0.0, -1.0}});
    CHECK(t.omega(0.25) == doctest::Approx(0.5));
    CHECK(t.delta(0.75) == doctest::Approx(-0.5));
    CHECK(t.lipschitz_k() == doctest::Approx(2.0));
    CHECK(t.omega_max() == 1.0);
    CHECK(t.delta_max() == 1.0);
    CHECK(t.delta_integral(0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(t.delta_integral(0.0, 0.5) == doctest::Approx(0.25));
    CHECK(t.delta_integral(0.25, 0.75) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(t.delta_varies());
    CHECK_FALSE(Schedule::constant(1.0, 0.5).delta_varies());
    CHECK_THROWS_AS(Schedule::tabulated({{0.0, 0.0, 0.0}, {0.5, 1.0, 0.0}}), DomainError);
    CHECK_THROWS_AS(Schedule::tabulated({{0.0, 0.0, 0.0}, {0.6, 1.0, 0.0}, {0.6, 1.0, 0.0}, {1.0, 0.0, 0.0}}),
                    DomainError);
  }

  TEST_CASE("schedule tables") {
    std::istringstream ok("# s omega delta\n0 0 1\n0.5, 1, 0\n\n1 0 -1\n");
    const auto pts = read_schedule_table(ok);
    REQUIRE(pts.size() == 3);
    CHECK(pts[1].s == 0.5);
    CHECK(pts[2].delta == -1.0);
    std::istringstream bad("0 0 1\n0.5 one 0\n1 0 0\n");
    try {
      read_schedule_table(bad);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(read_schedule_file("/nonexistent/schedule.txt"), ParseError);
  }
}
