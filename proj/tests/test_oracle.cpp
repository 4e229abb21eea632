#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nildist/errors.hpp"
#include "nildist/nest.hpp"
#include "nildist/oracle.hpp"
#include "test_support.hpp"

using namespace nildist;

TEST_CASE("complete flag of the identity") {
  const auto f = complete_flag_of_unitary(ComplexMatrix::identity(3));
  REQUIRE(f.length() == 3);
  for (std::size_t k = 0; k <= 3; ++k) {
    CHECK(f.p[k].rank() == k);
    CHECK(max_abs_diff(f.p[k].matrix(),
                       ProjectionMatrix::coordinate(3, k).matrix()) <= 1e-12);
  }

  ComplexMatrix notu(2, 2);
  notu(0, 0) = 2;
  CHECK_THROWS_AS(complete_flag_of_unitary(notu), InputError);
}

TEST_CASE("descent only ever accepts improvements") {
  const auto p = ProjectionMatrix::coordinate(3, 1);
  const auto res = flag_descent(p, haar_unitary(3, 5));
  for (std::size_t i = 1; i < res.accepted_values.size(); ++i)
    CHECK(res.accepted_values[i] < res.accepted_values[i - 1]);
  CHECK(res.sweeps > 0);
  CHECK(res.value == doctest::Approx(nest_distance(
                         p.matrix(), complete_flag_of_unitary(res.u)))
                         .epsilon(1e-10));
}

TEST_CASE("descent on the half projection reaches the closed form") {
  const auto p = ProjectionMatrix::coordinate(2, 1);
  const auto res = flag_descent(p, haar_unitary(2, 1));
  CHECK(res.value <= 0.7071067811865476 + 2e-4);
  CHECK(res.value >= 0.7071067811865476 - 1e-6);
}

TEST_CASE("multistart is deterministic for a fixed seed") {
  const auto p = ProjectionMatrix::coordinate(3, 1);
  const auto a = minimize_over_flags(p, 6, 31);
  const auto b = minimize_over_flags(p, 6, 31);
  CHECK(a.best_value == b.best_value);
  CHECK(max_abs_diff(a.best_unitary, b.best_unitary) == 0.0);
  CHECK(a.iterations_per_restart == b.iterations_per_restart);
  REQUIRE(a.iterations_per_restart.size() == 6);
}

TEST_CASE("multistart value is invariant under a change of basis") {
  Rng rng(8);
  const auto p = testsup::random_projection(3, 1, rng);
  const auto u = haar_unitary(3, 44);
  const ProjectionMatrix moved{
      HermitianMatrix(mul_adj(u * p.matrix(), u))};
  const auto a = minimize_over_flags(p, 8, 9);
  const auto b = minimize_over_flags(moved, 8, 9);
  CHECK(std::abs(a.best_value - b.best_value) <= 2e-4);
}

TEST_CASE("oracle against the closed form") {
  const auto g = oracle_gap(3, 1, 16, 7);
  CHECK(g.nu_formula == doctest::Approx(0.6180339887498949).epsilon(1e-12));
  CHECK(g.gap >= -1e-6);
  CHECK(g.gap <= 1e-3);
  CHECK(g.oracle_value == doctest::Approx(g.nu_formula + g.gap));

  // a full projection is at distance 1 no matter the flag
  const auto full = oracle_gap(2, 2, 4, 7);
  CHECK(full.oracle_value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(full.gap) <= 1e-9);

  CHECK_THROWS_AS(oracle_gap(6, 1, 4, 7), InputError);
  CHECK_THROWS_AS(oracle_gap(3, 0, 4, 7), InputError);
  CHECK_THROWS_AS(oracle_gap(3, 1, 0, 7), InputError);
}

TEST_CASE("oracle value never undercuts the distance formula") {
  for (std::size_t n = 2; n <= 3; ++n)
    for (std::size_t m = 1; m <= n; ++m) {
      CAPTURE(n);
      CAPTURE(m);
      const auto g = oracle_gap(n, m, 12, 21);
      CHECK(g.gap >= -1e-6);
    }
}
