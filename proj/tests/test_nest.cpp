#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "nildist/errors.hpp"
#include "nildist/nest.hpp"
#include "test_support.hpp"

using namespace nildist;

namespace {

ComplexMatrix jordan(std::size_t n) {
  ComplexMatrix j(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) j(i, i + 1) = 1;
  return j;
}

Flag coordinate_flag(const std::vector<std::size_t>& ranks, std::size_t dim) {
  std::vector<ProjectionMatrix> p;
  p.push_back(ProjectionMatrix::coordinate(dim, 0));
  for (std::size_t r : ranks) p.push_back(ProjectionMatrix::coordinate(dim, r));
  p.push_back(ProjectionMatrix::coordinate(dim, dim));
  return make_flag(std::move(p));
}

ComplexMatrix scalar1(double v) {
  ComplexMatrix m(1, 1);
  m(0, 0) = v;
  return m;
}

}  // namespace

TEST_CASE("nest distance of the half projection") {
  // flag 0 <= span{(1,-1)/sqrt 2} <= C^2 against P = diag(1, 0)
  ComplexMatrix q(2, 2);
  q(0, 0) = 0.5;
  q(0, 1) = -0.5;
  q(1, 0) = -0.5;
  q(1, 1) = 0.5;
  const Flag f = make_flag({ProjectionMatrix::coordinate(2, 0),
                            ProjectionMatrix(HermitianMatrix(q)),
                            ProjectionMatrix::coordinate(2, 2)});
  const auto p = ProjectionMatrix::coordinate(2, 1).matrix();
  CHECK(nest_distance(p, f) ==
        doctest::Approx(0.7071067811865476).epsilon(1e-12));
}

TEST_CASE("staircase of the power flag kills the nilpotent") {
  const auto j = jordan(3);
  const Flag f = coordinate_flag({1, 2}, 3);
  CHECK(nest_distance(j, f) <= 1e-14);
}

TEST_CASE("scalar parrott completion") {
  const auto z =
      parrott_step(scalar1(0.6), scalar1(0.6), scalar1(0.6), 1.0);
  REQUIRE(z.rows() == 1);
  REQUIRE(z.cols() == 1);
  // -cba/(1 - a^2) with a = b = c = 0.6
  CHECK(std::abs(z(0, 0) - cdouble{-0.3375, 0}) <= 1e-12);

  const auto z0 = parrott_step(scalar1(0.3), scalar1(0.0), scalar1(0.4), 1.0);
  CHECK(std::abs(z0(0, 0)) <= 1e-14);

  CHECK_THROWS_AS(parrott_step(scalar1(2.0), scalar1(0.0), scalar1(0.0), 1.0),
                  InputError);
}

TEST_CASE("random parrott completions stay within the bound") {
  Rng rng(404);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t p = 1 + rng.next_u64() % 3;
    const std::size_t q = 1 + rng.next_u64() % 3;
    const std::size_t r = 1 + rng.next_u64() % 3;
    const std::size_t s = 1 + rng.next_u64() % 3;
    const auto c = testsup::random_matrix(p, q, rng);
    const auto a = testsup::random_matrix(r, q, rng);
    const auto b = testsup::random_matrix(r, s, rng);

    ComplexMatrix col(p + r, q), row(r, q + s);
    col.set_block(0, 0, c);
    col.set_block(p, 0, a);
    row.set_block(0, 0, a);
    row.set_block(0, q, b);
    const double mu = std::max(op_norm(col), op_norm(row));

    const auto z = parrott_step(c, a, b, mu);
    ComplexMatrix full(p + r, q + s);
    full.set_block(0, 0, c);
    full.set_block(0, q, z);
    full.set_block(p, 0, a);
    full.set_block(p, q, b);
    CHECK(op_norm(full) <= mu + 1e-8);
  }
}

TEST_CASE("nearest operator under the half-projection flag") {
  ComplexMatrix q(2, 2);
  q(0, 0) = 0.5;
  q(0, 1) = -0.5;
  q(1, 0) = -0.5;
  q(1, 1) = 0.5;
  const Flag f = make_flag({ProjectionMatrix::coordinate(2, 0),
                            ProjectionMatrix(HermitianMatrix(q)),
                            ProjectionMatrix::coordinate(2, 2)});
  const auto p = ProjectionMatrix::coordinate(2, 1).matrix();

  const auto nil = nearest_in_nest(p, f);
  CHECK(op_norm(p - nil) == doctest::Approx(0.7071067811865476).epsilon(1e-9));
  CHECK(op_norm(nil * nil) <= 1e-9);
  CHECK(nest_distance(nil, f) <= 1e-9);
}

TEST_CASE("nearest operator attains the nest distance") {
  Rng rng(77);
  for (const std::size_t dim : {2, 3, 4, 5}) {
    CAPTURE(dim);
    for (int rep = 0; rep < 5; ++rep) {
      const auto x = testsup::random_matrix(dim, dim, rng);
      const Flag f = testsup::random_flag(dim, rng);
      const double mu = nest_distance(x, f);
      const auto nil = nearest_in_nest(x, f);
      CHECK(std::abs(op_norm(x - nil) - mu) <= 1e-7 * std::max(1.0, mu));
      CHECK(nest_distance(nil, f) <= 1e-7 * std::max(1.0, x.max_abs()));
    }
  }
}

TEST_CASE("flag from the powers of a nilpotent") {
  const auto f = flag_of_nilpotent(jordan(3), 1e-10);
  REQUIRE(f.length() == 3);
  CHECK(f.p[1].rank() == 1);
  CHECK(f.p[2].rank() == 2);
  CHECK(max_abs_diff(f.p[1].matrix(),
                     ProjectionMatrix::coordinate(3, 1).matrix()) <= 1e-10);
  CHECK(max_abs_diff(f.p[2].matrix(),
                     ProjectionMatrix::coordinate(3, 2).matrix()) <= 1e-10);
  CHECK(nest_distance(jordan(3), f) <= 1e-9);

  const auto z = flag_of_nilpotent(ComplexMatrix(2, 2), 1e-10);
  CHECK(z.length() == 1);

  CHECK_THROWS_AS(flag_of_nilpotent(ComplexMatrix::identity(2), 1e-10),
                  InputError);
}

TEST_CASE("certificates at small sizes") {
  const auto c21 = certificate(2, 1);
  CHECK(c21.verified);
  CHECK(c21.failures.empty());
  CHECK(c21.nil_index == 2);
  CHECK(c21.reference == doctest::Approx(0.7071067811865476).epsilon(1e-12));
  CHECK(c21.achieved <= c21.reference + 1e-7);
  CHECK(op_norm(c21.p - c21.nilpotent) == doctest::Approx(c21.achieved));

  const auto c42 = certificate(4, 2);
  CHECK(c42.verified);
  CHECK(c42.reference == doctest::Approx(0.7071067811865476).epsilon(1e-12));
  CHECK(c42.achieved <= c42.reference + 1e-7);

  const auto c11 = certificate(1, 1);
  CHECK(c11.verified);
  CHECK(c11.nil_index == 1);
  CHECK(c11.achieved == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(op_norm(c11.nilpotent) <= 1e-12);
}
