#include "nildist/oracle.hpp"

#include <cmath>
#include <future>
#include <utility>

#include "nildist/errors.hpp"
#include "nildist/formula.hpp"
#include "nildist/kernels.hpp"
#include "nildist/nest.hpp"
#include "nildist/rng.hpp"

namespace nildist {

namespace {

/* max over k of the corner norm of Y = U P U*: rows k-1.., columns 0..k-1. */
double staircase_value(const ComplexMatrix& y) {
  const std::size_t d = y.rows();
  double best = 0;
  for (std::size_t k = 1; k <= d; ++k)
    best = std::max(best, op_norm(y.block(k - 1, 0, d - k + 1, k)));
  return best;
}

double objective(const ComplexMatrix& u, const ComplexMatrix& pm) {
  return staircase_value(mul_adj(u * pm, u));
}

}  // namespace

Flag complete_flag_of_unitary(const ComplexMatrix& u) {
  if (!u.is_square() || u.rows() == 0)
    throw InputError("complete_flag_of_unitary: non-empty square matrix required");
  const std::size_t n = u.rows();
  if (max_abs_diff(adj_mul(u, u), ComplexMatrix::identity(n)) > 1e-9)
    throw InputError("complete_flag_of_unitary: input is not unitary");
  std::vector<ProjectionMatrix> flag;
  flag.reserve(n + 1);
  flag.push_back(ProjectionMatrix::coordinate(n, 0));
  ComplexMatrix acc(n, n);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        acc(i, j) += std::conj(u(t, i)) * u(t, j);
    flag.push_back(ProjectionMatrix(HermitianMatrix(acc)));
  }
  flag.push_back(ProjectionMatrix::coordinate(n, n));
  return make_flag(std::move(flag));
}

DescentResult flag_descent(const ProjectionMatrix& p, const ComplexMatrix& u0,
                           const DescentOptions& opts) {
  const std::size_t n = p.dim();
  if (!u0.is_square() || u0.rows() != n)
    throw InputError("flag_descent: start does not match the projection");
  if (max_abs_diff(adj_mul(u0, u0), ComplexMatrix::identity(n)) > 1e-9)
    throw InputError("flag_descent: start is not unitary");
  if (!(opts.initial_step > 0) || !(opts.min_step > 0) ||
      opts.min_step > opts.initial_step)
    throw InputError("flag_descent: bad step bounds");

  const ComplexMatrix& pm = p.matrix();
  const auto& ops = kernels::active();

  DescentResult res;
  res.u = u0;
  res.value = objective(res.u, pm);
  res.accepted_values.push_back(res.value);

  const cdouble gens[2] = {cdouble{1, 0}, cdouble{0, 1}};
  double h = opts.initial_step;
  while (h >= opts.min_step && res.sweeps < opts.max_sweeps) {
    ++res.sweeps;
    bool improved = false;
    for (std::size_t a = 0; a + 1 < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        for (const cdouble& w : gens)
          for (const int sgn : {1, -1}) {
            const double c = std::cos(sgn * h), s = std::sin(sgn * h);
            ComplexMatrix cand = res.u;
            ops.crot(n, cand.row(a), cand.row(b), c, -std::conj(w) * s,
                     w * s, c);
            const double val = objective(cand, pm);
            if (val < res.value) {
              res.value = val;
              res.u = std::move(cand);
              res.accepted_values.push_back(val);
              improved = true;
            }
          }
    if (!improved) h /= 2;
  }
  return res;
}

OracleResult minimize_over_flags(const ProjectionMatrix& p,
                                 std::size_t restarts, std::uint64_t seed,
                                 const DescentOptions& opts) {
  if (restarts == 0)
    throw InputError("minimize_over_flags: need at least one restart");
  const std::size_t dim = p.dim();

  std::vector<std::future<DescentResult>> futs;
  futs.reserve(restarts);
  for (std::size_t r = 0; r < restarts; ++r)
    futs.push_back(std::async(std::launch::async, [&p, &opts, seed, r, dim] {
      return flag_descent(p, haar_unitary(dim, mix_seed(seed, r)), opts);
    }));

  OracleResult out;
  out.seed = seed;
  out.restarts = restarts;
  bool have = false;
  for (std::size_t r = 0; r < restarts; ++r) {
    DescentResult res = futs[r].get();
    out.iterations_per_restart.push_back(res.sweeps);
    if (!have || res.value < out.best_value) {
      have = true;
      out.best_value = res.value;
      out.best_unitary = std::move(res.u);
    }
  }

  const Flag fl = complete_flag_of_unitary(out.best_unitary);
  if (std::abs(nest_distance(p.matrix(), fl) - out.best_value) > 1e-10)
    throw NumericError("minimize_over_flags: objective re-evaluation drifted");
  return out;
}

OracleGap oracle_gap(std::size_t n, std::size_t m, std::size_t restarts,
                     std::uint64_t seed) {
  if (m == 0 || n == 0 || m > n)
    throw InputError("oracle_gap: need 1 <= m <= n");
  if (n > 5) throw InputError("oracle_gap: dimension capped at 5");
  OracleGap g;
  g.n = n;
  g.m = m;
  g.nu_formula = nu_finite(TraceValue::of_rank(m, n));
  const OracleResult res =
      minimize_over_flags(ProjectionMatrix::coordinate(n, m), restarts, seed);
  g.oracle_value = res.best_value;
  g.gap = g.oracle_value - g.nu_formula;
  g.restarts = restarts;
  g.seed = seed;
  return g;
}

}  // namespace nildist
