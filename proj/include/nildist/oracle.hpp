#pragma once

#include <cstdint>
#include <vector>

#include "nildist/chain.hpp"

namespace nildist {

/* Coordinate flag pulled back through a unitary: P_k = U* E_k U with E_k
 * the projection onto the first k coordinates. */
Flag complete_flag_of_unitary(const ComplexMatrix& u);

struct DescentOptions {
  double initial_step = 0.5;
  double min_step = 1e-6;
  std::size_t max_sweeps = 2000;
};

/* Trace of one descent: strictly decreasing accepted values, the final
 * unitary, and the sweep count. */
struct DescentResult {
  double value = 0;
  ComplexMatrix u;
  std::vector<double> accepted_values;
  std::size_t sweeps = 0;
};

/* Derivative-free pattern search over unitaries for the staircase norm of
 * the complete flag of U against the projection. Left plane rotations with
 * phases {1, i} and both signs; the step halves after a sweep with no
 * improvement. Deterministic for a fixed start. */
DescentResult flag_descent(const ProjectionMatrix& p, const ComplexMatrix& u0,
                           const DescentOptions& opts = {});

struct OracleResult {
  double best_value = 0;
  ComplexMatrix best_unitary;
  std::size_t restarts = 0;
  std::vector<std::size_t> iterations_per_restart;
  std::uint64_t seed = 0;
};

/* Seeded multistart over Haar-random initial unitaries. Restarts run
 * concurrently but are reduced in restart order, so the result depends only
 * on (p, restarts, seed, opts). */
OracleResult minimize_over_flags(const ProjectionMatrix& p,
                                 std::size_t restarts, std::uint64_t seed,
                                 const DescentOptions& opts = {});

struct OracleGap {
  std::size_t n = 0, m = 0;
  double nu_formula = 0;
  double oracle_value = 0;
  double gap = 0;  // oracle_value - nu_formula
  std::size_t restarts = 0;
  std::uint64_t seed = 0;
};

/* Brute-force check of the closed form at rank m, dimension n (n <= 5). */
OracleGap oracle_gap(std::size_t n, std::size_t m, std::size_t restarts,
                     std::uint64_t seed);

}  // namespace nildist
