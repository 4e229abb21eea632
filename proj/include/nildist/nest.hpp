#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nildist/chain.hpp"

namespace nildist {

/* Distance from X to the operators killed by the flag's staircase:
 * max_k op_norm((I - P_{k-1}) X P_k). */
double nest_distance(const ComplexMatrix& x, const Flag& flag);

/* Minimal-norm completion of the top-right block Z of
 *   [[C, Z],
 *    [A, B]]
 * given mu >= max(op_norm([C; A]), op_norm([A, B])). The returned Z keeps
 * the whole matrix at norm mu or below (up to roundoff). */
ComplexMatrix parrott_step(const ComplexMatrix& top_left,
                           const ComplexMatrix& bottom_left,
                           const ComplexMatrix& bottom_right, double mu);

/* An operator N annihilated by the flag's staircase with
 * op_norm(X - N) = nest_distance(X, flag) up to roundoff, built by filling
 * the free blocks one anti-diagonal at a time with parrott_step. */
ComplexMatrix nearest_in_nest(const ComplexMatrix& x, const Flag& flag);

/* Flag of ranges of the powers of a nilpotent: P_k = range(N^(q-k)) for the
 * least q with op_norm(N^q) <= tol. The staircase of the result kills N. */
Flag flag_of_nilpotent(const ComplexMatrix& n, double tol);

/* Rank-m projection in dimension n at distance (2 cos theta)^-1 from the
 * nilpotents, together with a witness N and the flag that certifies it. */
struct DistanceCertificate {
  std::size_t n = 0, m = 0;
  ComplexMatrix p;
  Flag flag;
  ComplexMatrix nilpotent;
  double achieved = 0;   // op_norm(p - nilpotent)
  double reference = 0;  // (2 cos theta)^-1
  std::size_t nil_index = 0;
  bool verified = false;
  std::vector<std::string> failures;
};

DistanceCertificate certificate(std::size_t n, std::size_t m);

}  // namespace nildist
