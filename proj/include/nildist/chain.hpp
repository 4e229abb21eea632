#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nildist/formula.hpp"
#include "nildist/linalg.hpp"

namespace nildist {

/* Angle ladder beta[k][l], rows k = 0..n, columns l = 1..n stored 0-based.
 * Row sums are k*theta, consecutive rows interlace, and the last row is the
 * spectrum of cap*P for a rank-m projection. */
struct BetaSchedule {
  std::size_t n = 0, m = 0;
  ThetaAngles angles{0, 0, 0};
  std::vector<std::vector<double>> beta;
};

/* beta[k][l] = clamp(k*theta - (l-1)*cap, 0, cap) for the angles of m/n. */
BetaSchedule beta_schedule(std::size_t n, std::size_t m);

/* The order-preserving spectral parametrization between operator entries
 * in [0, 1] and angles in [0, cap]:
 *   alpha = sin(beta) / (2 cos(theta) sin(beta + theta))          */
double alpha_from_beta(double beta, const ThetaAngles& th);
/* closed-form inverse: atan2(s sin(theta), 1 - s cos(theta)), s = 2cos(theta)a */
double beta_from_alpha(double alpha, const ThetaAngles& th);

/* Monotone ladder 0 = A_0 <= A_1 <= ... <= A_n = P with the rank budget
 * sum_k rank(A_k - A_{k-1}) <= dim. */
struct OperatorChain {
  ProjectionMatrix p;
  std::vector<HermitianMatrix> a;  // A_0..A_n

  std::size_t steps() const { return a.size() - 1; }
  std::size_t dim() const { return p.dim(); }
};

OperatorChain make_chain(ProjectionMatrix p, std::vector<HermitianMatrix> a);

/* B with A = sin(B)/(2 cos(theta) sin(B + theta)), supported where A is;
 * requires 0 <= A <= P within 1e-9. */
HermitianMatrix b_of_a(const HermitianMatrix& a, const ThetaAngles& th,
                       const ProjectionMatrix& p);

/* Rank-one update A + vv* whose spectrum equals `targets` (descending,
 * interlacing the spectrum of A from above, slack 1e-12). Coinciding
 * old/new eigenvalues are deflated first: those eigenvectors persist. */
HermitianMatrix interlace_update(const HermitianMatrix& a,
                                 const std::vector<double>& targets);

/* Chain of rank-one interlacing updates following the schedule's alpha rows;
 * ends at a rank-m projection. */
OperatorChain build_chain(const BetaSchedule& schedule);

/* Complete ascent 0 = P_0 <= P_1 <= ... <= P_n = I of projections. */
struct Flag {
  std::vector<ProjectionMatrix> p;  // P_0..P_n

  std::size_t length() const { return p.size() - 1; }
  std::size_t dim() const { return p.front().dim(); }
};

Flag make_flag(std::vector<ProjectionMatrix> p);

/* A flag satisfying P A_k P = P P_k P = A_k for the chain's projection P:
 * factor the increments into pairwise-orthogonal coordinate blocks, extend
 * the resulting partial isometry to a unitary, pull the coordinate flag
 * back. The representative is one valid choice, not canonical. */
Flag recover_flag(const OperatorChain& chain);

/* max_k op_norm(psd_sqrt(P - A_{k-1}) * psd_sqrt(A_k)) */
double chain_objective(const OperatorChain& chain);

/* Angle chain B_k = b_of_a(A_k); B_n = cap * P. */
struct BChain {
  ThetaAngles angles{0, 0, 0};
  std::vector<HermitianMatrix> b;  // B_0..B_n
};

BChain bchain_of(const OperatorChain& chain, const ThetaAngles& th);

/* One step of the trace audit: the normalized trace increment of B against
 * r*theta, where r is the normalized rank of the cot difference. */
struct AuditStep {
  std::size_t k = 0;
  double trace_b = 0;     // tr B_k
  double tau_diff = 0;    // (tr B_k - tr B_{k-1}) / dim
  double r = 0;           // rank(cot(B_{k-1}+phi) - cot(B_k+phi)) / dim
  double r_theta = 0;
  bool tau_bound_ok = false;      // tau_diff <= r_theta + 1e-7
  bool equality = false;          // |tau_diff - r_theta| <= 1e-7
  bool equality_rank_ok = false;  // rank(cot(B_k+phi) - cot(B_{k-1}+3phi))
                                  //   == dim - dim*r
};

/* Per-step audit. With enforce_hypothesis, a step whose objective exceeds
 * (2 cos theta)^-1 + 1e-9 raises InputError naming the step; otherwise the
 * report is produced regardless. */
std::vector<AuditStep> lb_audit(const OperatorChain& chain,
                                const ThetaAngles& th,
                                bool enforce_hypothesis = true);

/* Two sides of an equivalence, with signed distances from the decision
 * boundary so callers can discard borderline samples. */
struct IffResult {
  bool lhs = false, rhs = false;
  double lhs_margin = 0, rhs_margin = 0;
};

/* sin(B)/sin(B+theta) <= same of B'  <=>  cot(B+phi) >= cot(B'+phi),
 * both read as min-eigenvalue >= -1e-8. Requires 0 <= B, B' <= cap within
 * 1e-9. */
IffResult ordering_iff_cot(const HermitianMatrix& b, const HermitianMatrix& bp,
                           const ThetaAngles& th);

/* op_norm(psd_sqrt(I-A) psd_sqrt(A')) <= (2cos theta)^-1 + 1e-9  <=>
 * cot(B'+phi) >= cot(B+3phi), with B, B' the angle forms of A, A'. */
IffResult bound_iff_cot3phi(const HermitianMatrix& a, const HermitianMatrix& ap,
                            const ThetaAngles& th);

struct IdentitySample {
  ComplexMatrix first, second;
  double theta = 0;
  double lhs_margin = 0, rhs_margin = 0;
  bool lhs = false, rhs = false;
};

struct IdentitySuiteReport {
  std::size_t requested = 0;
  std::size_t samples = 0;
  std::size_t discarded = 0;
  std::size_t agreements = 0;
  std::size_t disagreements = 0;
  std::optional<IdentitySample> first_disagreement;
};

/* Seeded random pairs through the two equivalences; samples with either
 * margin inside the band are discarded as boundary cases. */
IdentitySuiteReport sample_ordering_identity(std::size_t dim,
                                             const ThetaAngles& th,
                                             std::size_t count,
                                             std::uint64_t seed, double band);
IdentitySuiteReport sample_bound_identity(std::size_t dim,
                                          const ThetaAngles& th,
                                          std::size_t count,
                                          std::uint64_t seed, double band);

}  // namespace nildist
