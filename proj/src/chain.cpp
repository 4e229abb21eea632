#include "nildist/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <utility>

#include "nildist/errors.hpp"
#include "nildist/rng.hpp"

namespace nildist {

namespace {

constexpr double kPi = std::numbers::pi;

double lambda_min(const HermitianMatrix& m) {
  return hermitian_eigenvalues(m).back();
}

double real_trace(const ComplexMatrix& m) { return trace(m).real(); }

/* sqrt with the [0, 1]-band noise clamped away; inputs here are PSD up to
 * the 1e-9 chain tolerance. */
HermitianMatrix sqrt_clamped(const HermitianMatrix& m) {
  return spectral_apply(m,
                        [](double t) { return std::sqrt(std::max(t, 0.0)); });
}

HermitianMatrix cot_shifted(const HermitianMatrix& b, double shift) {
  return spectral_apply(b, [shift](double t) {
    const double x = t + shift;
    if (std::abs(std::remainder(x, kPi)) <= 1e-9)
      throw DomainError("cot: spectrum touches a pole");
    return std::cos(x) / std::sin(x);
  });
}

void require_spectrum(const HermitianMatrix& m, double lo, double hi,
                      const char* msg) {
  const auto ev = hermitian_eigenvalues(m);
  if (ev.front() > hi + 1e-9 || ev.back() < lo - 1e-9) throw InputError(msg);
}

double step_objective(const OperatorChain& chain, std::size_t k) {
  const HermitianMatrix left = sqrt_clamped(
      HermitianMatrix(chain.p.matrix() - chain.a[k - 1].matrix()));
  const HermitianMatrix right = sqrt_clamped(chain.a[k]);
  return op_norm(left.matrix() * right.matrix());
}

/* U diag(lambda) U* with lambda ~ uniform[lo, hi], U Haar from the stream. */
HermitianMatrix random_spectral(std::size_t dim, double lo, double hi,
                                Rng& rng) {
  const ComplexMatrix u = haar_unitary(dim, rng);
  ComplexMatrix scaled = u;
  for (std::size_t j = 0; j < dim; ++j) {
    const double lam = rng.uniform(lo, hi);
    for (std::size_t i = 0; i < dim; ++i) scaled(i, j) *= lam;
  }
  return HermitianMatrix(mul_adj(scaled, u));
}

std::vector<cdouble> random_unit(std::size_t dim, Rng& rng) {
  std::vector<cdouble> v(dim);
  double s2 = 0;
  do {
    s2 = 0;
    for (auto& z : v) {
      z = rng.complex_normal();
      s2 += std::norm(z);
    }
  } while (s2 < 1e-12);
  const double inv = 1 / std::sqrt(s2);
  for (auto& z : v) z *= inv;
  return v;
}

}  // namespace

BetaSchedule beta_schedule(std::size_t n, std::size_t m) {
  if (m == 0 || n == 0 || m > n)
    throw InputError("beta_schedule: need 1 <= m <= n");
  BetaSchedule s;
  s.n = n;
  s.m = m;
  s.angles = theta_of_trace(TraceValue::of_rank(m, n));
  const double theta = s.angles.theta, cap = s.angles.cap;
  s.beta.assign(n + 1, std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k <= n; ++k)
    for (std::size_t l = 1; l <= n; ++l)
      s.beta[k][l - 1] =
          std::clamp(double(k) * theta - double(l - 1) * cap, 0.0, cap);

  for (std::size_t k = 0; k <= n; ++k) {
    const double want = double(k) * theta;
    const double got =
        std::accumulate(s.beta[k].begin(), s.beta[k].end(), 0.0);
    if (std::abs(got - want) > 1e-12 * std::max(1.0, want))
      throw InternalError("beta_schedule: row sum drifted from k*theta");
  }
  for (std::size_t k = 1; k <= n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      if (s.beta[k][l] < s.beta[k - 1][l] - 1e-12)
        throw InternalError("beta_schedule: rows not ascending");
      if (l + 1 < n && s.beta[k - 1][l] < s.beta[k][l + 1] - 1e-12)
        throw InternalError("beta_schedule: rows not interlacing");
    }
  for (std::size_t l = 0; l < n; ++l) {
    const double want = l < m ? cap : 0.0;
    if (std::abs(s.beta[n][l] - want) > 1e-12)
      throw InternalError("beta_schedule: last row is not the cap spectrum");
  }
  return s;
}

double alpha_from_beta(double beta, const ThetaAngles& th) {
  if (!(beta >= -1e-12 && beta <= th.cap + 1e-12))
    throw InputError("alpha_from_beta: beta outside [0, cap]");
  const double b = std::clamp(beta, 0.0, th.cap);
  return std::sin(b) / (2 * std::cos(th.theta) * std::sin(b + th.theta));
}

double beta_from_alpha(double alpha, const ThetaAngles& th) {
  if (!(alpha >= -1e-12 && alpha <= 1 + 1e-12))
    throw InputError("beta_from_alpha: alpha outside [0, 1]");
  const double s = 2 * std::cos(th.theta) * std::clamp(alpha, 0.0, 1.0);
  return std::atan2(s * std::sin(th.theta), 1 - s * std::cos(th.theta));
}

OperatorChain make_chain(ProjectionMatrix p, std::vector<HermitianMatrix> a) {
  if (a.size() < 2) throw InputError("chain: need A_0..A_n with n >= 1");
  const std::size_t dim = p.dim();
  for (const auto& ak : a)
    if (ak.dim() != dim) throw InputError("chain: dimension mismatch");
  if (a.front().matrix().max_abs() > 1e-9)
    throw InputError("chain: A_0 must vanish");
  if (max_abs_diff(a.back().matrix(), p.matrix()) > 1e-9)
    throw InputError("chain: A_n must equal the projection");
  std::size_t rank_sum = 0;
  for (std::size_t k = 1; k < a.size(); ++k) {
    const ComplexMatrix d = a[k].matrix() - a[k - 1].matrix();
    if (lambda_min(HermitianMatrix(d)) < -1e-9)
      throw InputError("chain: steps must be monotone");
    rank_sum += rank_eps(d, 1e-8);
  }
  if (rank_sum > dim) throw InputError("chain: step ranks exceed the dimension");
  return OperatorChain{std::move(p), std::move(a)};
}

HermitianMatrix b_of_a(const HermitianMatrix& a, const ThetaAngles& th,
                       const ProjectionMatrix& p) {
  if (a.dim() != p.dim()) throw InputError("b_of_a: dimension mismatch");
  if (lambda_min(a) < -1e-9)
    throw InputError("b_of_a: operator must be positive");
  if (lambda_min(HermitianMatrix(p.matrix() - a.matrix())) < -1e-9)
    throw InputError("b_of_a: operator must sit below the projection");
  const HermitianMatrix b = spectral_apply(a, [&th](double t) {
    return beta_from_alpha(std::clamp(t, 0.0, 1.0), th);
  });
  const HermitianMatrix back = spectral_apply(b, [&th](double t) {
    return std::sin(t) / (2 * std::cos(th.theta) * std::sin(t + th.theta));
  });
  if (max_abs_diff(back.matrix(), a.matrix()) > 1e-8)
    throw NumericError("b_of_a: angle map failed to round-trip");
  return b;
}

HermitianMatrix interlace_update(const HermitianMatrix& a,
                                 const std::vector<double>& targets) {
  const std::size_t n = a.dim();
  if (targets.size() != n)
    throw InputError("interlace_update: need one target per dimension");
  for (double t : targets)
    if (!std::isfinite(t))
      throw InputError("interlace_update: non-finite target");

  const Spectrum sp = eig_hermitian(a);
  const std::vector<double>& alpha = sp.eigenvalues;
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    scale = std::max({scale, std::abs(alpha[i]), std::abs(targets[i])});
  const double slack = 1e-12 * scale;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (targets[i] < targets[i + 1] - slack)
      throw InputError("interlace_update: targets must be descending");
  for (std::size_t i = 0; i < n; ++i) {
    if (targets[i] < alpha[i] - slack ||
        (i + 1 < n && alpha[i] < targets[i + 1] - slack))
      throw InputError("interlace_update: targets must interlace from above");
  }

  /* Coincident old/new eigenvalues carry no weight; remove such pairs first
   * so the secular products stay away from zero. */
  const double tie = 1e-10 * scale;
  std::vector<std::size_t> old_idx(n), tgt_idx(n);
  std::iota(old_idx.begin(), old_idx.end(), std::size_t{0});
  std::iota(tgt_idx.begin(), tgt_idx.end(), std::size_t{0});
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t pos = 0; pos < old_idx.size(); ++pos) {
      if (std::abs(alpha[old_idx[pos]] - targets[tgt_idx[pos]]) <= tie) {
        old_idx.erase(old_idx.begin() + pos);
        tgt_idx.erase(tgt_idx.begin() + pos);
        changed = true;
        break;
      }
      if (pos + 1 < old_idx.size() &&
          std::abs(alpha[old_idx[pos]] - targets[tgt_idx[pos + 1]]) <= tie) {
        old_idx.erase(old_idx.begin() + pos);
        tgt_idx.erase(tgt_idx.begin() + pos + 1);
        changed = true;
        break;
      }
    }
  }

  std::vector<cdouble> v(n, cdouble{0, 0});
  for (std::size_t u = 0; u < old_idx.size(); ++u) {
    const double ai = alpha[old_idx[u]];
    double num = 1, den = 1;
    for (std::size_t t : tgt_idx) num *= ai - targets[t];
    for (std::size_t o : old_idx)
      if (o != old_idx[u]) den *= ai - alpha[o];
    if (den == 0)
      throw NumericError("interlace_update: repeated eigenvalue survived deflation");
    double c = -num / den;
    if (c < 0 && c >= -tie) c = 0;
    if (c < 0)
      throw NumericError("interlace_update: negative secular weight");
    const double w = std::sqrt(c);
    if (w == 0) continue;
    for (std::size_t r = 0; r < n; ++r)
      v[r] += w * sp.eigenvectors(r, old_idx[u]);
  }

  ComplexMatrix res = a.matrix();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) res(i, j) += v[i] * std::conj(v[j]);
  const HermitianMatrix out(res);

  const auto ev = hermitian_eigenvalues(out);
  double err = 0;
  for (std::size_t i = 0; i < n; ++i)
    err = std::max(err, std::abs(ev[i] - targets[i]));
  if (err > 1e-8 * scale)
    throw NumericError("interlace_update: spectrum missed the targets");
  return out;
}

OperatorChain build_chain(const BetaSchedule& schedule) {
  const std::size_t n = schedule.n;
  if (n == 0 || schedule.beta.size() != n + 1)
    throw InputError("build_chain: malformed schedule");
  for (const auto& row : schedule.beta)
    if (row.size() != n) throw InputError("build_chain: malformed schedule");
  std::vector<HermitianMatrix> a;
  a.reserve(n + 1);
  a.push_back(HermitianMatrix::zero(n));
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<double> targets(n);
    for (std::size_t l = 0; l < n; ++l)
      targets[l] = alpha_from_beta(schedule.beta[k][l], schedule.angles);
    a.push_back(interlace_update(a.back(), targets));
  }
  ProjectionMatrix p(a.back());
  return make_chain(std::move(p), std::move(a));
}

Flag make_flag(std::vector<ProjectionMatrix> p) {
  if (p.size() < 2) throw InputError("flag: need P_0..P_n with n >= 1");
  const std::size_t dim = p.front().dim();
  for (const auto& pk : p)
    if (pk.dim() != dim) throw InputError("flag: dimension mismatch");
  if (p.front().rank() != 0) throw InputError("flag: P_0 must vanish");
  if (p.back().rank() != dim)
    throw InputError("flag: P_n must be the identity");
  for (std::size_t k = 1; k < p.size(); ++k)
    if (lambda_min(HermitianMatrix(p[k].matrix() - p[k - 1].matrix())) < -1e-9)
      throw InputError("flag: projections must ascend");
  return Flag{std::move(p)};
}

Flag recover_flag(const OperatorChain& chain) {
  const std::size_t n = chain.steps(), dim = chain.dim();
  std::vector<std::size_t> rank(n + 1, 0), offset(n + 1, 0);
  std::vector<Spectrum> inc;
  inc.reserve(n);
  std::size_t total = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const ComplexMatrix d = chain.a[k].matrix() - chain.a[k - 1].matrix();
    rank[k] = rank_eps(d, 1e-8);
    offset[k] = total;
    total += rank[k];
    inc.push_back(eig_hermitian(HermitianMatrix(d)));
  }
  if (total > dim)
    throw InputError("recover_flag: step ranks exceed the dimension");

  /* Y_k = sum_j sqrt(lambda_j) e_{offset+j} u_j*; the blocks land in disjoint
   * coordinate rows, so Y*Y = sum_k (A_k - A_{k-1}) = P and Y is a partial
   * isometry. */
  ComplexMatrix y(dim, dim);
  for (std::size_t k = 1; k <= n; ++k) {
    const Spectrum& sp = inc[k - 1];
    for (std::size_t j = 0; j < rank[k]; ++j) {
      const double lam = sp.eigenvalues[j];
      if (lam <= 0)
        throw NumericError("recover_flag: rank and spectrum disagree");
      const double s = std::sqrt(lam);
      for (std::size_t c = 0; c < dim; ++c)
        y(offset[k] + j, c) = s * std::conj(sp.eigenvectors(c, j));
    }
  }
  const ComplexMatrix u = complete_to_unitary(y);

  std::vector<ProjectionMatrix> flag;
  flag.reserve(n + 1);
  flag.push_back(ProjectionMatrix::coordinate(dim, 0));
  ComplexMatrix acc(dim, dim);
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t t = offset[k]; t < offset[k] + rank[k]; ++t)
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
          acc(i, j) += std::conj(u(t, i)) * u(t, j);
    flag.push_back(ProjectionMatrix(HermitianMatrix(acc)));
  }
  flag.push_back(ProjectionMatrix::coordinate(dim, dim));
  Flag f = make_flag(std::move(flag));

  double worst = 0;
  const ComplexMatrix& pm = chain.p.matrix();
  for (std::size_t k = 0; k <= n; ++k) {
    const ComplexMatrix lhs = pm * f.p[k].matrix() * pm;
    worst = std::max(worst, max_abs_diff(lhs, chain.a[k].matrix()));
  }
  if (worst > 1e-7)
    throw NumericError("recover_flag: P P_k P drifted from the chain");
  return f;
}

double chain_objective(const OperatorChain& chain) {
  double best = 0;
  for (std::size_t k = 1; k <= chain.steps(); ++k)
    best = std::max(best, step_objective(chain, k));
  return best;
}

BChain bchain_of(const OperatorChain& chain, const ThetaAngles& th) {
  BChain bc;
  bc.angles = th;
  bc.b.reserve(chain.a.size());
  for (const auto& ak : chain.a) bc.b.push_back(b_of_a(ak, th, chain.p));
  if (bc.b.front().matrix().max_abs() > 1e-9)
    throw NumericError("bchain: B_0 must vanish");
  if (max_abs_diff(bc.b.back().matrix(), th.cap * chain.p.matrix()) > 1e-9)
    throw NumericError("bchain: B_n must reach the cap on the projection");
  return bc;
}

std::vector<AuditStep> lb_audit(const OperatorChain& chain,
                                const ThetaAngles& th,
                                bool enforce_hypothesis) {
  const std::size_t n = chain.steps(), dim = chain.dim();
  const double nu = 1 / (2 * std::cos(th.theta));
  std::vector<AuditStep> out;
  out.reserve(n);
  HermitianMatrix b_prev = b_of_a(chain.a[0], th, chain.p);
  for (std::size_t k = 1; k <= n; ++k) {
    if (enforce_hypothesis) {
      const double val = step_objective(chain, k);
      if (val > nu + 1e-9) {
        std::ostringstream os;
        os << "lb_audit: step " << k << " objective " << val
           << " exceeds the reference value " << nu;
        throw InputError(os.str());
      }
    }
    const HermitianMatrix b = b_of_a(chain.a[k], th, chain.p);
    const HermitianMatrix c_prev = cot_shifted(b_prev, th.phi);
    const HermitianMatrix c_cur = cot_shifted(b, th.phi);
    const HermitianMatrix c3_prev = cot_shifted(b_prev, 3 * th.phi);
    const std::size_t r_rank =
        rank_eps(c_prev.matrix() - c_cur.matrix(), 1e-7);
    const std::size_t eq_rank =
        rank_eps(c_cur.matrix() - c3_prev.matrix(), 1e-7);

    AuditStep st;
    st.k = k;
    st.trace_b = real_trace(b.matrix());
    st.tau_diff =
        (st.trace_b - real_trace(b_prev.matrix())) / double(dim);
    st.r = double(r_rank) / double(dim);
    st.r_theta = st.r * th.theta;
    st.tau_bound_ok = st.tau_diff <= st.r_theta + 1e-7;
    st.equality = std::abs(st.tau_diff - st.r_theta) <= 1e-7;
    st.equality_rank_ok = eq_rank == dim - r_rank;
    out.push_back(st);
    b_prev = b;
  }
  return out;
}

IffResult ordering_iff_cot(const HermitianMatrix& b, const HermitianMatrix& bp,
                           const ThetaAngles& th) {
  if (b.dim() != bp.dim())
    throw InputError("ordering_iff_cot: dimension mismatch");
  require_spectrum(b, 0, th.cap, "ordering_iff_cot: spectrum outside [0, cap]");
  require_spectrum(bp, 0, th.cap,
                   "ordering_iff_cot: spectrum outside [0, cap]");
  const auto smap = [&th](const HermitianMatrix& x) {
    return spectral_apply(
        x, [&th](double t) { return std::sin(t) / std::sin(t + th.theta); });
  };
  IffResult res;
  res.lhs_margin =
      lambda_min(HermitianMatrix(smap(bp).matrix() - smap(b).matrix()));
  res.rhs_margin = lambda_min(HermitianMatrix(
      cot_shifted(b, th.phi).matrix() - cot_shifted(bp, th.phi).matrix()));
  res.lhs = res.lhs_margin >= -1e-8;
  res.rhs = res.rhs_margin >= -1e-8;
  return res;
}

IffResult bound_iff_cot3phi(const HermitianMatrix& a, const HermitianMatrix& ap,
                            const ThetaAngles& th) {
  if (a.dim() != ap.dim())
    throw InputError("bound_iff_cot3phi: dimension mismatch");
  require_spectrum(a, 0, 1, "bound_iff_cot3phi: spectrum outside [0, 1]");
  require_spectrum(ap, 0, 1, "bound_iff_cot3phi: spectrum outside [0, 1]");
  const std::size_t n = a.dim();
  const double nu = 1 / (2 * std::cos(th.theta));
  const HermitianMatrix left =
      sqrt_clamped(HermitianMatrix(ComplexMatrix::identity(n) - a.matrix()));
  const double val = op_norm(left.matrix() * sqrt_clamped(ap).matrix());
  const ProjectionMatrix full = ProjectionMatrix::coordinate(n, n);
  const HermitianMatrix b = b_of_a(a, th, full);
  const HermitianMatrix bp = b_of_a(ap, th, full);
  IffResult res;
  res.lhs_margin = nu - val;
  res.rhs_margin = lambda_min(HermitianMatrix(
      cot_shifted(bp, th.phi).matrix() - cot_shifted(b, 3 * th.phi).matrix()));
  res.lhs = val <= nu + 1e-9;
  res.rhs = res.rhs_margin >= -1e-8;
  return res;
}

IdentitySuiteReport sample_ordering_identity(std::size_t dim,
                                             const ThetaAngles& th,
                                             std::size_t count,
                                             std::uint64_t seed, double band) {
  if (dim == 0)
    throw InputError("sample_ordering_identity: dimension must be positive");
  if (!(band >= 0))
    throw InputError("sample_ordering_identity: band must be nonnegative");
  Rng rng(mix_seed(seed, 0x6F726452ull));
  IdentitySuiteReport rep;
  rep.requested = count;
  const ProjectionMatrix full = ProjectionMatrix::coordinate(dim, dim);
  for (std::size_t it = 0; it < count; ++it) {
    const HermitianMatrix a = random_spectral(dim, 0.02, 0.98, rng);
    HermitianMatrix ap = a;
    switch (rng.next_u64() % 4) {
      case 0: {  // slide toward the identity, order preserved
        const double t = rng.uniform(0.05, 0.9);
        ap = HermitianMatrix((1 - t) * a.matrix() +
                             t * ComplexMatrix::identity(dim));
        break;
      }
      case 1: {  // rank-one bump inside the headroom, order preserved
        const double head = 1 - hermitian_eigenvalues(a).front();
        const auto v = random_unit(dim, rng);
        const double s = rng.uniform(0.1, 0.9) * head;
        ComplexMatrix m = a.matrix();
        for (std::size_t i = 0; i < dim; ++i)
          for (std::size_t j = 0; j < dim; ++j)
            m(i, j) += s * v[i] * std::conj(v[j]);
        ap = HermitianMatrix(m);
        break;
      }
      case 2: {  // indefinite perturbation, order usually broken
        const HermitianMatrix e = random_spectral(dim, -0.08, 0.08, rng);
        ap = spectral_apply(HermitianMatrix(a.matrix() + e.matrix()),
                            [](double t) { return std::clamp(t, 0.0, 1.0); });
        break;
      }
      default:
        ap = random_spectral(dim, 0.02, 0.98, rng);
    }
    const HermitianMatrix b = b_of_a(a, th, full);
    const HermitianMatrix bp = b_of_a(ap, th, full);
    const IffResult res = ordering_iff_cot(b, bp, th);
    if (std::abs(res.lhs_margin) < band || std::abs(res.rhs_margin) < band) {
      ++rep.discarded;
      continue;
    }
    ++rep.samples;
    if (res.lhs == res.rhs) {
      ++rep.agreements;
    } else {
      ++rep.disagreements;
      if (!rep.first_disagreement)
        rep.first_disagreement =
            IdentitySample{b.matrix(),      bp.matrix(), th.theta,
                           res.lhs_margin,  res.rhs_margin,
                           res.lhs,         res.rhs};
    }
  }
  return rep;
}

IdentitySuiteReport sample_bound_identity(std::size_t dim,
                                          const ThetaAngles& th,
                                          std::size_t count,
                                          std::uint64_t seed, double band) {
  if (dim == 0)
    throw InputError("sample_bound_identity: dimension must be positive");
  if (!(band >= 0))
    throw InputError("sample_bound_identity: band must be nonnegative");
  Rng rng(mix_seed(seed, 0x626E6452ull));
  IdentitySuiteReport rep;
  rep.requested = count;
  for (std::size_t it = 0; it < count; ++it) {
    HermitianMatrix a = random_spectral(dim, 0.02, 0.98, rng);
    HermitianMatrix ap = a;
    switch (rng.next_u64() % 4) {
      case 0:
        break;  // equal pair, bound holds with room
      case 1:   // extremal pair, bound usually fails
        a = random_spectral(dim, 0.0, 0.15, rng);
        ap = random_spectral(dim, 0.85, 1.0, rng);
        break;
      case 2:
        ap = random_spectral(dim, 0.02, 0.98, rng);
        break;
      default: {  // ordered pair
        const double t = rng.uniform(0.05, 0.9);
        ap = HermitianMatrix((1 - t) * a.matrix() +
                             t * ComplexMatrix::identity(dim));
        break;
      }
    }
    const IffResult res = bound_iff_cot3phi(a, ap, th);
    if (std::abs(res.lhs_margin) < band || std::abs(res.rhs_margin) < band) {
      ++rep.discarded;
      continue;
    }
    ++rep.samples;
    if (res.lhs == res.rhs) {
      ++rep.agreements;
    } else {
      ++rep.disagreements;
      if (!rep.first_disagreement)
        rep.first_disagreement =
            IdentitySample{a.matrix(),      ap.matrix(), th.theta,
                           res.lhs_margin,  res.rhs_margin,
                           res.lhs,         res.rhs};
    }
  }
  return rep;
}

}  // namespace nildist
