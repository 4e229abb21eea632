#include "nildist/nest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "nildist/errors.hpp"
#include "nildist/formula.hpp"

namespace nildist {

namespace {

/* (I - P) as a plain matrix. */
ComplexMatrix complement(const ComplexMatrix& p) {
  return ComplexMatrix::identity(p.rows()) - p;
}

HermitianMatrix pinv_sqrt(const HermitianMatrix& m) {
  return spectral_apply(m, [](double t) {
    return t > 1e-13 ? 1 / std::sqrt(t) : 0.0;
  });
}

/* Basis adapted to the flag: for each increment P_k - P_{k-1} the
 * eigenvectors of the near-1 cluster, re-orthonormalized across blocks so
 * the change of basis is exactly unitary. */
struct FlagBasis {
  ComplexMatrix t;                  // columns are the basis
  std::vector<std::size_t> start;  // block offsets, start[n] == dim
};

FlagBasis flag_basis(const Flag& flag) {
  const std::size_t dim = flag.dim(), n = flag.length();
  FlagBasis fb{ComplexMatrix(dim, dim), std::vector<std::size_t>(n + 1, 0)};
  std::size_t col = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t d = flag.p[k].rank() - flag.p[k - 1].rank();
    if (d > 0) {
      const Spectrum sp = eig_hermitian(
          HermitianMatrix(flag.p[k].matrix() - flag.p[k - 1].matrix()));
      for (std::size_t j = 0; j < d; ++j) {
        if (sp.eigenvalues[j] < 0.5)
          throw NumericError("flag_basis: increment is not a projection");
        for (std::size_t i = 0; i < dim; ++i)
          fb.t(i, col) = sp.eigenvectors(i, j);
        ++col;
      }
    }
    fb.start[k] = col;
  }
  if (col != dim) throw NumericError("flag_basis: blocks do not fill the space");

  for (std::size_t c = 0; c < dim; ++c) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t p = 0; p < c; ++p) {
        cdouble h{0, 0};
        for (std::size_t i = 0; i < dim; ++i)
          h += std::conj(fb.t(i, p)) * fb.t(i, c);
        for (std::size_t i = 0; i < dim; ++i) fb.t(i, c) -= h * fb.t(i, p);
      }
    double s2 = 0;
    for (std::size_t i = 0; i < dim; ++i) s2 += std::norm(fb.t(i, c));
    if (s2 < 0.25) throw NumericError("flag_basis: basis collapsed");
    const double inv = 1 / std::sqrt(s2);
    for (std::size_t i = 0; i < dim; ++i) fb.t(i, c) *= inv;
  }
  return fb;
}

}  // namespace

double nest_distance(const ComplexMatrix& x, const Flag& flag) {
  if (!x.is_square() || x.rows() != flag.dim())
    throw InputError("nest_distance: operator does not match the flag");
  if (!x.all_finite()) throw InputError("nest_distance: non-finite entries");
  double best = 0;
  for (std::size_t k = 1; k <= flag.length(); ++k) {
    const ComplexMatrix corner =
        complement(flag.p[k - 1].matrix()) * x * flag.p[k].matrix();
    best = std::max(best, op_norm(corner));
  }
  return best;
}

ComplexMatrix parrott_step(const ComplexMatrix& top_left,
                           const ComplexMatrix& bottom_left,
                           const ComplexMatrix& bottom_right, double mu) {
  const std::size_t p = top_left.rows(), q = top_left.cols();
  const std::size_t r = bottom_left.rows(), s = bottom_right.cols();
  if (bottom_left.cols() != q || bottom_right.rows() != r)
    throw InputError("parrott_step: block shapes do not tile");
  if (!(mu >= 0) || !std::isfinite(mu))
    throw InputError("parrott_step: mu must be a finite nonnegative bound");
  if (!top_left.all_finite() || !bottom_left.all_finite() ||
      !bottom_right.all_finite())
    throw InputError("parrott_step: non-finite entries");
  if (p == 0 || s == 0) return ComplexMatrix(p, s);

  ComplexMatrix col(p + r, q), row(r, q + s);
  col.set_block(0, 0, top_left);
  col.set_block(p, 0, bottom_left);
  row.set_block(0, 0, bottom_left);
  row.set_block(0, q, bottom_right);
  const double limit = mu * (1 + 1e-12) + 1e-15;
  if (op_norm(col) > limit || op_norm(row) > limit)
    throw InputError("parrott_step: known blocks exceed the bound");
  if (mu == 0 || q == 0 || r == 0) return ComplexMatrix(p, s);

  const double inv = 1 / mu;
  const ComplexMatrix ct = inv * top_left;
  const ComplexMatrix at = inv * bottom_left;
  const ComplexMatrix bt = inv * bottom_right;

  /* Z = -mu V A* W with V = C (I - A*A)^{+1/2}, W = (I - AA*)^{+1/2} B;
   * the middle factor of the resulting product is a unitary dilation of A,
   * the outer factors are contractions. */
  const HermitianMatrix gram_right(ComplexMatrix::identity(q) - adj_mul(at, at));
  const HermitianMatrix gram_left(ComplexMatrix::identity(r) - mul_adj(at, at));
  const ComplexMatrix v = ct * pinv_sqrt(gram_right).matrix();
  const ComplexMatrix w = pinv_sqrt(gram_left).matrix() * bt;
  return (-mu) * (v * adj_mul(at, w));
}

ComplexMatrix nearest_in_nest(const ComplexMatrix& x, const Flag& flag) {
  if (!x.is_square() || x.rows() != flag.dim())
    throw InputError("nearest_in_nest: operator does not match the flag");
  if (!x.all_finite()) throw InputError("nearest_in_nest: non-finite entries");
  const std::size_t dim = x.rows(), n = flag.length();
  const double mu = nest_distance(x, flag);

  const FlagBasis fb = flag_basis(flag);
  const ComplexMatrix xt = adj_mul(fb.t, x * fb.t);

  /* Fixed part: blocks on or below the diagonal. Free blocks are filled one
   * anti-diagonal at a time; every known sub-rectangle a step consumes was
   * produced (at norm <= mu) by an earlier step or is one of the corners
   * measured by nest_distance. */
  const auto fill = [&](double bound) {
    ComplexMatrix m = xt;
    for (std::size_t d = 1; d < n; ++d)
      for (std::size_t i = 1; i + d <= n; ++i) {
        const std::size_t j = i + d;
        const std::size_t r0 = fb.start[i - 1], r1 = fb.start[i];
        const std::size_t c0 = fb.start[j - 1], c1 = fb.start[j];
        if (r1 == r0 || c1 == c0) continue;
        const ComplexMatrix z = parrott_step(
            m.block(r0, 0, r1 - r0, c0), m.block(r1, 0, dim - r1, c0),
            m.block(r1, c0, dim - r1, c1 - c0), bound);
        m.set_block(r0, c0, z);
      }
    return m;
  };

  ComplexMatrix m(dim, dim);
  try {
    m = fill(mu);
  } catch (const InputError&) {
    m = fill(mu + 1e-10);  // roundoff pushed a corner past mu
  }

  const ComplexMatrix nt = xt - m;
  const ComplexMatrix nil = mul_adj(fb.t * nt, fb.t);

  const double scale = std::max(1.0, x.max_abs());
  double resid = 0;
  for (std::size_t k = 1; k <= n; ++k)
    resid = std::max(resid, op_norm(complement(flag.p[k - 1].matrix()) * nil *
                                    flag.p[k].matrix()));
  if (resid > 1e-7 * scale)
    throw NumericError("nearest_in_nest: result leaks out of the staircase");
  if (op_norm(x - nil) > mu + 1e-7 * scale)
    throw NumericError("nearest_in_nest: completion overshot the distance");
  return nil;
}

Flag flag_of_nilpotent(const ComplexMatrix& n, double tol) {
  if (!n.is_square() || n.rows() == 0)
    throw InputError("flag_of_nilpotent: non-empty square matrix required");
  if (!n.all_finite()) throw InputError("flag_of_nilpotent: non-finite entries");
  if (!(tol > 0)) throw InputError("flag_of_nilpotent: tolerance must be positive");
  const std::size_t dim = n.rows();

  std::vector<ComplexMatrix> powers;  // N^1, N^2, ...
  powers.push_back(n);
  std::size_t q = 0;
  for (std::size_t k = 1; k <= dim; ++k) {
    if (op_norm(powers.back()) <= tol) {
      q = k;
      break;
    }
    if (k < dim) powers.push_back(powers.back() * n);
  }
  if (q == 0)
    throw InputError("flag_of_nilpotent: no power vanishes within tolerance");

  std::vector<ProjectionMatrix> flag;
  flag.reserve(q + 1);
  flag.push_back(ProjectionMatrix::coordinate(dim, 0));
  for (std::size_t k = 1; k < q; ++k)
    flag.push_back(
        ProjectionMatrix(HermitianMatrix(range_projection(powers[q - k - 1], tol))));
  flag.push_back(ProjectionMatrix::coordinate(dim, dim));
  Flag f = make_flag(std::move(flag));

  const double scale = std::max(1.0, op_norm(n));
  double resid = 0;
  for (std::size_t k = 1; k <= f.length(); ++k)
    resid = std::max(resid, op_norm(complement(f.p[k - 1].matrix()) * n *
                                    f.p[k].matrix()));
  if (resid > 1e-6 * scale)
    throw NumericError("flag_of_nilpotent: staircase does not kill the input");
  return f;
}

DistanceCertificate certificate(std::size_t n, std::size_t m) {
  if (m == 0 || n == 0 || m > n)
    throw InputError("certificate: need 1 <= m <= n");
  const BetaSchedule sched = beta_schedule(n, m);
  const OperatorChain chain = build_chain(sched);
  const Flag flag = recover_flag(chain);
  const ComplexMatrix nil = nearest_in_nest(chain.p.matrix(), flag);

  DistanceCertificate cert;
  cert.n = n;
  cert.m = m;
  cert.p = chain.p.matrix();
  cert.flag = flag;
  cert.nilpotent = nil;
  cert.achieved = op_norm(cert.p - nil);
  cert.reference = nu_finite(TraceValue::of_rank(m, n));

  const auto note = [&cert](const std::string& msg) {
    cert.failures.push_back(msg);
  };

  double resid = 0;
  for (std::size_t k = 1; k <= flag.length(); ++k)
    resid = std::max(resid, op_norm(complement(flag.p[k - 1].matrix()) * nil *
                                    flag.p[k].matrix()));
  if (resid > 1e-9) {
    std::ostringstream os;
    os << "staircase residual " << resid << " above 1e-9";
    note(os.str());
  }

  ComplexMatrix pw = nil;
  std::size_t idx = 1;
  while (idx <= n && op_norm(pw) > 1e-7) {
    pw = pw * nil;
    ++idx;
  }
  if (idx > n) {
    note("no power of the witness vanishes within 1e-7");
    cert.nil_index = 0;
  } else {
    cert.nil_index = idx;
  }

  if (cert.achieved > cert.reference + 1e-7) {
    std::ostringstream os;
    os << "achieved " << cert.achieved << " above reference " << cert.reference;
    note(os.str());
  }

  cert.verified = cert.failures.empty();
  return cert;
}

}  // namespace nildist
