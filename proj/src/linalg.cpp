#include "nildist/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nildist/errors.hpp"
#include "nildist/kernels.hpp"
#include "nildist/rng.hpp"

namespace nildist {

namespace {

double offdiag_frob(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  double s = 0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
  return std::sqrt(2 * s);
}

/* In-place cyclic Jacobi: a becomes diagonal. When w is given it accumulates
 * the conjugate-transposed eigenvector matrix in its rows, so the eigenvector
 * for a(i,i) is conj(row i of w). */
void two_sided_jacobi(ComplexMatrix& a, ComplexMatrix* w) {
  const std::size_t n = a.dim();
  if (w) *w = ComplexMatrix::identity(n);
  const double scale = std::max(1.0, a.frobenius());
  const double stop = 1e-14 * scale;
  const double skip = 1e-18 * scale;
  const auto& ops = kernels::active();
  for (int sweep = 0; sweep < 60; ++sweep) {
    if (offdiag_frob(a) <= stop) return;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cdouble apq = a(p, q);
        const double absa = std::abs(apq);
        if (absa <= skip) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const cdouble u = apq / absa;
        const double zeta = (aqq - app) / (2 * absa);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
        const double c = 1 / std::sqrt(1 + t * t);
        const double s = t * c;
        ops.crot(n, a.row(p), a.row(q), c, -s * u, s * std::conj(u), c);
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          a(i, p) = std::conj(a(p, i));
          a(i, q) = std::conj(a(q, i));
        }
        a(p, p) = app - t * absa;
        a(q, q) = aqq + t * absa;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        if (w)
          ops.crot(n, w->row(p), w->row(q), c, -s * u, s * std::conj(u), c);
      }
    }
  }
  if (offdiag_frob(a) > stop)
    throw NumericError("hermitian eigensolver failed to converge");
}

/* Replace the columns [i0, i1) of u, which span one eigenspace, by the
 * Gram-Schmidt basis of the projected standard vectors in index order. The
 * result depends only on the span. */
void canonicalize_cluster(ComplexMatrix& u, std::size_t i0, std::size_t i1) {
  const std::size_t n = u.dim();
  const std::size_t d = i1 - i0;
  const auto& ops = kernels::active();
  std::vector<std::vector<cdouble>> span(d, std::vector<cdouble>(n));
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t r = 0; r < n; ++r) span[l][r] = u(r, i0 + l);
  std::vector<std::vector<cdouble>> acc;
  for (std::size_t j = 0; j < n && acc.size() < d; ++j) {
    std::vector<cdouble> v(n, cdouble{});
    for (std::size_t l = 0; l < d; ++l)
      ops.caxpy(n, std::conj(span[l][j]), span[l].data(), v.data());
    for (int rep = 0; rep < 2; ++rep)
      for (const auto& b : acc) {
        const cdouble h = ops.cdotc(n, b.data(), v.data());
        ops.caxpy(n, -h, b.data(), v.data());
      }
    const double nv = std::sqrt(ops.sumsq(n, v.data()));
    if (nv > 1e-4) {
      for (cdouble& z : v) z /= nv;
      acc.push_back(std::move(v));
    }
  }
  if (acc.size() < d)
    throw NumericError("eigenbasis canonicalization found too few vectors");
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t r = 0; r < n; ++r) u(r, i0 + l) = acc[l][r];
}

ComplexMatrix from_spectrum(const ComplexMatrix& u,
                            const std::vector<double>& vals) {
  ComplexMatrix us = u;
  const std::size_t n = u.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < n; ++r) us(r, i) *= vals[i];
  return mul_adj(us, u);
}

/* Rows of r are the columns of the original matrix (plain transpose). After
 * convergence the rows are orthogonal with norms equal to the singular
 * values. */
void one_sided_jacobi_rows(ComplexMatrix& r) {
  const std::size_t q = r.rows();
  const std::size_t p = r.cols();
  if (q < 2 || p == 0) return;
  const auto& ops = kernels::active();
  for (int sweep = 0; sweep < 60; ++sweep) {
    double maxg = 0;
    for (std::size_t j = 0; j < q; ++j)
      maxg = std::max(maxg, ops.sumsq(p, r.row(j)));
    if (maxg == 0) return;
    /* Rows this far below the top are roundoff residue of a dependent row;
     * their direction is noise and would never decorrelate. */
    const double dead = 1e-30 * maxg;
    double worst = 0;  // largest relative off-diagonal seen this sweep
    for (std::size_t j = 0; j + 1 < q; ++j) {
      for (std::size_t k = j + 1; k < q; ++k) {
        const double gjj = ops.sumsq(p, r.row(j));
        const double gkk = ops.sumsq(p, r.row(k));
        if (gjj <= dead || gkk <= dead) continue;
        const cdouble gjk = ops.cdotc(p, r.row(j), r.row(k));
        const double absg = std::abs(gjk);
        const double rel = absg / std::sqrt(gjj * gkk);
        worst = std::max(worst, rel);
        if (rel <= 1e-15) continue;  // at the roundoff floor already
        const cdouble u = gjk / absg;
        const double zeta = (gkk - gjj) / (2 * absg);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
        const double c = 1 / std::sqrt(1 + t * t);
        const double s = t * c;
        ops.crot(p, r.row(j), r.row(k), c, -s * std::conj(u), s * u, c);
      }
    }
    if (worst <= 1e-13) return;
  }
  throw NumericError("svd failed to converge");
}

ComplexMatrix cols_as_rows(const ComplexMatrix& m) {
  ComplexMatrix r(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = m(i, j);
  return r;
}

std::vector<double> row_norms_desc(const ComplexMatrix& r) {
  const auto& ops = kernels::active();
  std::vector<double> s(r.rows());
  for (std::size_t j = 0; j < r.rows(); ++j)
    s[j] = std::sqrt(ops.sumsq(r.cols(), r.row(j)));
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

/* Appends v to basis if its residual after (twice-applied) Gram-Schmidt
 * stays above accept; the stored vector is normalized. */
bool mgs_append(std::vector<std::vector<cdouble>>& basis,
                std::vector<cdouble> v, double accept) {
  const auto& ops = kernels::active();
  const std::size_t n = v.size();
  for (int rep = 0; rep < 2; ++rep)
    for (const auto& b : basis) {
      const cdouble h = ops.cdotc(n, b.data(), v.data());
      ops.caxpy(n, -h, b.data(), v.data());
    }
  const double nv = std::sqrt(ops.sumsq(n, v.data()));
  if (nv <= accept) return false;
  for (cdouble& z : v) z /= nv;
  basis.push_back(std::move(v));
  return true;
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
  if (!m.is_square() || m.rows() == 0)
    throw InputError("hermitian: non-empty square matrix required");
  if (!m.all_finite()) throw InputError("hermitian: non-finite entries");
  const std::size_t n = m.rows();
  const double scale = std::max(1.0, m.max_abs());
  double asym = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      asym = std::max(asym, std::abs(m(i, j) - std::conj(m(j, i))));
  if (asym > 1e-12 * scale)
    throw InputError("hermitian: asymmetry above tolerance");
  m_ = m;
  for (std::size_t i = 0; i < n; ++i) {
    m_(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cdouble z = (m(i, j) + std::conj(m(j, i))) * 0.5;
      m_(i, j) = z;
      m_(j, i) = std::conj(z);
    }
  }
}

HermitianMatrix HermitianMatrix::zero(std::size_t n) {
  if (n == 0) throw InputError("hermitian: dimension must be positive");
  HermitianMatrix h;
  h.m_ = ComplexMatrix(n, n);
  return h;
}

ProjectionMatrix::ProjectionMatrix(const HermitianMatrix& m)
    : h_(m), rank_(0) {
  for (double v : hermitian_eigenvalues(m)) {
    if (std::min(std::abs(v), std::abs(v - 1)) > 1e-10)
      throw InputError("projection: eigenvalue away from {0, 1}");
    if (v > 0.5) ++rank_;
  }
}

ProjectionMatrix ProjectionMatrix::coordinate(std::size_t n,
                                              std::size_t rank) {
  if (rank > n) throw InputError("projection: rank exceeds dimension");
  ComplexMatrix d(n, n);
  for (std::size_t i = 0; i < rank; ++i) d(i, i) = 1.0;
  return ProjectionMatrix(HermitianMatrix(d));
}

Spectrum eig_hermitian(const HermitianMatrix& m) {
  const std::size_t n = m.dim();
  ComplexMatrix a = m.matrix();
  ComplexMatrix w;
  two_sided_jacobi(a, &w);

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() > a(y, y).real();
  });

  Spectrum s;
  s.eigenvalues.resize(n);
  s.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    s.eigenvalues[i] = a(idx[i], idx[i]).real();
    for (std::size_t r = 0; r < n; ++r)
      s.eigenvectors(r, i) = std::conj(w(idx[i], r));
  }

  double vmax = 0;
  for (double v : s.eigenvalues) vmax = std::max(vmax, std::abs(v));
  const double cluster_gap = 1e-9 * std::max(1.0, vmax);
  std::size_t i0 = 0;
  while (i0 < n) {
    std::size_t i1 = i0 + 1;
    while (i1 < n && s.eigenvalues[i1 - 1] - s.eigenvalues[i1] <= cluster_gap)
      ++i1;
    canonicalize_cluster(s.eigenvectors, i0, i1);
    i0 = i1;
  }

  const ComplexMatrix rec = from_spectrum(s.eigenvectors, s.eigenvalues);
  if (max_abs_diff(rec, m.matrix()) >
      1e-10 * std::max(1.0, m.matrix().max_abs()))
    throw NumericError("eig: reconstruction drift above tolerance");
  const ComplexMatrix g = adj_mul(s.eigenvectors, s.eigenvectors);
  if (max_abs_diff(g, ComplexMatrix::identity(n)) > 1e-10)
    throw NumericError("eig: eigenvector matrix not unitary");
  return s;
}

std::vector<double> hermitian_eigenvalues(const HermitianMatrix& m) {
  ComplexMatrix a = m.matrix();
  two_sided_jacobi(a, nullptr);
  std::vector<double> vals(a.dim());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = a(i, i).real();
  std::sort(vals.begin(), vals.end(), std::greater<>());
  return vals;
}

double op_norm(const ComplexMatrix& m) {
  if (!m.all_finite()) throw InputError("op_norm: non-finite entries");
  if (m.rows() == 0 || m.cols() == 0) return 0;
  ComplexMatrix r = cols_as_rows(m);
  one_sided_jacobi_rows(r);
  const auto s = row_norms_desc(r);
  return s.empty() ? 0 : s.front();
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  if (!m.all_finite()) throw InputError("singular_values: non-finite entries");
  ComplexMatrix r = cols_as_rows(m);
  one_sided_jacobi_rows(r);
  return row_norms_desc(r);
}

std::size_t rank_eps(const ComplexMatrix& m, double tol) {
  if (!(tol > 0)) throw InputError("rank_eps: tolerance must be positive");
  const auto s = singular_values(m);
  if (s.empty()) return 0;
  const double cut = tol * std::max(1.0, s.front());
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [&](double v) { return v > cut; }));
}

ComplexMatrix range_projection(const ComplexMatrix& m, double tol) {
  if (!(tol > 0)) throw InputError("range_projection: tolerance must be positive");
  if (!m.all_finite()) throw InputError("range_projection: non-finite entries");
  const std::size_t n = m.rows();
  ComplexMatrix r = cols_as_rows(m);
  one_sided_jacobi_rows(r);
  const auto& ops = kernels::active();
  double smax = 0;
  std::vector<double> sig(r.rows());
  for (std::size_t j = 0; j < r.rows(); ++j) {
    sig[j] = std::sqrt(ops.sumsq(r.cols(), r.row(j)));
    smax = std::max(smax, sig[j]);
  }
  const double cut = tol * std::max(1.0, smax);
  ComplexMatrix p(n, n);
  for (std::size_t t = 0; t < r.rows(); ++t) {
    if (sig[t] <= cut) continue;
    const double inv2 = 1.0 / (sig[t] * sig[t]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        p(i, j) += r(t, i) * std::conj(r(t, j)) * inv2;
  }
  /* exact hermitian symmetrization */
  for (std::size_t i = 0; i < n; ++i) {
    p(i, i) = p(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cdouble z = (p(i, j) + std::conj(p(j, i))) * 0.5;
      p(i, j) = z;
      p(j, i) = std::conj(z);
    }
  }
  return p;
}

HermitianMatrix spectral_apply(const HermitianMatrix& m,
                               const std::function<double(double)>& f) {
  const Spectrum s = eig_hermitian(m);
  std::vector<double> fv(s.eigenvalues.size());
  for (std::size_t i = 0; i < fv.size(); ++i) {
    fv[i] = f(s.eigenvalues[i]);
    if (!std::isfinite(fv[i]))
      throw DomainError("spectral_apply: function not finite at an eigenvalue");
  }
  return HermitianMatrix(from_spectrum(s.eigenvectors, fv));
}

HermitianMatrix psd_sqrt(const HermitianMatrix& m) {
  const Spectrum s = eig_hermitian(m);
  std::vector<double> fv(s.eigenvalues.size());
  for (std::size_t i = 0; i < fv.size(); ++i) {
    const double v = s.eigenvalues[i];
    if (v < -1e-10) throw DomainError("psd_sqrt: matrix is not PSD");
    fv[i] = v > 0 ? std::sqrt(v) : 0.0;
  }
  return HermitianMatrix(from_spectrum(s.eigenvectors, fv));
}

ComplexMatrix complete_to_unitary(const ComplexMatrix& v) {
  if (!v.is_square() || v.rows() == 0)
    throw InputError("complete_to_unitary: non-empty square matrix required");
  if (!v.all_finite())
    throw InputError("complete_to_unitary: non-finite entries");
  const std::size_t n = v.dim();
  const ComplexMatrix g = adj_mul(v, v);
  if (max_abs_diff(g * g, g) > 1e-8)
    throw InputError("complete_to_unitary: V*V is not a projection");
  const Spectrum s = eig_hermitian(HermitianMatrix(g));
  std::size_t m = 0;
  while (m < n && s.eigenvalues[m] > 0.5) ++m;

  std::vector<std::vector<cdouble>> ub, wb;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<cdouble> ui(n), wi(n, cdouble{});
    for (std::size_t r = 0; r < n; ++r) ui[r] = s.eigenvectors(r, i);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t j = 0; j < n; ++j) wi[r] += v(r, j) * ui[j];
    if (!mgs_append(ub, std::move(ui), 0.5) ||
        !mgs_append(wb, std::move(wi), 0.5))
      throw NumericError("complete_to_unitary: initial space is defective");
  }
  for (std::size_t j = 0; j < n && ub.size() < n; ++j) {
    std::vector<cdouble> e(n, cdouble{});
    e[j] = 1.0;
    mgs_append(ub, std::move(e), 1e-4);
  }
  for (std::size_t j = 0; j < n && wb.size() < n; ++j) {
    std::vector<cdouble> e(n, cdouble{});
    e[j] = 1.0;
    mgs_append(wb, std::move(e), 1e-4);
  }
  if (ub.size() < n || wb.size() < n)
    throw NumericError("complete_to_unitary: basis completion failed");

  ComplexMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        u(r, c) += wb[i][r] * std::conj(ub[i][c]);

  if (max_abs_diff(adj_mul(u, u), ComplexMatrix::identity(n)) > 1e-9)
    throw NumericError("complete_to_unitary: result is not unitary");
  if (op_norm((u - v) * g) > 1e-7)
    throw NumericError("complete_to_unitary: drift from V on initial space");
  return u;
}

ComplexMatrix haar_unitary(std::size_t dim, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x48414152ull));
  return haar_unitary(dim, rng);
}

ComplexMatrix haar_unitary(std::size_t dim, Rng& rng) {
  if (dim == 0) throw InputError("haar_unitary: dimension must be positive");
  const auto& ops = kernels::active();
  ComplexMatrix r(dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    for (;;) {
      for (std::size_t i = 0; i < dim; ++i) r(j, i) = rng.complex_normal();
      for (int rep = 0; rep < 2; ++rep)
        for (std::size_t l = 0; l < j; ++l) {
          const cdouble h = ops.cdotc(dim, r.row(l), r.row(j));
          ops.caxpy(dim, -h, r.row(l), r.row(j));
        }
      const double nv = std::sqrt(ops.sumsq(dim, r.row(j)));
      if (nv > 1e-8) {
        for (std::size_t i = 0; i < dim; ++i) r(j, i) /= nv;
        break;
      }
    }
  }
  return r;
}

}  // namespace nildist
