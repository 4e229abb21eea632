#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nildist/matrix.hpp"

namespace nildist {

class Rng;

/* Hermitian matrix: validated on construction (square, finite, asymmetry
 * below 1e-12 relative), stored exactly symmetrized. */
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const ComplexMatrix& m);
  static HermitianMatrix zero(std::size_t n);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.rows(); }

 private:
  HermitianMatrix() = default;
  ComplexMatrix m_;
};

/* Orthogonal projection: Hermitian, idempotent within 1e-10, spectrum within
 * 1e-10 of {0, 1}. Rank counted from the spectrum. */
class ProjectionMatrix {
 public:
  explicit ProjectionMatrix(const HermitianMatrix& m);
  static ProjectionMatrix coordinate(std::size_t n, std::size_t rank);

  const ComplexMatrix& matrix() const { return h_.matrix(); }
  const HermitianMatrix& hermitian() const { return h_; }
  std::size_t dim() const { return h_.dim(); }
  std::size_t rank() const { return rank_; }

 private:
  ProjectionMatrix(HermitianMatrix h, std::size_t rank)
      : h_(std::move(h)), rank_(rank) {}
  HermitianMatrix h_;
  std::size_t rank_;
};

/* Eigenvalues descending; eigenvectors the matching columns of a unitary. */
struct Spectrum {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
};

/* Cyclic two-sided Jacobi. Deterministic: fixed sweep order, and degenerate
 * clusters (relative gap below 1e-9) get their basis re-derived by
 * Gram-Schmidt of the projected standard basis in index order, so the output
 * depends only on the eigenspaces. */
Spectrum eig_hermitian(const HermitianMatrix& m);

/* Values-only fast path (no vectors, no canonicalization), descending. */
std::vector<double> hermitian_eigenvalues(const HermitianMatrix& m);

/* Largest singular value; 0 for an empty matrix. One-sided Jacobi, so small
 * singular values keep high relative accuracy (no Gram matrix is formed). */
double op_norm(const ComplexMatrix& m);

/* All singular values, descending. */
std::vector<double> singular_values(const ComplexMatrix& m);

/* Number of singular values above tol * max(1, largest). */
std::size_t rank_eps(const ComplexMatrix& m, double tol);

/* Projection onto the span of the left singular vectors with singular value
 * above tol * max(1, largest). */
ComplexMatrix range_projection(const ComplexMatrix& m, double tol);

/* f applied to the spectrum: U diag(f(lambda)) U*. DomainError when f is not
 * finite at an eigenvalue. */
HermitianMatrix spectral_apply(const HermitianMatrix& m,
                               const std::function<double(double)>& f);

/* PSD square root. Eigenvalues in [-1e-10, 0) clamp to 0; below that is a
 * DomainError. */
HermitianMatrix psd_sqrt(const HermitianMatrix& m);

/* Extend a partial isometry V (V*V a projection within 1e-8) to a unitary
 * agreeing with V on the initial space. The orthogonal complement is
 * completed by Gram-Schmidt over the standard basis in index order. */
ComplexMatrix complete_to_unitary(const ComplexMatrix& v);

/* Haar-distributed unitary, reproducible from the seed alone. */
ComplexMatrix haar_unitary(std::size_t dim, std::uint64_t seed);
/* Same, drawing from a caller-owned stream. */
ComplexMatrix haar_unitary(std::size_t dim, Rng& rng);

}  // namespace nildist
