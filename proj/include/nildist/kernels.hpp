#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace nildist::kernels {

using cdouble = std::complex<double>;

/* Dispatch table for the dense complex inner loops. Matrix arguments are
 * row-major, interleaved (re, im) doubles, no padding. Output buffers must
 * not alias inputs. */
struct Ops {
  const char* name;

  /* c (m x n) = a (m x k) * b (k x n) */
  void (*cgemm)(std::size_t m, std::size_t k, std::size_t n, const cdouble* a,
                const cdouble* b, cdouble* c);

  /* c (m x n) = adjoint(a) * b, a stored as (k x m), b as (k x n) */
  void (*cgemm_adj)(std::size_t m, std::size_t k, std::size_t n,
                    const cdouble* a, const cdouble* b, cdouble* c);

  /* in-place plane rotation of two stride-1 vectors:
   *   x_i <- p*x_i + q*y_i,  y_i <- r*x_i + s*y_i */
  void (*crot)(std::size_t n, cdouble* x, cdouble* y, cdouble p, cdouble q,
               cdouble r, cdouble s);

  /* sum_i conj(x_i) * y_i */
  cdouble (*cdotc)(std::size_t n, const cdouble* x, const cdouble* y);

  /* sum_i |x_i|^2 */
  double (*sumsq)(std::size_t n, const cdouble* x);

  /* y_i += alpha * x_i */
  void (*caxpy)(std::size_t n, cdouble alpha, const cdouble* x, cdouble* y);
};

/* Reference implementation, always available. */
const Ops& scalar_ops();

/* Table picked once at startup: widest instruction set the CPU can run.
 * NILDIST_KERNELS=scalar|avx2 forces a table. */
const Ops& active();

/* Lookup by name; nullptr when not compiled in or not runnable here. */
const Ops* find(std::string_view name);

/* Every table runnable on this machine, reference first. */
std::vector<const Ops*> available();

}  // namespace nildist::kernels
