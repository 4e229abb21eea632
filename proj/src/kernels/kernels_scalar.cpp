#include "nildist/kernels.hpp"

#include <cstring>

namespace nildist::kernels::detail {
namespace {

void cgemm_scalar(std::size_t m, std::size_t k, std::size_t n, const cdouble* a,
                  const cdouble* b, cdouble* c) {
  std::memset(static_cast<void*>(c), 0, m * n * sizeof(cdouble));
  for (std::size_t i = 0; i < m; ++i) {
    cdouble* ci = c + i * n;
    for (std::size_t l = 0; l < k; ++l) {
      const cdouble alpha = a[i * k + l];
      if (alpha == cdouble{}) continue;
      const cdouble* bl = b + l * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += alpha * bl[j];
    }
  }
}

void cgemm_adj_scalar(std::size_t m, std::size_t k, std::size_t n,
                      const cdouble* a, const cdouble* b, cdouble* c) {
  std::memset(static_cast<void*>(c), 0, m * n * sizeof(cdouble));
  for (std::size_t l = 0; l < k; ++l) {
    const cdouble* al = a + l * m;
    const cdouble* bl = b + l * n;
    for (std::size_t i = 0; i < m; ++i) {
      const cdouble alpha = std::conj(al[i]);
      if (alpha == cdouble{}) continue;
      cdouble* ci = c + i * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += alpha * bl[j];
    }
  }
}

void crot_scalar(std::size_t n, cdouble* x, cdouble* y, cdouble p, cdouble q,
                 cdouble r, cdouble s) {
  for (std::size_t i = 0; i < n; ++i) {
    const cdouble xi = x[i], yi = y[i];
    x[i] = p * xi + q * yi;
    y[i] = r * xi + s * yi;
  }
}

cdouble cdotc_scalar(std::size_t n, const cdouble* x, const cdouble* y) {
  cdouble acc{};
  for (std::size_t i = 0; i < n; ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

double sumsq_scalar(std::size_t n, const cdouble* x) {
  double acc = 0;
  for (std::size_t i = 0; i < n; ++i)
    acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return acc;
}

void caxpy_scalar(std::size_t n, cdouble alpha, const cdouble* x, cdouble* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

extern const Ops scalar_table;
const Ops scalar_table = {
    "scalar",     cgemm_scalar, cgemm_adj_scalar, crot_scalar,
    cdotc_scalar, sumsq_scalar, caxpy_scalar,
};

}  // namespace nildist::kernels::detail
