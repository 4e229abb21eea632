#include "nildist/kernels.hpp"

#if defined(NILDIST_WITH_AVX2) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cstring>

namespace nildist::kernels::detail {
namespace {

/* acc + alpha*v over two packed complex doubles; are/aim broadcast alpha. */
inline __m256d cmul_acc(__m256d acc, __m256d are, __m256d aim, __m256d v) {
  const __m256d vswap = _mm256_permute_pd(v, 0x5);
  return _mm256_fmaddsub_pd(are, v, _mm256_fmaddsub_pd(aim, vswap, acc));
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  const __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

/* y += alpha*x, n complex elements */
inline void axpy_rows(std::size_t n, cdouble alpha, const cdouble* x,
                      cdouble* y) {
  const __m256d are = _mm256_set1_pd(alpha.real());
  const __m256d aim = _mm256_set1_pd(alpha.imag());
  std::size_t j = 0;
  const auto* xp = reinterpret_cast<const double*>(x);
  auto* yp = reinterpret_cast<double*>(y);
  for (; j + 2 <= n; j += 2) {
    const __m256d vx = _mm256_loadu_pd(xp + 2 * j);
    const __m256d vy = _mm256_loadu_pd(yp + 2 * j);
    _mm256_storeu_pd(yp + 2 * j, cmul_acc(vy, are, aim, vx));
  }
  for (; j < n; ++j) y[j] += alpha * x[j];
}

void cgemm_avx2(std::size_t m, std::size_t k, std::size_t n, const cdouble* a,
                const cdouble* b, cdouble* c) {
  std::memset(static_cast<void*>(c), 0, m * n * sizeof(cdouble));
  for (std::size_t i = 0; i < m; ++i) {
    cdouble* ci = c + i * n;
    for (std::size_t l = 0; l < k; ++l) {
      const cdouble alpha = a[i * k + l];
      if (alpha == cdouble{}) continue;
      axpy_rows(n, alpha, b + l * n, ci);
    }
  }
}

void cgemm_adj_avx2(std::size_t m, std::size_t k, std::size_t n,
                    const cdouble* a, const cdouble* b, cdouble* c) {
  std::memset(static_cast<void*>(c), 0, m * n * sizeof(cdouble));
  for (std::size_t l = 0; l < k; ++l) {
    const cdouble* al = a + l * m;
    const cdouble* bl = b + l * n;
    for (std::size_t i = 0; i < m; ++i) {
      const cdouble alpha = std::conj(al[i]);
      if (alpha == cdouble{}) continue;
      axpy_rows(n, alpha, bl, c + i * n);
    }
  }
}

void crot_avx2(std::size_t n, cdouble* x, cdouble* y, cdouble p, cdouble q,
               cdouble r, cdouble s) {
  const __m256d pre = _mm256_set1_pd(p.real()), pim = _mm256_set1_pd(p.imag());
  const __m256d qre = _mm256_set1_pd(q.real()), qim = _mm256_set1_pd(q.imag());
  const __m256d rre = _mm256_set1_pd(r.real()), rim = _mm256_set1_pd(r.imag());
  const __m256d sre = _mm256_set1_pd(s.real()), sim = _mm256_set1_pd(s.imag());
  const __m256d zero = _mm256_setzero_pd();
  auto* xp = reinterpret_cast<double*>(x);
  auto* yp = reinterpret_cast<double*>(y);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d vx = _mm256_loadu_pd(xp + 2 * j);
    const __m256d vy = _mm256_loadu_pd(yp + 2 * j);
    const __m256d nx = cmul_acc(cmul_acc(zero, pre, pim, vx), qre, qim, vy);
    const __m256d ny = cmul_acc(cmul_acc(zero, rre, rim, vx), sre, sim, vy);
    _mm256_storeu_pd(xp + 2 * j, nx);
    _mm256_storeu_pd(yp + 2 * j, ny);
  }
  for (; j < n; ++j) {
    const cdouble xj = x[j], yj = y[j];
    x[j] = p * xj + q * yj;
    y[j] = r * xj + s * yj;
  }
}

cdouble cdotc_avx2(std::size_t n, const cdouble* x, const cdouble* y) {
  /* odd lanes sign-flipped so fmadd accumulates xr*yi - xi*yr */
  const __m256d oddneg = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  const auto* xp = reinterpret_cast<const double*>(x);
  const auto* yp = reinterpret_cast<const double*>(y);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d vx = _mm256_loadu_pd(xp + 2 * j);
    const __m256d vy = _mm256_loadu_pd(yp + 2 * j);
    acc_re = _mm256_fmadd_pd(vx, vy, acc_re);
    const __m256d vys =
        _mm256_xor_pd(_mm256_permute_pd(vy, 0x5), oddneg);
    acc_im = _mm256_fmadd_pd(vx, vys, acc_im);
  }
  cdouble acc{hsum(acc_re), hsum(acc_im)};
  for (; j < n; ++j) acc += std::conj(x[j]) * y[j];
  return acc;
}

double sumsq_avx2(std::size_t n, const cdouble* x) {
  __m256d acc = _mm256_setzero_pd();
  const auto* xp = reinterpret_cast<const double*>(x);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d v = _mm256_loadu_pd(xp + 2 * j);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double r = hsum(acc);
  for (; j < n; ++j)
    r += x[j].real() * x[j].real() + x[j].imag() * x[j].imag();
  return r;
}

void caxpy_avx2(std::size_t n, cdouble alpha, const cdouble* x, cdouble* y) {
  axpy_rows(n, alpha, x, y);
}

}  // namespace

extern const Ops avx2_table;
const Ops avx2_table = {
    "avx2",     cgemm_avx2, cgemm_adj_avx2, crot_avx2,
    cdotc_avx2, sumsq_avx2, caxpy_avx2,
};

}  // namespace nildist::kernels::detail

#endif
