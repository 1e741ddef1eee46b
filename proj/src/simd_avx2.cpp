/*
Copyright 2026 The AmbiDrop Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "ambidrop/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define AMBIDROP_HAVE_AVX2_BUILD 1
#include <immintrin.h>
#else
#define AMBIDROP_HAVE_AVX2_BUILD 0
#endif

namespace ambidrop::simd {

#if AMBIDROP_HAVE_AVX2_BUILD

namespace {

// Complex doubles are interleaved (re, im); a __m256d holds two of them.

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * y[i];
  return hsum(acc) + tail;
}

double sumsq_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * x[i];
  return hsum(acc) + tail;
}

void mul_avx2(const double* x, const double* w, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(
        y + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(w + i)));
  }
  for (; i < n; ++i) y[i] = x[i] * w[i];
}

void caxpy_avx2(cplx w, const cplx* x, cplx* y, std::size_t n) {
  const __m256d wr = _mm256_set1_pd(w.real());
  const __m256d wi = _mm256_set1_pd(w.imag());
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(xp + 2 * i);
    const __m256d xswap = _mm256_permute_pd(vx, 0x5);
    __m256d vy = _mm256_loadu_pd(yp + 2 * i);
    // (wr*xr - wi*xi, wr*xi + wi*xr)
    const __m256d t = _mm256_mul_pd(wi, xswap);
    vy = _mm256_add_pd(vy, _mm256_fmaddsub_pd(wr, vx, t));
    _mm256_storeu_pd(yp + 2 * i, vy);
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(w.real() * xr - w.imag() * xi, w.real() * xi + w.imag() * xr);
  }
}

void cmac_conj_avx2(const cplx* w, const cplx* x, cplx* y, std::size_t n) {
  const double* wp = reinterpret_cast<const double*>(w);
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vw = _mm256_loadu_pd(wp + 2 * i);
    const __m256d vx = _mm256_loadu_pd(xp + 2 * i);
    const __m256d wr = _mm256_movedup_pd(vw);
    const __m256d wi = _mm256_permute_pd(vw, 0xF);
    const __m256d xswap = _mm256_permute_pd(vx, 0x5);
    __m256d vy = _mm256_loadu_pd(yp + 2 * i);
    // conj(w)*x = (wr*xr + wi*xi, wr*xi - wi*xr)
    const __m256d t = _mm256_mul_pd(wi, xswap);
    vy = _mm256_add_pd(vy, _mm256_fmsubadd_pd(wr, vx, t));
    _mm256_storeu_pd(yp + 2 * i, vy);
  }
  for (; i < n; ++i) {
    const double wr = w[i].real(), wi = w[i].imag();
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(wr * xr + wi * xi, wr * xi - wi * xr);
  }
}

void cmul_avx2(const cplx* a, const cplx* b, cplx* y, std::size_t n) {
  const double* ap = reinterpret_cast<const double*>(a);
  const double* bp = reinterpret_cast<const double*>(b);
  double* yp = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(ap + 2 * i);
    const __m256d vb = _mm256_loadu_pd(bp + 2 * i);
    const __m256d ar = _mm256_movedup_pd(va);
    const __m256d ai = _mm256_permute_pd(va, 0xF);
    const __m256d bswap = _mm256_permute_pd(vb, 0x5);
    const __m256d t = _mm256_mul_pd(ai, bswap);
    _mm256_storeu_pd(yp + 2 * i, _mm256_fmaddsub_pd(ar, vb, t));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    y[i] = cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

}  // namespace

const Kernels* avx2() {
  if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) {
    return nullptr;
  }
  static const Kernels k = {axpy_avx2,  dot_avx2,       sumsq_avx2, mul_avx2,
                            caxpy_avx2, cmac_conj_avx2, cmul_avx2};
  return &k;
}

#else

const Kernels* avx2() { return nullptr; }

#endif  // AMBIDROP_HAVE_AVX2_BUILD

const Kernels& active() {
  static const Kernels& k = []() -> const Kernels& {
    if (const Kernels* v = avx2()) return *v;
    return scalar();
  }();
  return k;
}

std::string active_name() { return avx2() ? "avx2" : "scalar"; }

}  // namespace ambidrop::simd
