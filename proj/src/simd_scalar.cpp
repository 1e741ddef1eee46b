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

namespace ambidrop::simd {
namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sumsq_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void mul_scalar(const double* x, const double* w, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] * w[i];
}

void caxpy_scalar(cplx w, const cplx* x, cplx* y, std::size_t n) {
  const double wr = w.real(), wi = w.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(wr * xr - wi * xi, wr * xi + wi * xr);
  }
}

void cmac_conj_scalar(const cplx* w, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double wr = w[i].real(), wi = w[i].imag();
    const double xr = x[i].real(), xi = x[i].imag();
    // conj(w) * x
    y[i] += cplx(wr * xr + wi * xi, wr * xi - wi * xr);
  }
}

void cmul_scalar(const cplx* a, const cplx* b, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    y[i] = cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

}  // namespace

const Kernels& scalar() {
  static const Kernels k = {axpy_scalar,  dot_scalar,       sumsq_scalar,
                            mul_scalar,   caxpy_scalar,     cmac_conj_scalar,
                            cmul_scalar};
  return k;
}

}  // namespace ambidrop::simd
