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

// Data-parallel kernels used by the signal-path inner loops.  Each kernel
// has a scalar reference implementation and, on x86-64, an AVX2 variant;
// the active set is chosen once at startup from CPU capabilities and can
// be overridden for testing.

#ifndef AMBIDROP_SIMD_HPP_
#define AMBIDROP_SIMD_HPP_

#include <complex>
#include <cstddef>
#include <string>

namespace ambidrop::simd {

using cplx = std::complex<double>;

struct Kernels {
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // sum of x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum of x[i]^2
  double (*sumsq)(const double* x, std::size_t n);
  // y[i] = x[i] * w[i]
  void (*mul)(const double* x, const double* w, double* y, std::size_t n);
  // y[i] += w * x[i], complex scalar weight
  void (*caxpy)(cplx w, const cplx* x, cplx* y, std::size_t n);
  // y[i] += conj(w[i]) * x[i]
  void (*cmac_conj)(const cplx* w, const cplx* x, cplx* y, std::size_t n);
  // y[i] = a[i] * b[i], complex
  void (*cmul)(const cplx* a, const cplx* b, cplx* y, std::size_t n);
};

// Scalar reference kernels; always available.
const Kernels& scalar();

// AVX2 kernels, or nullptr when unsupported by the build or the CPU.
const Kernels* avx2();

// Kernels selected for this process (AVX2 when the CPU supports it).
const Kernels& active();

// Name of the active variant: "scalar" or "avx2".
std::string active_name();

}  // namespace ambidrop::simd

#endif  // AMBIDROP_SIMD_HPP_
