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

// Complex orthonormal spherical harmonics with Condon-Shortley phase, and
// the ideal plane-wave Ambisonics encoding built on them.

#ifndef AMBIDROP_SH_HPP_
#define AMBIDROP_SH_HPP_

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "ambidrop/common.hpp"
#include "ambidrop/geometry.hpp"

namespace ambidrop {

// Highest supported spherical-harmonic order.
inline constexpr int kMaxShOrder = 30;

struct DirectionGrid {
  std::vector<SphericalDirection> directions;
  // Optional quadrature weights; when present they are positive and sum to
  // the measure of the covered manifold (4*pi sphere, 2*pi circle).
  std::optional<std::vector<double>> weights;

  std::size_t size() const { return directions.size(); }
};

// Q uniformly spaced azimuths on the horizon (theta = pi/2), no weights.
DirectionGrid horizon_grid(std::size_t num_azimuths);

// Gauss-Legendre x uniform-azimuth sphere grid with 4*pi quadrature weights.
DirectionGrid sphere_grid(std::size_t num_theta, std::size_t num_phi);

// Y_n^m(theta, phi) = N_n^m P_n^m(cos theta) e^{i m phi}, orthonormal with
// Condon-Shortley phase.  Throws DomainError above kMaxShOrder.
cplx sh_eval(const HarmonicIndex& idx, const SphericalDirection& dir);

// Q x channels matrix; entry (q, c) = Y_{n_c}^{m_c}(theta_q, phi_q).
Eigen::MatrixXcd sh_matrix(const HarmonicSet& set, const DirectionGrid& grid);

// Ideal plane-wave composition: channel c(t) = sum_q conj(Y_c(dir_q)) s_q(t).
// Source signals are real; channels come out complex in general, so the
// result holds complex samples per channel.
struct ComplexMultichannel {
  std::vector<std::vector<cplx>> channels;
  double sample_rate = 16000.0;
};

ComplexMultichannel ideal_encode(const std::vector<std::vector<double>>& sources,
                                 const std::vector<SphericalDirection>& doas,
                                 const HarmonicSet& set,
                                 double sample_rate = 16000.0);

// Lossless real packing of Ambisonics channels for WAV storage.  Real sound
// fields satisfy a_{n,-m} = (-1)^m conj(a_{n,m}), so the packed channel for
// (n, m=0) is the signal itself (real up to rounding), for m > 0 it is
// Re(a_{n,m}) and for m < 0 it is Im(a_{n,|m|}).  Requires the set to be
// closed under m -> -m.
MultichannelSignal pack_ambisonics(const ComplexMultichannel& amb,
                                   const HarmonicSet& set);
ComplexMultichannel unpack_ambisonics(const MultichannelSignal& packed,
                                      const HarmonicSet& set);

}  // namespace ambidrop

#endif  // AMBIDROP_SH_HPP_
