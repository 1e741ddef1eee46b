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

#include "ambidrop/sh.hpp"

#include <algorithm>
#include <cmath>

#include "ambidrop/simd.hpp"

namespace ambidrop {

namespace {

// Associated Legendre P_n^m(x) for m >= 0, including the Condon-Shortley
// phase, via the standard three-term recurrence in n.
double assoc_legendre_cs(int n, int m, double x) {
  // P_m^m = (-1)^m (2m-1)!! (1-x^2)^{m/2}
  double pmm = 1.0;
  if (m > 0) {
    const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
    double fact = 1.0;
    for (int i = 0; i < m; ++i) {
      pmm *= -fact * s;
      fact += 2.0;
    }
  }
  if (n == m) return pmm;
  double pm1 = x * (2.0 * m + 1.0) * pmm;  // P_{m+1}^m
  if (n == m + 1) return pm1;
  double p = 0.0;
  for (int k = m + 2; k <= n; ++k) {
    p = (x * (2.0 * k - 1.0) * pm1 - (k + m - 1.0) * pmm) / (k - m);
    pmm = pm1;
    pm1 = p;
  }
  return p;
}

double sh_norm(int n, int m) {
  // sqrt((2n+1)/(4pi) * (n-m)!/(n+m)!), m >= 0, computed in log space for
  // stability at high orders.
  double log_ratio = 0.0;
  for (int k = n - m + 1; k <= n + m; ++k) log_ratio += std::log(double(k));
  return std::sqrt((2.0 * n + 1.0) / kFourPi) * std::exp(-0.5 * log_ratio);
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(std::size_t n, std::vector<double>* nodes,
                    std::vector<double>* weights) {
  nodes->resize(n);
  weights->resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    (*nodes)[i] = x;
    (*weights)[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace

DirectionGrid horizon_grid(std::size_t num_azimuths) {
  if (num_azimuths == 0) throw ShapeError("empty direction grid");
  DirectionGrid grid;
  grid.directions.reserve(num_azimuths);
  for (std::size_t q = 0; q < num_azimuths; ++q) {
    grid.directions.emplace_back(kPi / 2.0, kTwoPi * q / num_azimuths);
  }
  return grid;
}

DirectionGrid sphere_grid(std::size_t num_theta, std::size_t num_phi) {
  if (num_theta == 0 || num_phi == 0) throw ShapeError("empty direction grid");
  std::vector<double> nodes, weights;
  gauss_legendre(num_theta, &nodes, &weights);
  DirectionGrid grid;
  grid.weights.emplace();
  for (std::size_t i = 0; i < num_theta; ++i) {
    const double theta = std::acos(nodes[i]);
    for (std::size_t j = 0; j < num_phi; ++j) {
      grid.directions.emplace_back(theta, kTwoPi * j / num_phi);
      grid.weights->push_back(weights[i] * kTwoPi / num_phi);
    }
  }
  return grid;
}

cplx sh_eval(const HarmonicIndex& idx, const SphericalDirection& dir) {
  if (idx.n < 0 || std::abs(idx.m) > idx.n) {
    throw DomainError("invalid harmonic index");
  }
  if (idx.n > kMaxShOrder) {
    throw DomainError("spherical-harmonic order above supported ceiling");
  }
  const int mabs = std::abs(idx.m);
  const double p = assoc_legendre_cs(idx.n, mabs, std::cos(dir.theta));
  const double norm = sh_norm(idx.n, mabs);
  const cplx pos = norm * p *
                   cplx(std::cos(mabs * dir.phi), std::sin(mabs * dir.phi));
  if (idx.m >= 0) return pos;
  // Y_n^{-m} = (-1)^m conj(Y_n^m)
  const double sign = (mabs % 2 == 0) ? 1.0 : -1.0;
  return sign * std::conj(pos);
}

Eigen::MatrixXcd sh_matrix(const HarmonicSet& set, const DirectionGrid& grid) {
  Eigen::MatrixXcd y(grid.size(), set.size());
  for (std::size_t c = 0; c < set.size(); ++c) {
    for (std::size_t q = 0; q < grid.size(); ++q) {
      y(q, c) = sh_eval(set.indices[c], grid.directions[q]);
    }
  }
  return y;
}

ComplexMultichannel ideal_encode(const std::vector<std::vector<double>>& sources,
                                 const std::vector<SphericalDirection>& doas,
                                 const HarmonicSet& set, double sample_rate) {
  if (sources.size() != doas.size()) {
    throw ShapeError("source count does not match DOA count");
  }
  std::size_t len = 0;
  for (const auto& s : sources) {
    if (len == 0) len = s.size();
    if (s.size() != len) throw ShapeError("source signals differ in length");
  }
  ComplexMultichannel out;
  out.sample_rate = sample_rate;
  out.channels.assign(set.size(), std::vector<cplx>(len, cplx(0.0, 0.0)));
  std::vector<cplx> src(len);
  for (std::size_t q = 0; q < sources.size(); ++q) {
    for (std::size_t i = 0; i < len; ++i) src[i] = sources[q][i];
    for (std::size_t c = 0; c < set.size(); ++c) {
      const cplx w = std::conj(sh_eval(set.indices[c], doas[q]));
      simd::active().caxpy(w, src.data(), out.channels[c].data(), len);
    }
  }
  return out;
}

MultichannelSignal pack_ambisonics(const ComplexMultichannel& amb,
                                   const HarmonicSet& set) {
  if (amb.channels.size() != set.size()) {
    throw ShapeError("channel count does not match harmonic set");
  }
  MultichannelSignal out;
  out.sample_rate = amb.sample_rate;
  out.channels.resize(set.size());
  for (std::size_t c = 0; c < set.size(); ++c) {
    const auto& src = amb.channels[c];
    auto& dst = out.channels[c];
    dst.resize(src.size());
    const int m = set.indices[c].m;
    if (m < 0) {
      // Imaginary part of the +|m| partner channel.
      const HarmonicIndex partner{set.indices[c].n, -m};
      const auto it = std::find(set.indices.begin(), set.indices.end(), partner);
      if (it == set.indices.end()) {
        throw ShapeError("harmonic set not closed under m -> -m");
      }
      const auto& ref = amb.channels[std::size_t(it - set.indices.begin())];
      for (std::size_t i = 0; i < src.size(); ++i) dst[i] = ref[i].imag();
    } else {
      if (m > 0) {
        const HarmonicIndex partner{set.indices[c].n, -m};
        if (std::find(set.indices.begin(), set.indices.end(), partner) ==
            set.indices.end()) {
          throw ShapeError("harmonic set not closed under m -> -m");
        }
      }
      for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i].real();
    }
  }
  return out;
}

ComplexMultichannel unpack_ambisonics(const MultichannelSignal& packed,
                                      const HarmonicSet& set) {
  if (packed.channels.size() != set.size()) {
    throw ShapeError("channel count does not match harmonic set");
  }
  ComplexMultichannel out;
  out.sample_rate = packed.sample_rate;
  out.channels.resize(set.size());
  for (std::size_t c = 0; c < set.size(); ++c) {
    const int n = set.indices[c].n;
    const int m = set.indices[c].m;
    const std::size_t len = packed.channels[c].size();
    out.channels[c].resize(len);
    if (m == 0) {
      for (std::size_t i = 0; i < len; ++i) {
        out.channels[c][i] = packed.channels[c][i];
      }
      continue;
    }
    const HarmonicIndex re_idx{n, std::abs(m)};
    const HarmonicIndex im_idx{n, -std::abs(m)};
    const auto re_it = std::find(set.indices.begin(), set.indices.end(), re_idx);
    const auto im_it = std::find(set.indices.begin(), set.indices.end(), im_idx);
    if (re_it == set.indices.end() || im_it == set.indices.end()) {
      throw ShapeError("harmonic set not closed under m -> -m");
    }
    const auto& re = packed.channels[std::size_t(re_it - set.indices.begin())];
    const auto& im = packed.channels[std::size_t(im_it - set.indices.begin())];
    const double sign = (std::abs(m) % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < len; ++i) {
      if (m > 0) {
        out.channels[c][i] = cplx(re[i], im[i]);
      } else {
        // a_{n,-m} = (-1)^m conj(a_{n,m})
        out.channels[c][i] = sign * cplx(re[i], -im[i]);
      }
    }
  }
  return out;
}

}  // namespace ambidrop
