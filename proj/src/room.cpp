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

#include "ambidrop/room.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ambidrop/simd.hpp"

namespace ambidrop {

namespace {

constexpr int kDelayTaps = 8;
constexpr int kDelayHalf = kDelayTaps / 2;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic per-channel noise stream derived from the scene seed.
std::mt19937_64 noise_stream(std::uint64_t seed, std::uint64_t channel) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(channel + 1)));
}

// out[i] += g * in[i - shift] over the overlapping span.
void add_scaled_shifted(const std::vector<double>& in, long shift, double g,
                        std::vector<double>* out) {
  const long lo = std::max<long>(0, shift);
  const long hi = std::min<long>(long(out->size()), long(in.size()) + shift);
  if (hi <= lo) return;
  simd::active().axpy(g, in.data() + (lo - shift), out->data() + lo,
                      std::size_t(hi - lo));
}

double mean_square(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  return simd::active().sumsq(x.data(), x.size()) / double(x.size());
}

double distance(const CartesianPoint& a, const CartesianPoint& b) {
  return (a - b).norm();
}

CartesianPoint absolute_mic(const SceneSpec& scene, std::size_t m) {
  return scene.array_center + scene.array.mics[m];
}

std::size_t closest_mic_to_target(const SceneSpec& scene) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < scene.array.mics.size(); ++m) {
    const double d = distance(absolute_mic(scene, m), scene.sources[0].position);
    if (d < best_d) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

std::size_t scene_signal_length(const SceneSpec& scene) {
  std::size_t len = 0;
  for (const auto& s : scene.sources) len = std::max(len, s.signal.size());
  return len;
}

// Output length with headroom for the longest possible image delay.
std::size_t render_length(const SceneSpec& scene, std::size_t len) {
  const double diag = std::sqrt(scene.room.lx * scene.room.lx +
                                scene.room.ly * scene.room.ly +
                                scene.room.lz * scene.room.lz);
  const double max_dist = diag * (scene.room.max_image_order + 1.0);
  return len +
         std::size_t(std::ceil(max_dist / scene.speed_of_sound *
                               scene.sample_rate)) +
         kDelayTaps;
}

}  // namespace

void RoomSpec::validate() const {
  if (lx <= 0.0 || ly <= 0.0 || lz <= 0.0) {
    throw DomainError("room dimensions must be positive");
  }
  for (double b : beta) {
    if (b < 0.0 || b > 1.0) {
      throw DomainError("wall reflection coefficients must lie in [0, 1]");
    }
  }
  if (max_image_order < 0) throw DomainError("max image order must be >= 0");
}

void SceneSpec::validate() const {
  room.validate();
  array.validate();
  if (sources.empty()) throw ShapeError("scene has no sources");
  auto inside = [&](const CartesianPoint& p) {
    return p.x > 0.0 && p.x < room.lx && p.y > 0.0 && p.y < room.ly &&
           p.z > 0.0 && p.z < room.lz;
  };
  for (const auto& s : sources) {
    if (!inside(s.position)) throw DomainError("source outside room");
  }
  for (std::size_t m = 0; m < array.mics.size(); ++m) {
    if (!inside(array_center + array.mics[m])) {
      throw DomainError("microphone outside room");
    }
  }
  if (sample_rate <= 0.0 || speed_of_sound <= 0.0) {
    throw DomainError("sample rate and speed of sound must be positive");
  }
}

std::vector<ImageSource> compute_images(const RoomSpec& room,
                                        const CartesianPoint& source,
                                        const CartesianPoint& receiver,
                                        double speed_of_sound) {
  room.validate();
  if (distance(source, receiver) < 1e-6) {
    throw DomainError("source and receiver coincide");
  }
  const int order = room.max_image_order;
  const double dims[3] = {room.lx, room.ly, room.lz};
  const double src[3] = {source.x, source.y, source.z};

  std::vector<ImageSource> images;
  for (int px = 0; px <= 1; ++px) {
    for (int py = 0; py <= 1; ++py) {
      for (int pz = 0; pz <= 1; ++pz) {
        const int p[3] = {px, py, pz};
        for (int nx = -order; nx <= order; ++nx) {
          for (int ny = -order; ny <= order; ++ny) {
            for (int nz = -order; nz <= order; ++nz) {
              const int n[3] = {nx, ny, nz};
              int total = 0;
              double wall_gain = 1.0;
              double pos[3];
              for (int d = 0; d < 3; ++d) {
                const int c_lo = std::abs(n[d] - p[d]);  // wall at 0
                const int c_hi = std::abs(n[d]);         // wall at L
                total += c_lo + c_hi;
                if (total > order) break;
                wall_gain *= std::pow(room.beta[2 * d], c_lo) *
                             std::pow(room.beta[2 * d + 1], c_hi);
                pos[d] = (1.0 - 2.0 * p[d]) * src[d] + 2.0 * n[d] * dims[d];
              }
              if (total > order || wall_gain == 0.0) continue;
              ImageSource img;
              img.position = {pos[0], pos[1], pos[2]};
              const double dist = distance(img.position, receiver);
              img.gain = wall_gain / (kFourPi * dist);
              img.delay = dist / speed_of_sound;
              img.reflection_order = total;
              images.push_back(img);
            }
          }
        }
      }
    }
  }
  return images;
}

void add_delayed(const std::vector<double>& in, double delay_samples,
                 double gain, std::vector<double>* out) {
  const long i0 = long(std::floor(delay_samples));
  const double frac = delay_samples - double(i0);
  if (frac < 1e-12) {
    add_scaled_shifted(in, i0, gain, out);
    return;
  }
  for (int j = 0; j < kDelayTaps; ++j) {
    const long k = i0 - (kDelayHalf - 1) + j;
    const double u = double(k) - delay_samples;  // in (-4, 4)
    const double hann = 0.5 * (1.0 + std::cos(kPi * u / kDelayHalf));
    const double sinc = std::sin(kPi * u) / (kPi * u);
    add_scaled_shifted(in, k, gain * hann * sinc, out);
  }
}

MicRender render_mics(const SceneSpec& scene) {
  scene.validate();
  const std::size_t len = scene_signal_length(scene);
  if (len == 0) throw ShapeError("all scene source signals are empty");
  const std::size_t out_len = render_length(scene, len);
  const std::size_t num_mics = scene.array.mics.size();

  MicRender render;
  render.mics.sample_rate = scene.sample_rate;
  render.mics.channels.assign(num_mics, std::vector<double>(out_len, 0.0));
  render.reference_mic = closest_mic_to_target(scene);

  for (const auto& source : scene.sources) {
    for (std::size_t m = 0; m < num_mics; ++m) {
      const auto images = compute_images(scene.room, source.position,
                                         absolute_mic(scene, m),
                                         scene.speed_of_sound);
      for (const auto& img : images) {
        add_delayed(source.signal, img.delay * scene.sample_rate, img.gain,
                    &render.mics.channels[m]);
      }
    }
  }

  // Direct-path-only target at the reference mic.
  render.clean_reference.assign(out_len, 0.0);
  {
    const CartesianPoint ref = absolute_mic(scene, render.reference_mic);
    const double d = distance(scene.sources[0].position, ref);
    add_delayed(scene.sources[0].signal,
                d / scene.speed_of_sound * scene.sample_rate,
                1.0 / (kFourPi * d), &render.clean_reference);
  }

  if (std::isfinite(scene.snr_db)) {
    const double ref_power = mean_square(render.mics.channels[render.reference_mic]);
    const double sigma = std::sqrt(ref_power * std::pow(10.0, -scene.snr_db / 10.0));
    for (std::size_t m = 0; m < num_mics; ++m) {
      auto rng = noise_stream(scene.seed, m);
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (auto& v : render.mics.channels[m]) v += sigma * gauss(rng);
    }
  }
  return render;
}

AmbisonicsRender render_ideal_ambisonics(const SceneSpec& scene,
                                         const HarmonicSet& set) {
  scene.validate();
  const std::size_t len = scene_signal_length(scene);
  if (len == 0) throw ShapeError("all scene source signals are empty");
  const std::size_t out_len = render_length(scene, len);
  const std::size_t num_channels = set.size();

  AmbisonicsRender render;
  render.channels.sample_rate = scene.sample_rate;
  render.channels.channels.assign(num_channels,
                                  std::vector<cplx>(out_len, cplx(0.0)));

  std::vector<double> amplitude(out_len);
  for (const auto& source : scene.sources) {
    // Images w.r.t. the array center; each acts as a far-field plane wave.
    const auto images = compute_images(scene.room, source.position,
                                       scene.array_center,
                                       scene.speed_of_sound);
    for (const auto& img : images) {
      std::fill(amplitude.begin(), amplitude.end(), 0.0);
      add_delayed(source.signal, img.delay * scene.sample_rate, img.gain,
                  &amplitude);
      const SphericalDirection doa =
          to_spherical(img.position - scene.array_center, nullptr);
      for (std::size_t c = 0; c < num_channels; ++c) {
        const cplx w = std::conj(sh_eval(set.indices[c], doa));
        const double wr = w.real(), wi = w.imag();
        cplx* dst = render.channels.channels[c].data();
        for (std::size_t i = 0; i < out_len; ++i) {
          dst[i] += cplx(wr * amplitude[i], wi * amplitude[i]);
        }
      }
    }
  }

  // a_00 of the target's direct path.
  render.clean_reference.assign(out_len, 0.0);
  {
    const double d = distance(scene.sources[0].position, scene.array_center);
    if (d < 1e-6) throw DomainError("target coincides with array center");
    add_delayed(scene.sources[0].signal,
                d / scene.speed_of_sound * scene.sample_rate,
                1.0 / (kFourPi * d) / std::sqrt(kFourPi),
                &render.clean_reference);
  }

  if (std::isfinite(scene.snr_db)) {
    // Find the omni channel to calibrate the noise level.
    double ref_power = 0.0;
    for (std::size_t c = 0; c < num_channels; ++c) {
      if (set.indices[c].n == 0) {
        double acc = 0.0;
        for (const auto& v : render.channels.channels[c]) acc += std::norm(v);
        ref_power = acc / double(out_len);
        break;
      }
    }
    const double sigma2 = ref_power * std::pow(10.0, -scene.snr_db / 10.0);
    // Conjugate-symmetric noise across +/-m pairs keeps the channels
    // consistent with a real sound field.
    for (std::size_t c = 0; c < num_channels; ++c) {
      const HarmonicIndex idx = set.indices[c];
      if (idx.m < 0) continue;
      auto rng = noise_stream(scene.seed, 1000 + c);
      std::normal_distribution<double> gauss(0.0, 1.0);
      if (idx.m == 0) {
        const double s = std::sqrt(sigma2);
        for (auto& v : render.channels.channels[c]) v += s * gauss(rng);
        continue;
      }
      const auto partner = std::find(set.indices.begin(), set.indices.end(),
                                     HarmonicIndex{idx.n, -idx.m});
      const double s = std::sqrt(sigma2 / 2.0);
      const double sign = (idx.m % 2 == 0) ? 1.0 : -1.0;
      for (std::size_t i = 0; i < out_len; ++i) {
        const cplx z(s * gauss(rng), s * gauss(rng));
        render.channels.channels[c][i] += z;
        if (partner != set.indices.end()) {
          render.channels.channels[std::size_t(partner - set.indices.begin())]
              [i] += sign * std::conj(z);
        }
      }
    }
  }
  return render;
}

}  // namespace ambidrop
