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

// Shoebox-room image-method scene synthesis.  The same acoustic scene is
// rendered both to microphone signals and to ideal Ambisonics signals so
// the two processing chains stay comparable.

#ifndef AMBIDROP_ROOM_HPP_
#define AMBIDROP_ROOM_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ambidrop/common.hpp"
#include "ambidrop/geometry.hpp"
#include "ambidrop/sh.hpp"

namespace ambidrop {

struct RoomSpec {
  double lx = 6.0, ly = 5.0, lz = 3.0;  // meters
  // Wall reflection coefficients: {x=0, x=lx, y=0, y=ly, z=0, z=lz}.
  std::array<double, 6> beta = {0.83, 0.83, 0.83, 0.83, 0.83, 0.83};
  int max_image_order = 4;

  void validate() const;
};

struct SceneSource {
  CartesianPoint position;
  std::vector<double> signal;
};

struct SceneSpec {
  RoomSpec room;
  std::vector<SceneSource> sources;  // target first
  ArrayGeometry array;               // mic positions relative to array center
  CartesianPoint array_center;
  double snr_db = 30.0;
  double sample_rate = 16000.0;
  double speed_of_sound = kDefaultSpeedOfSound;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ImageSource {
  CartesianPoint position;  // absolute image position
  double gain = 0.0;        // prod(beta^counts) / (4*pi*distance)
  double delay = 0.0;       // seconds, distance / c
  int reflection_order = 0;
};

// All image sources of reflection order <= room.max_image_order for one
// (source, receiver) pair.  Throws DomainError when source and receiver are
// closer than 1e-6 m.
std::vector<ImageSource> compute_images(const RoomSpec& room,
                                        const CartesianPoint& source,
                                        const CartesianPoint& receiver,
                                        double speed_of_sound = kDefaultSpeedOfSound);

struct MicRender {
  MultichannelSignal mics;
  std::vector<double> clean_reference;  // direct-path target at reference mic
  std::size_t reference_mic = 0;        // closest to the target source
};

// Image-method rendering to the array's microphones plus white sensor noise
// scaled so mixture/noise power at the reference mic equals scene SNR.
MicRender render_mics(const SceneSpec& scene);

struct AmbisonicsRender {
  ComplexMultichannel channels;
  std::vector<double> clean_reference;  // a_00 of the target's direct path
};

// Same scene as far-field plane waves encoded with ideal_encode; per-channel
// white noise at the scene SNR measured on the a_00 channel.
AmbisonicsRender render_ideal_ambisonics(const SceneSpec& scene,
                                         const HarmonicSet& set);

// Windowed-sinc fractional delay: out[n] += gain * in[n - delay_samples],
// 8-tap Hann-windowed interpolation.  Exposed for testing.
void add_delayed(const std::vector<double>& in, double delay_samples,
                 double gain, std::vector<double>* out);

}  // namespace ambidrop

#endif  // AMBIDROP_ROOM_HPP_
