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

// Coordinate conventions, harmonic indexing, and the built-in planar
// microphone array catalog.
//
// Spherical angles follow the colatitude convention: theta is inclination
// measured from the +z axis (theta = pi/2 is the horizontal plane), phi is
// azimuth from +x toward +y, normalized into [0, 2*pi).

#ifndef AMBIDROP_GEOMETRY_HPP_
#define AMBIDROP_GEOMETRY_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "ambidrop/common.hpp"

namespace ambidrop {

struct SphericalDirection {
  double theta = 0.0;  // inclination from +z, [0, pi]
  double phi = 0.0;    // azimuth, normalized to [0, 2*pi)

  SphericalDirection() = default;
  SphericalDirection(double theta_in, double phi_in);
};

struct CartesianPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

CartesianPoint operator+(const CartesianPoint& a, const CartesianPoint& b);
CartesianPoint operator-(const CartesianPoint& a, const CartesianPoint& b);

// (radius, direction) -> cartesian and back.
CartesianPoint to_cartesian(double radius, const SphericalDirection& dir);
// Returns radius via out-parameter; direction of the zero vector is (0, 0).
SphericalDirection to_spherical(const CartesianPoint& p, double* radius);

// Unit vector pointing from origin toward the direction.
CartesianPoint unit_vector(const SphericalDirection& dir);

struct ArrayGeometry {
  std::string name;
  std::vector<CartesianPoint> mics;
  std::size_t reference_index = 0;

  // Throws ShapeError when invariants are violated (empty, reference out of
  // range, coincident microphones).
  void validate() const;
};

// Catalog arrays from the training/test sets (planar, M=5, within 0.10 m).
// Train: full_circle_r10, semi_circle_r5, ula_y, x_shape, random1, random2.
// Test: full_circle_r5, semi_circle_r10, ula_x, plus_shape, random3, random4.
ArrayGeometry builtin_array(const std::string& name);
const std::vector<std::string>& builtin_array_names();

// JSON document {name, mics: [[x,y,z],...], reference_index}; units meters.
std::string array_to_json(const ArrayGeometry& geom);
ArrayGeometry array_from_json(const std::string& json_text);

struct HarmonicIndex {
  int n = 0;  // order, >= 0
  int m = 0;  // degree, |m| <= n

  bool operator==(const HarmonicIndex&) const = default;
};

struct HarmonicSet {
  std::vector<HarmonicIndex> indices;
  int max_order = 0;

  std::size_t size() const { return indices.size(); }
};

// All (n, m) with 0 <= n <= max_order, ACN-style ordering (by n, then m).
HarmonicSet full_set(int max_order);

// The m = +/-n subset with the highest azimuthal resolution, plus (0,0);
// size 2*max_order + 1.
HarmonicSet horizontal_subset(int max_order);

}  // namespace ambidrop

#endif  // AMBIDROP_GEOMETRY_HPP_
