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

#include "ambidrop/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace ambidrop {

namespace {

double wrap_azimuth(double phi) {
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  return phi;
}

// Planar catalog geometry on the figure's unit grid (1.0 = 0.10 m).
ArrayGeometry planar(const std::string& name,
                     std::vector<std::pair<double, double>> units) {
  ArrayGeometry geom;
  geom.name = name;
  for (const auto& [ux, uy] : units) {
    geom.mics.push_back({0.1 * ux, 0.1 * uy, 0.0});
  }
  geom.reference_index = 0;
  return geom;
}

ArrayGeometry circle(const std::string& name, double radius_units) {
  std::vector<std::pair<double, double>> units;
  for (int i = 0; i < 5; ++i) {
    const double az = kTwoPi * i / 5.0;
    units.emplace_back(radius_units * std::cos(az),
                       radius_units * std::sin(az));
  }
  return planar(name, units);
}

}  // namespace

SphericalDirection::SphericalDirection(double theta_in, double phi_in)
    : theta(theta_in), phi(wrap_azimuth(phi_in)) {
  if (theta < 0.0 || theta > kPi || !std::isfinite(theta)) {
    throw DomainError("inclination out of [0, pi]");
  }
}

double CartesianPoint::norm() const { return std::sqrt(x * x + y * y + z * z); }

CartesianPoint operator+(const CartesianPoint& a, const CartesianPoint& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}

CartesianPoint operator-(const CartesianPoint& a, const CartesianPoint& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}

CartesianPoint to_cartesian(double radius, const SphericalDirection& dir) {
  const double st = std::sin(dir.theta);
  return {radius * st * std::cos(dir.phi), radius * st * std::sin(dir.phi),
          radius * std::cos(dir.theta)};
}

SphericalDirection to_spherical(const CartesianPoint& p, double* radius) {
  const double r = p.norm();
  if (radius != nullptr) *radius = r;
  if (r == 0.0) return SphericalDirection(0.0, 0.0);
  const double theta = std::acos(std::clamp(p.z / r, -1.0, 1.0));
  return SphericalDirection(theta, wrap_azimuth(std::atan2(p.y, p.x)));
}

CartesianPoint unit_vector(const SphericalDirection& dir) {
  return to_cartesian(1.0, dir);
}

void ArrayGeometry::validate() const {
  if (mics.empty()) throw ShapeError("array '" + name + "' has no microphones");
  if (reference_index >= mics.size()) {
    throw ShapeError("reference index out of range for array '" + name + "'");
  }
  for (std::size_t i = 0; i < mics.size(); ++i) {
    for (const auto& c : {mics[i].x, mics[i].y, mics[i].z}) {
      if (!std::isfinite(c)) {
        throw ShapeError("non-finite coordinate in array '" + name + "'");
      }
    }
    for (std::size_t j = i + 1; j < mics.size(); ++j) {
      if ((mics[i] - mics[j]).norm() < 1e-6) {
        throw ShapeError("microphones " + std::to_string(i) + " and " +
                         std::to_string(j) + " coincide in array '" + name +
                         "'");
      }
    }
  }
}

ArrayGeometry builtin_array(const std::string& name) {
  if (name == "full_circle_r10") return circle(name, 1.0);
  if (name == "full_circle_r5") return circle(name, 0.5);
  if (name == "semi_circle_r5") {
    return planar(name, {{0.0, -0.5},
                         {0.354, -0.354},
                         {0.5, 0.0},
                         {0.354, 0.354},
                         {0.0, 0.5}});
  }
  if (name == "semi_circle_r10") {
    return planar(name, {{0.0, -1.0},
                         {0.707, -0.707},
                         {1.0, 0.0},
                         {0.707, 0.707},
                         {0.0, 1.0}});
  }
  if (name == "ula_y") {
    return planar(name,
                  {{0.0, -1.0}, {0.0, -0.5}, {0.0, 0.0}, {0.0, 0.5}, {0.0, 1.0}});
  }
  if (name == "ula_x") {
    return planar(name,
                  {{-1.0, 0.0}, {-0.5, 0.0}, {0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}});
  }
  if (name == "x_shape") {
    ArrayGeometry geom = planar(name, {{0.0, 0.0}});
    for (const double deg : {45.0, 135.0, 225.0, 315.0}) {
      const double az = deg * kPi / 180.0;
      geom.mics.push_back({0.1 * std::cos(az), 0.1 * std::sin(az), 0.0});
    }
    return geom;
  }
  if (name == "plus_shape") {
    return planar(name,
                  {{0.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}, {1.0, 0.0}, {-1.0, 0.0}});
  }
  if (name == "random1") {
    return planar(name, {{0.454, -0.096},
                         {-0.363, -0.354},
                         {-0.167, 0.299},
                         {0.452, 0.478},
                         {0.740, 0.362}});
  }
  if (name == "random2") {
    return planar(name, {{0.093, 0.805},
                         {0.726, -0.539},
                         {-0.4, 0.793},
                         {0.496, 0.402},
                         {-0.187, 0.327}});
  }
  if (name == "random3") {
    return planar(name, {{0.222, 0.542},
                         {-0.916, 0.012},
                         {-0.329, 0.023},
                         {-0.082, 0.411},
                         {0.610, -0.247}});
  }
  if (name == "random4") {
    return planar(name, {{0.906, -0.037},
                         {0.757, -0.342},
                         {-0.825, -0.061},
                         {-0.609, -0.635},
                         {0.398, 0.087}});
  }
  throw CatalogError("unknown array '" + name + "'");
}

const std::vector<std::string>& builtin_array_names() {
  static const std::vector<std::string> names = {
      "full_circle_r10", "semi_circle_r5",  "ula_y",   "x_shape",
      "random1",         "random2",         "full_circle_r5",
      "semi_circle_r10", "ula_x",           "plus_shape",
      "random3",         "random4"};
  return names;
}

std::string array_to_json(const ArrayGeometry& geom) {
  nlohmann::json j;
  j["name"] = geom.name;
  j["reference_index"] = geom.reference_index;
  auto mics = nlohmann::json::array();
  for (const auto& p : geom.mics) {
    mics.push_back({p.x, p.y, p.z});
  }
  j["mics"] = mics;
  return j.dump(2);
}

ArrayGeometry array_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("array JSON parse failure: ") + e.what());
  }
  ArrayGeometry geom;
  try {
    geom.name = j.at("name").get<std::string>();
    geom.reference_index = j.value("reference_index", std::size_t{0});
    for (const auto& mic : j.at("mics")) {
      if (mic.size() != 3) throw FormatError("mic entry must have 3 values");
      geom.mics.push_back({mic[0].get<double>(), mic[1].get<double>(),
                           mic[2].get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("array JSON structure: ") + e.what());
  }
  geom.validate();
  return geom;
}

HarmonicSet full_set(int max_order) {
  if (max_order < 0) throw DomainError("order must be >= 0");
  HarmonicSet set;
  set.max_order = max_order;
  for (int n = 0; n <= max_order; ++n) {
    for (int m = -n; m <= n; ++m) set.indices.push_back({n, m});
  }
  return set;
}

HarmonicSet horizontal_subset(int max_order) {
  if (max_order < 0) throw DomainError("order must be >= 0");
  HarmonicSet set;
  set.max_order = max_order;
  set.indices.push_back({0, 0});
  for (int n = 1; n <= max_order; ++n) {
    set.indices.push_back({n, -n});
    set.indices.push_back({n, n});
  }
  return set;
}

}  // namespace ambidrop
