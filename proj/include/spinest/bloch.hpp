#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "spinest/quadrature.hpp"
#include "spinest/rng.hpp"

namespace spinest {

// A real 3-vector in the Bloch ball. Pure states and observable
// directions sit on the unit sphere.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }

  BlochVector operator+(const BlochVector& o) const {
    return {x + o.x, y + o.y, z + o.z};
  }
  BlochVector operator-(const BlochVector& o) const {
    return {x - o.x, y - o.y, z - o.z};
  }
  BlochVector operator-() const { return {-x, -y, -z}; }
  BlochVector operator*(double s) const { return {s * x, s * y, s * z}; }
};

inline BlochVector operator*(double s, const BlochVector& v) { return v * s; }

inline constexpr double kUnitTol = 1e-9;

inline bool is_unit(const BlochVector& v, double tol = kUnitTol) {
  return std::abs(v.norm() - 1.0) <= tol;
}

inline void require_unit(const BlochVector& v, const char* what) {
  if (!is_unit(v)) throw std::invalid_argument(std::string(what) + " must be a unit vector");
}

// Uniform pure state: cos(theta) uniform on [-1,1], phi uniform on [0,2pi).
inline BlochVector sample_pure_state(RngStream& rng) {
  double c = rng.uniform(-1.0, 1.0);
  double phi = rng.uniform(0.0, 2.0 * M_PI);
  double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  return {s * std::cos(phi), s * std::sin(phi), c};
}

// <direction . sigma> on the given state.
inline double expectation(const BlochVector& direction, const BlochVector& state) {
  require_unit(direction, "direction");
  return direction.dot(state);
}

inline double angle_between(const BlochVector& a, const BlochVector& b) {
  require_unit(a, "a");
  require_unit(b, "b");
  double c = a.dot(b);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return std::acos(c);
}

struct SphereAverageSpec {
  std::size_t node_count = 64;
};

// (1/2) Integral_{-1}^{1} f(u) du, u being the expectation value of a fixed
// observable; equals the uniform average over pure states for any f that
// depends on the state only through that expectation value.
template <typename F>
double average_over_sphere(F&& f, const SphereAverageSpec& spec = {}) {
  GaussLegendre gl(spec.node_count);
  return 0.5 * gl.integrate(f);
}

// |c1 - c2|, the trace distance between the corresponding qubit states.
inline double trace_distance(const BlochVector& r1, const BlochVector& r2) {
  return (r1 - r2).norm();
}

}  // namespace spinest
