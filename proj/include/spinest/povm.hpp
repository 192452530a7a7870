#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinest/bloch.hpp"

namespace spinest {

inline constexpr double kStructuralTol = 1e-10;
inline constexpr double kGeometricTol = 1e-12;

// One POM element in Bloch form, weight * I + vector . sigma.
// Positive iff |vector| <= weight.
struct Effect {
  double weight = 0.0;
  BlochVector vector{};

  double positivity_residual() const { return weight - vector.norm(); }
};

// Ordered effects plus a per-effect sign label along each jointly
// measured observable axis (1, 2 or 3 axes).
struct Povm {
  std::vector<Effect> effects;
  std::vector<std::array<int, 3>> labels;  // unused trailing axes are 0
  std::size_t axis_count = 1;
};

struct SharpnessTriple {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;  // absent (0) for two-observable measurements
};

struct ValidityReport {
  std::vector<double> positivity_residuals;  // weight - |vector| per effect
  double weight_sum_residual = 0.0;          // sum(w) - 1
  double vector_sum_norm = 0.0;              // |sum(v)|
  bool positivity_pass = false;
  bool completeness_pass = false;
  bool pass = false;
};

inline Povm projective_povm(const BlochVector& direction) {
  require_unit(direction, "direction");
  Povm p;
  p.axis_count = 1;
  p.effects = {{0.5, 0.5 * direction}, {0.5, -0.5 * direction}};
  p.labels = {{{+1, 0, 0}}, {{-1, 0, 0}}};
  return p;
}

// Saturating sharpness for equally sharp measurements of two spin
// components at angle eta: alpha = beta = sqrt(1/(1+|sin eta|)).
inline SharpnessTriple optimal_sharpness_pair(double eta) {
  if (!(eta >= 0.0 && eta <= M_PI)) {
    throw std::invalid_argument("eta must lie in [0, pi]");
  }
  double a = std::sqrt(1.0 / (1.0 + std::abs(std::sin(eta))));
  return {a, a, 0.0};
}

// 2 - |alpha a + beta b| - |alpha a - beta b|; nonnegative iff the pair of
// sharpnesses is admissible, zero iff the joint measurement is optimal.
inline double saturation_residual(const BlochVector& a, const BlochVector& b,
                                  double alpha, double beta) {
  require_unit(a, "a");
  require_unit(b, "b");
  return 2.0 - (alpha * a + beta * b).norm() - (alpha * a - beta * b).norm();
}

// Four-outcome joint measurement of spin along a and b with marginal
// sharpnesses alpha, beta. Effect_{ij} = (1/4)((1 + i j t) I + (i alpha a
// + j beta b) . sigma) with t = (|aa+bb| - |aa-bb|)/2; positivity holds
// exactly when the admissibility inequality does.
inline Povm joint_povm_two(const BlochVector& a, const BlochVector& b,
                           double alpha, double beta) {
  double residual = saturation_residual(a, b, alpha, beta);
  if (residual < -kStructuralTol) {
    throw std::invalid_argument(
        "inadmissible sharpness pair, residual = " + std::to_string(residual));
  }
  double plus = (alpha * a + beta * b).norm();
  double minus = (alpha * a - beta * b).norm();
  double t = 0.5 * (plus - minus);
  Povm p;
  p.axis_count = 2;
  for (int i : {+1, -1}) {
    for (int j : {+1, -1}) {
      Effect e;
      e.weight = 0.25 * (1.0 + i * j * t);
      e.vector = 0.25 * (i * alpha * a + j * beta * b);
      // saturation can leave a residual of order -1e-16; clamp
      if (e.weight < 0.0 && e.weight > -kGeometricTol) e.weight = 0.0;
      p.effects.push_back(e);
      p.labels.push_back({i, j, 0});
    }
  }
  return p;
}

// Eight-outcome joint measurement of sigma_x, sigma_y, sigma_z with equal
// sharpness 1/sqrt(3); informationally complete.
inline Povm joint_povm_three() {
  const double s = 1.0 / (8.0 * std::sqrt(3.0));
  Povm p;
  p.axis_count = 3;
  for (int i : {+1, -1}) {
    for (int j : {+1, -1}) {
      for (int k : {+1, -1}) {
        p.effects.push_back({0.125, {i * s, j * s, k * s}});
        p.labels.push_back({i, j, k});
      }
    }
  }
  return p;
}

inline ValidityReport validate_povm(const Povm& povm,
                                    double tol = kStructuralTol) {
  ValidityReport rep;
  double wsum = 0.0;
  BlochVector vsum{};
  rep.positivity_pass = true;
  for (const Effect& e : povm.effects) {
    double res = e.positivity_residual();
    rep.positivity_residuals.push_back(res);
    if (res < -tol) rep.positivity_pass = false;
    wsum += e.weight;
    vsum = vsum + e.vector;
  }
  rep.weight_sum_residual = wsum - 1.0;
  rep.vector_sum_norm = vsum.norm();
  rep.completeness_pass = std::abs(rep.weight_sum_residual) <= tol &&
                          rep.vector_sum_norm <= tol;
  rep.pass = rep.positivity_pass && rep.completeness_pass;
  return rep;
}

// Sum the effects with sign +1 on the given axis, check the marginal has
// the unsharp-projector form (1/2)(I + alpha direction . sigma) and
// return alpha.
inline double extract_marginal_sharpness(const Povm& povm,
                                         std::size_t axis_index,
                                         const BlochVector& direction) {
  require_unit(direction, "direction");
  if (axis_index >= povm.axis_count) {
    throw std::invalid_argument("axis_index out of range for this POM");
  }
  double w = 0.0;
  BlochVector v{};
  for (std::size_t n = 0; n < povm.effects.size(); ++n) {
    if (povm.labels[n][axis_index] == +1) {
      w += povm.effects[n].weight;
      v = v + povm.effects[n].vector;
    }
  }
  double alpha = 2.0 * v.dot(direction);
  BlochVector perp = v - (v.dot(direction)) * direction;
  if (std::abs(w - 0.5) > kStructuralTol || perp.norm() > kStructuralTol) {
    throw std::runtime_error("marginal is not an unsharp measurement along the given direction");
  }
  return alpha;
}

struct SteeringReport {
  double length = 0.0;
  bool admissible = false;
  // (P(-|+), P(+|+)) per axis for a projective check measurement on the
  // steered partner qubit.
  std::vector<std::array<double, 2>> conditional_probs;
};

// Singlet-steering necessity check for a triple joint measurement: the
// steered Bloch vector is (-alpha, -beta, -gamma) and must fit in the
// unit ball.
inline SteeringReport steering_bound_check(const SharpnessTriple& s) {
  SteeringReport rep;
  rep.length = std::sqrt(s.alpha * s.alpha + s.beta * s.beta + s.gamma * s.gamma);
  rep.admissible = rep.length <= 1.0 + kGeometricTol;
  for (double a : {s.alpha, s.beta, s.gamma}) {
    rep.conditional_probs.push_back({0.5 * (1.0 + a), 0.5 * (1.0 - a)});
  }
  return rep;
}

// Born rule in Bloch form: p_i = w_i + v_i . r.
inline std::vector<double> outcome_distribution(const Povm& povm,
                                                const BlochVector& state) {
  if (state.norm() > 1.0 + kUnitTol) {
    throw std::invalid_argument("state must lie in the closed Bloch ball");
  }
  if (!validate_povm(povm).pass) {
    throw std::invalid_argument("invalid POM");
  }
  std::vector<double> p;
  p.reserve(povm.effects.size());
  for (const Effect& e : povm.effects) {
    double pi = e.weight + e.vector.dot(state);
    if (pi < 0.0) {
      if (pi < -kGeometricTol) throw std::runtime_error("negative outcome probability");
      pi = 0.0;
    }
    p.push_back(pi);
  }
  return p;
}

}  // namespace spinest
