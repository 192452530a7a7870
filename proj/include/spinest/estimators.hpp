#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

#include "spinest/quadrature.hpp"

namespace spinest {

// Tally of +/-1 outcomes for one observable axis.
struct OutcomeCounts {
  long up = 0;
  long total = 0;

  long down() const { return total - up; }
  // sum of the +/-1 outcomes
  long signed_sum() const { return 2 * up - total; }
};

inline void require_counts(const OutcomeCounts& c) {
  if (c.total < 1) throw std::invalid_argument("need at least one shot");
  if (c.up < 0 || c.up > c.total) throw std::invalid_argument("up count out of range");
}

// Sample mean of the +/-1 outcomes, (2r - N)/N. Unbiased.
inline double mean_estimate(const OutcomeCounts& c) {
  require_counts(c);
  return static_cast<double>(c.signed_sum()) / static_cast<double>(c.total);
}

// Biased estimate (2r - N)/(N + 2); shrinks toward zero, minimizing the
// sphere-averaged mean squared error.
inline double shrinkage_estimate(const OutcomeCounts& c) {
  require_counts(c);
  return static_cast<double>(c.signed_sum()) / static_cast<double>(c.total + 2);
}

// Joint-measurement estimate with outcomes relabeled +/-(1/alpha):
// (up - down)/(alpha * shots). May exceed [-1, 1]; deliberately unclipped.
inline double joint_rescaled_estimate(const OutcomeCounts& c, double alpha) {
  require_counts(c);
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  return static_cast<double>(c.signed_sum()) /
         (alpha * static_cast<double>(c.total));
}

// MSE-optimal gain for a sharpness-alpha marginal sampled on `shots`
// copies: K = shots*alpha^2 / (3 - alpha^2 + shots*alpha^2).
inline double biased_joint_gain(long shots, double alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  double a2 = alpha * alpha;
  return static_cast<double>(shots) * a2 /
         (3.0 - a2 + static_cast<double>(shots) * a2);
}

// K * (up - down)/(alpha * shots) with the optimal gain above.
inline double joint_biased_estimate(const OutcomeCounts& c, double alpha) {
  require_counts(c);
  return biased_joint_gain(c.total, alpha) * joint_rescaled_estimate(c, alpha);
}

struct CrossWeights {
  double k = 0.0;       // gain on the own-observable mean
  double lambda = 0.0;  // weight on the other observable's mean
};

// MSE-optimal weights for estimating <A> from the means of both
// observables measured separately, N shots each.
inline CrossWeights cross_weights(long n, double adotb) {
  if (n < 1) throw std::invalid_argument("need at least one shot per axis");
  if (std::abs(adotb) > 1.0) throw std::invalid_argument("a.b must lie in [-1, 1]");
  double nn = static_cast<double>(n);
  double c2 = adotb * adotb;
  double denom = (nn + 2.0) * (nn + 2.0) - nn * nn * c2;
  return {nn * (2.0 + nn - nn * c2) / denom, 2.0 * nn * adotb / denom};
}

// Estimates (est_a, est_b) from separate measurements of A and B, each
// weighting in the other axis's results.
inline std::pair<double, double> cross_weighted_estimate(
    const OutcomeCounts& counts_a, const OutcomeCounts& counts_b,
    double adotb) {
  require_counts(counts_a);
  require_counts(counts_b);
  if (counts_a.total != counts_b.total) {
    throw std::invalid_argument("cross-weighted estimation needs equal shot counts");
  }
  CrossWeights w = cross_weights(counts_a.total, adotb);
  double ma = mean_estimate(counts_a);
  double mb = mean_estimate(counts_b);
  return {w.k * ma + w.lambda * mb, w.k * mb + w.lambda * ma};
}

// Posterior mean of <A> under a uniform prior after r spin-ups in N
// shots; closed form (2r - N)/(N + 2), identical to the shrinkage
// estimate.
inline double bayes_single_estimate(long r, long n) {
  return shrinkage_estimate({r, n});
}

// Moments I_n = Integral_{-1}^{1} u^n L(u) du of the two-observable
// likelihood L(u) = [(1+u)/2]^r [(1-u)/2]^(N-r) [(1+cu)/2]^s
// [(1-cu)/2]^(N-s), a polynomial of degree 2N, so Gauss-Legendre with
// node_count >= N + 2 is exact; callers are held to the stricter 2N + 2.
struct BayesJointMoments {
  double i0 = 0.0;
  double i1 = 0.0;
};

inline BayesJointMoments bayes_joint_moments(long r, long s, long n,
                                             double adotb,
                                             const GaussLegendre& gl) {
  BayesJointMoments m;
  for (std::size_t q = 0; q < gl.size(); ++q) {
    double u = gl.nodes()[q];
    double lik = std::pow(0.5 * (1.0 + u), static_cast<double>(r)) *
                 std::pow(0.5 * (1.0 - u), static_cast<double>(n - r)) *
                 std::pow(0.5 * (1.0 + adotb * u), static_cast<double>(s)) *
                 std::pow(0.5 * (1.0 - adotb * u), static_cast<double>(n - s));
    m.i0 += gl.weights()[q] * lik;
    m.i1 += gl.weights()[q] * u * lik;
  }
  return m;
}

// Posterior mean of <A> using the results of both observables: r of N
// spin-ups along a, s of N along b.
inline double bayes_joint_estimate(long r, long s, long n, double adotb,
                                   std::size_t node_count) {
  if (r < 0 || r > n || s < 0 || s > n) throw std::invalid_argument("count out of range");
  if (std::abs(adotb) > 1.0) throw std::invalid_argument("a.b must lie in [-1, 1]");
  if (node_count < static_cast<std::size_t>(2 * n + 2)) {
    throw std::invalid_argument("node_count must be at least 2N + 2");
  }
  GaussLegendre gl(node_count);
  BayesJointMoments m = bayes_joint_moments(r, s, n, adotb, gl);
  return m.i1 / m.i0;
}

}  // namespace spinest
