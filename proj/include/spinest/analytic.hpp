#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinest/estimators.hpp"
#include "spinest/quadrature.hpp"

namespace spinest {

// Every estimation strategy with a closed-form or exactly summable total
// error.
enum class Strategy {
  SepUnbiased,       // mean estimates, N copies per observable
  SepUnbiasedSplit,  // mean estimates, N1 / 2N-N1 split
  JointUnbiased,     // optimal joint POM, rescaled outcomes
  SepBiased,         // shrinkage estimates
  JointBiased,       // optimal joint POM, gain-optimal rescaling
  CrossWeighted,     // separate measurements, cross-weighted estimates
  BayesSingle,       // posterior mean per observable
  BayesJoint,        // posterior mean using both observables' results
  ThreeSepUnbiased,
  ThreeSepBiased,
  ThreeJoint,
};

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::SepUnbiased: return "sep-unbiased";
    case Strategy::SepUnbiasedSplit: return "sep-unbiased-split";
    case Strategy::JointUnbiased: return "joint-unbiased";
    case Strategy::SepBiased: return "sep-biased";
    case Strategy::JointBiased: return "joint-biased";
    case Strategy::CrossWeighted: return "cross-weighted";
    case Strategy::BayesSingle: return "bayes-single";
    case Strategy::BayesJoint: return "bayes-joint";
    case Strategy::ThreeSepUnbiased: return "three-sep-unbiased";
    case Strategy::ThreeSepBiased: return "three-sep-biased";
    case Strategy::ThreeJoint: return "three-joint";
  }
  return "?";
}

inline std::optional<Strategy> strategy_from_string(const std::string& s) {
  for (Strategy k :
       {Strategy::SepUnbiased, Strategy::SepUnbiasedSplit,
        Strategy::JointUnbiased, Strategy::SepBiased, Strategy::JointBiased,
        Strategy::CrossWeighted, Strategy::BayesSingle, Strategy::BayesJoint,
        Strategy::ThreeSepUnbiased, Strategy::ThreeSepBiased,
        Strategy::ThreeJoint}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

inline bool is_three_observable(Strategy s) {
  return s == Strategy::ThreeSepUnbiased || s == Strategy::ThreeSepBiased ||
         s == Strategy::ThreeJoint;
}

inline bool uses_angle(Strategy s) {
  return s == Strategy::JointUnbiased || s == Strategy::JointBiased ||
         s == Strategy::CrossWeighted || s == Strategy::BayesJoint;
}

struct ErrorQuery {
  Strategy strategy = Strategy::SepUnbiased;
  long n = 1;  // copies per observable; 2N total (two-obs), 3N (three-obs)
  double eta = std::numeric_limits<double>::quiet_NaN();
  double adotb = std::numeric_limits<double>::quiet_NaN();
  long n1 = -1;  // split strategies only
  std::size_t node_count = 0;  // 0 = automatic
};

namespace detail {

inline double abs_sin_eta(const ErrorQuery& q) {
  if (!std::isnan(q.eta)) return std::abs(std::sin(q.eta));
  if (!std::isnan(q.adotb)) return std::sqrt(std::max(0.0, 1.0 - q.adotb * q.adotb));
  throw std::invalid_argument("strategy requires eta or a.b");
}

inline double adotb_of(const ErrorQuery& q) {
  if (!std::isnan(q.adotb)) return q.adotb;
  if (!std::isnan(q.eta)) return std::cos(q.eta);
  throw std::invalid_argument("strategy requires eta or a.b");
}

inline double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// Row N of Pascal's triangle in doubles.
inline std::vector<double> binomial_row(long n) {
  std::vector<double> row(static_cast<std::size_t>(n) + 1, 1.0);
  for (long r = 1; r <= n; ++r) {
    row[static_cast<std::size_t>(r)] =
        row[static_cast<std::size_t>(r - 1)] *
        static_cast<double>(n - r + 1) / static_cast<double>(r);
  }
  return row;
}

}  // namespace detail

// Total error of the two-observable strategies with a closed form.
inline double two_observable_error(const ErrorQuery& q) {
  if (q.n < 1) throw std::invalid_argument("N must be >= 1");
  double n = static_cast<double>(q.n);
  switch (q.strategy) {
    case Strategy::SepUnbiased:
      return 4.0 / (3.0 * n);
    case Strategy::SepUnbiasedSplit: {
      if (q.n1 < 1 || q.n1 > 2 * q.n - 1) {
        throw std::invalid_argument("split N1 must lie in [1, 2N-1]");
      }
      double n1 = static_cast<double>(q.n1);
      return 2.0 / (3.0 * n1) + 2.0 / (3.0 * (2.0 * n - n1));
    }
    case Strategy::JointUnbiased: {
      double inv_a2 = 1.0 + detail::abs_sin_eta(q);
      return (inv_a2 - 1.0 / 3.0) / n;
    }
    case Strategy::SepBiased:
    case Strategy::BayesSingle:
      return 4.0 / (3.0 * (n + 2.0));
    case Strategy::JointBiased: {
      double a2 = 1.0 / (1.0 + detail::abs_sin_eta(q));
      return 2.0 * (3.0 - a2) / (3.0 * (3.0 - a2 + 2.0 * n * a2));
    }
    case Strategy::CrossWeighted: {
      double c2 = detail::adotb_of(q);
      c2 *= c2;
      return 4.0 * (n * c2 - n - 2.0) /
             (3.0 * (n * n * c2 - (n + 2.0) * (n + 2.0)));
    }
    default:
      throw std::invalid_argument("not a closed-form two-observable strategy");
  }
}

// Total Bayesian single-observable error by the exact sum over outcome
// tallies, using the beta-function values of the posterior moments.
inline double bayes_single_error_sum(long n) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  std::vector<double> binom = detail::binomial_row(n);
  double acc = 0.0;
  for (long r = 0; r <= n; ++r) {
    double i0 = 2.0 * detail::beta_fn(r + 1.0, n - r + 1.0);
    double i1 = 4.0 * detail::beta_fn(r + 2.0, n - r + 1.0) -
                2.0 * detail::beta_fn(r + 1.0, n - r + 1.0);
    acc += binom[static_cast<std::size_t>(r)] * i1 * i1 / i0;
  }
  return 2.0 * (1.0 / 3.0 - 0.5 * acc);
}

// Closed form 4/(3(N+2)), cross-checked against the exact sum.
inline double bayes_single_error(long n) {
  double closed = 4.0 / (3.0 * (static_cast<double>(n) + 2.0));
  double summed = bayes_single_error_sum(n);
  if (std::abs(closed - summed) > 1e-12) {
    throw std::logic_error("bayes single-observable sum disagrees with closed form");
  }
  return closed;
}

// Total error of the cross-observable Bayesian strategy by the exact
// double sum over spin-up tallies (r, s), with exact quadrature for the
// likelihood moments.
inline double bayes_joint_error(long n, double adotb,
                                std::size_t node_count = 0) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  if (std::abs(adotb) > 1.0) throw std::invalid_argument("a.b must lie in [-1, 1]");
  if (node_count == 0) node_count = static_cast<std::size_t>(2 * n + 8);
  if (node_count < static_cast<std::size_t>(2 * n + 2)) {
    throw std::invalid_argument("node_count must be at least 2N + 2");
  }
  GaussLegendre gl(node_count);
  std::vector<double> binom = detail::binomial_row(n);
  double acc = 0.0;
  for (long r = 0; r <= n; ++r) {
    for (long s = 0; s <= n; ++s) {
      BayesJointMoments m = bayes_joint_moments(r, s, n, adotb, gl);
      acc += binom[static_cast<std::size_t>(r)] *
             binom[static_cast<std::size_t>(s)] * m.i1 * m.i1 / m.i0;
    }
  }
  double eps_a = 1.0 / 3.0 - 0.5 * acc;
  return 2.0 * eps_a;
}

inline double three_observable_error(Strategy s, long n) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  double nn = static_cast<double>(n);
  switch (s) {
    case Strategy::ThreeSepUnbiased: return 2.0 / nn;
    case Strategy::ThreeSepBiased: return 2.0 / (nn + 2.0);
    case Strategy::ThreeJoint: return 4.0 / (4.0 + nn);
    default: throw std::invalid_argument("not a three-observable strategy");
  }
}

// Angle below which the optimal joint measurement beats separate
// unbiased measurements: asin(2/3).
inline double crossover_angle() { return std::asin(2.0 / 3.0); }

// Unified dispatch over every strategy.
inline double analytic_error(const ErrorQuery& q) {
  switch (q.strategy) {
    case Strategy::BayesJoint:
      return bayes_joint_error(q.n, detail::adotb_of(q), q.node_count);
    case Strategy::ThreeSepUnbiased:
    case Strategy::ThreeSepBiased:
    case Strategy::ThreeJoint:
      return three_observable_error(q.strategy, q.n);
    default:
      return two_observable_error(q);
  }
}

}  // namespace spinest
