#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "spinest/analytic.hpp"
#include "spinest/bloch.hpp"
#include "spinest/estimators.hpp"
#include "spinest/povm.hpp"
#include "spinest/rng.hpp"

namespace spinest {

struct TrialPlan {
  Strategy strategy = Strategy::SepUnbiased;
  long n = 1;  // copies per observable
  double eta = std::numeric_limits<double>::quiet_NaN();
  double adotb = std::numeric_limits<double>::quiet_NaN();
  long n1 = -1;  // split strategies only
  long trials = 1;
  std::uint64_t master_seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct ErrorReport {
  double empirical_error = 0.0;
  double standard_error = 0.0;
  double analytic_error = 0.0;
  double out_of_range_fraction = 0.0;
  // mean squared trace distance between true and estimated Bloch vector;
  // NaN for two-observable strategies
  double trace_sq_mean = std::numeric_limits<double>::quiet_NaN();
  long trials = 0;
  std::uint64_t seed = 0;
};

// i.i.d. categorical draws from the POM's outcome distribution; returns
// the spin-up tally per labeled axis.
inline std::vector<OutcomeCounts> simulate_counts(const Povm& povm,
                                                  const BlochVector& state,
                                                  long copies,
                                                  RngStream& rng) {
  if (copies < 1) throw std::invalid_argument("copies must be >= 1");
  std::vector<double> p = outcome_distribution(povm, state);
  std::vector<OutcomeCounts> counts(povm.axis_count, OutcomeCounts{0, copies});
  for (long c = 0; c < copies; ++c) {
    double u = rng.uniform();
    std::size_t pick = p.size() - 1;
    double cdf = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      cdf += p[i];
      if (u < cdf) {
        pick = i;
        break;
      }
    }
    for (std::size_t ax = 0; ax < povm.axis_count; ++ax) {
      if (povm.labels[pick][ax] == +1) ++counts[ax].up;
    }
  }
  return counts;
}

namespace detail {

// Bernoulli tally for a projective measurement along `direction`.
inline OutcomeCounts projective_tally(const BlochVector& direction,
                                      const BlochVector& state, long copies,
                                      RngStream& rng) {
  double p_up = 0.5 * (1.0 + direction.dot(state));
  OutcomeCounts c{0, copies};
  for (long i = 0; i < copies; ++i) {
    if (rng.uniform() < p_up) ++c.up;
  }
  return c;
}

struct TrialOutcome {
  double squared_error = 0.0;  // summed over observables
  double trace_sq = std::numeric_limits<double>::quiet_NaN();
  bool out_of_range = false;
};

// Everything precomputable once per plan: directions, POM, outcome
// probabilities are state-dependent so only structure is cached here.
struct StrategyContext {
  TrialPlan plan;
  BlochVector a{0.0, 0.0, 1.0};
  BlochVector b{0.0, 0.0, 1.0};
  double alpha = 1.0;              // joint strategies
  Povm joint;                      // joint strategies
  long joint_copies = 0;           // copies fed to the joint POM
  double gain = 1.0;               // joint-biased / three-joint
  std::vector<std::vector<double>> bayes_table;  // bayes-joint: est[r][s]
  double adotb = 0.0;

  explicit StrategyContext(const TrialPlan& p) : plan(p) {
    if (p.n < 1) throw std::invalid_argument("N must be >= 1");
    if (p.trials < 1) throw std::invalid_argument("trials must be >= 1");
    Strategy s = p.strategy;
    double eta = std::isnan(p.eta) ? std::acos(p.adotb) : p.eta;
    if (std::isnan(eta)) {
      if (uses_angle(s)) throw std::invalid_argument("strategy requires eta or a.b");
      eta = 0.5 * M_PI;  // irrelevant for angle-free strategies
    }
    b = {std::sin(eta), 0.0, std::cos(eta)};
    adotb = a.dot(b);
    if (s == Strategy::JointUnbiased || s == Strategy::JointBiased) {
      alpha = optimal_sharpness_pair(angle_between(a, b)).alpha;
      joint = joint_povm_two(a, b, alpha, alpha);
      joint_copies = 2 * p.n;
      gain = biased_joint_gain(joint_copies, alpha);
    } else if (s == Strategy::ThreeJoint) {
      alpha = 1.0 / std::sqrt(3.0);
      joint = joint_povm_three();
      // the quoted closed form corresponds to 2N copies of the
      // eight-outcome measurement; see the project notes
      joint_copies = 2 * p.n;
      gain = biased_joint_gain(joint_copies, alpha);
    } else if (s == Strategy::BayesJoint) {
      std::size_t nodes = static_cast<std::size_t>(2 * p.n + 8);
      GaussLegendre gl(nodes);
      bayes_table.assign(static_cast<std::size_t>(p.n) + 1,
                         std::vector<double>(static_cast<std::size_t>(p.n) + 1));
      for (long r = 0; r <= p.n; ++r) {
        for (long q = 0; q <= p.n; ++q) {
          BayesJointMoments m = bayes_joint_moments(r, q, p.n, adotb, gl);
          bayes_table[static_cast<std::size_t>(r)][static_cast<std::size_t>(q)] =
              m.i1 / m.i0;
        }
      }
    } else if (s == Strategy::SepUnbiasedSplit) {
      if (p.n1 < 1 || p.n1 > 2 * p.n - 1) {
        throw std::invalid_argument("split N1 must lie in [1, 2N-1]");
      }
    }
  }

  TrialOutcome run_one(RngStream& rng) const {
    BlochVector state = sample_pure_state(rng);
    switch (plan.strategy) {
      case Strategy::SepUnbiased:
      case Strategy::SepBiased:
      case Strategy::BayesSingle: {
        OutcomeCounts ca = projective_tally(a, state, plan.n, rng);
        OutcomeCounts cb = projective_tally(b, state, plan.n, rng);
        bool biased = plan.strategy != Strategy::SepUnbiased;
        double ea = biased ? shrinkage_estimate(ca) : mean_estimate(ca);
        double eb = biased ? shrinkage_estimate(cb) : mean_estimate(cb);
        return two_axis_outcome(state, ea, eb);
      }
      case Strategy::SepUnbiasedSplit: {
        OutcomeCounts ca = projective_tally(a, state, plan.n1, rng);
        OutcomeCounts cb = projective_tally(b, state, 2 * plan.n - plan.n1, rng);
        return two_axis_outcome(state, mean_estimate(ca), mean_estimate(cb));
      }
      case Strategy::JointUnbiased:
      case Strategy::JointBiased: {
        std::vector<OutcomeCounts> c =
            simulate_counts(joint, state, joint_copies, rng);
        double ea = joint_rescaled_estimate(c[0], alpha);
        double eb = joint_rescaled_estimate(c[1], alpha);
        if (plan.strategy == Strategy::JointBiased) {
          ea *= gain;
          eb *= gain;
        }
        return two_axis_outcome(state, ea, eb);
      }
      case Strategy::CrossWeighted: {
        OutcomeCounts ca = projective_tally(a, state, plan.n, rng);
        OutcomeCounts cb = projective_tally(b, state, plan.n, rng);
        auto [ea, eb] = cross_weighted_estimate(ca, cb, adotb);
        return two_axis_outcome(state, ea, eb);
      }
      case Strategy::BayesJoint: {
        // The reference error expression conditions on <A> alone, with
        // the other observable's outcomes drawn per copy from the
        // circle-averaged conditional (1 + (a.b)<A>)/2, and doubles the
        // single-observable error by symmetry. Simulate exactly that
        // experiment; keeping all copies in one common state instead
        // correlates the B outcomes and yields a larger error.
        double u = a.dot(state);
        OutcomeCounts ca{0, plan.n}, cb{0, plan.n};
        double pa = 0.5 * (1.0 + u);
        double pb = 0.5 * (1.0 + adotb * u);
        for (long i = 0; i < plan.n; ++i) {
          if (rng.uniform() < pa) ++ca.up;
          if (rng.uniform() < pb) ++cb.up;
        }
        double ea = bayes_table[static_cast<std::size_t>(ca.up)]
                               [static_cast<std::size_t>(cb.up)];
        TrialOutcome out;
        double d = u - ea;
        out.squared_error = 2.0 * d * d;
        out.out_of_range = std::abs(ea) > 1.0;
        return out;
      }
      case Strategy::ThreeSepUnbiased:
      case Strategy::ThreeSepBiased: {
        bool biased = plan.strategy == Strategy::ThreeSepBiased;
        BlochVector est;
        const BlochVector axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        double* comps[3] = {&est.x, &est.y, &est.z};
        for (int ax = 0; ax < 3; ++ax) {
          OutcomeCounts c = projective_tally(axes[ax], state, plan.n, rng);
          *comps[ax] = biased ? shrinkage_estimate(c) : mean_estimate(c);
        }
        return three_axis_outcome(state, est);
      }
      case Strategy::ThreeJoint: {
        std::vector<OutcomeCounts> c =
            simulate_counts(joint, state, joint_copies, rng);
        BlochVector est{gain * joint_rescaled_estimate(c[0], alpha),
                        gain * joint_rescaled_estimate(c[1], alpha),
                        gain * joint_rescaled_estimate(c[2], alpha)};
        return three_axis_outcome(state, est);
      }
    }
    throw std::logic_error("unreachable strategy");
  }

 private:
  TrialOutcome two_axis_outcome(const BlochVector& state, double ea,
                                double eb) const {
    TrialOutcome out;
    double da = a.dot(state) - ea;
    double db = b.dot(state) - eb;
    out.squared_error = da * da + db * db;
    out.out_of_range = std::abs(ea) > 1.0 || std::abs(eb) > 1.0;
    return out;
  }

  TrialOutcome three_axis_outcome(const BlochVector& state,
                                  const BlochVector& est) const {
    TrialOutcome out;
    double dx = state.x - est.x;
    double dy = state.y - est.y;
    double dz = state.z - est.z;
    out.squared_error = dx * dx + dy * dy + dz * dz;
    double d = trace_distance(state, est);
    out.trace_sq = d * d;
    out.out_of_range = est.norm() > 1.0;
    return out;
  }
};

}  // namespace detail

// Seeded Monte Carlo estimate of a strategy's total error. Trials run on
// per-trial substreams and are reduced in fixed chunk order, so the
// report is bit-identical for a given plan at any thread count.
inline ErrorReport run_trials(const TrialPlan& plan) {
  detail::StrategyContext ctx(plan);

  constexpr long kChunk = 8192;
  const long n_chunks = (plan.trials + kChunk - 1) / kChunk;
  struct Partial {
    double sum = 0.0;
    double sum_sq = 0.0;
    double trace_sum = 0.0;
    long oor = 0;
  };
  std::vector<Partial> partials(static_cast<std::size_t>(n_chunks));

  auto work_chunk = [&](long chunk) {
    Partial p;
    long lo = chunk * kChunk;
    long hi = std::min(plan.trials, lo + kChunk);
    for (long t = lo; t < hi; ++t) {
      RngStream rng = derive_substream(plan.master_seed,
                                       static_cast<std::uint64_t>(t));
      detail::TrialOutcome out = ctx.run_one(rng);
      p.sum += out.squared_error;
      p.sum_sq += out.squared_error * out.squared_error;
      if (!std::isnan(out.trace_sq)) p.trace_sum += out.trace_sq;
      if (out.out_of_range) ++p.oor;
    }
    partials[static_cast<std::size_t>(chunk)] = p;
  };

  unsigned threads = plan.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1 || n_chunks == 1) {
    for (long c = 0; c < n_chunks; ++c) work_chunk(c);
  } else {
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (long c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) {
          work_chunk(c);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  double sum = 0.0, sum_sq = 0.0, trace_sum = 0.0;
  long oor = 0;
  for (const Partial& p : partials) {  // fixed reduction order
    sum += p.sum;
    sum_sq += p.sum_sq;
    trace_sum += p.trace_sum;
    oor += p.oor;
  }

  double nt = static_cast<double>(plan.trials);
  ErrorReport rep;
  rep.trials = plan.trials;
  rep.seed = plan.master_seed;
  rep.empirical_error = sum / nt;
  double var = (sum_sq / nt - rep.empirical_error * rep.empirical_error);
  if (plan.trials > 1) {
    var *= nt / (nt - 1.0);
    rep.standard_error = std::sqrt(std::max(0.0, var) / nt);
  }
  rep.out_of_range_fraction = static_cast<double>(oor) / nt;
  if (is_three_observable(plan.strategy)) rep.trace_sq_mean = trace_sum / nt;

  ErrorQuery q;
  q.strategy = plan.strategy;
  q.n = plan.n;
  q.eta = plan.eta;
  q.adotb = plan.adotb;
  q.n1 = plan.n1;
  rep.analytic_error = analytic_error(q);
  return rep;
}

}  // namespace spinest
