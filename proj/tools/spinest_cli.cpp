// Command-line front end: error sweeps over strategies, POM validation,
// figure-data presets, and expectation-value estimation from counts.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "spinest/analytic.hpp"
#include "spinest/montecarlo.hpp"
#include "spinest/povm.hpp"
#include "spinest/serialize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIo = 4;

[[noreturn]] void fail(int code, const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  std::exit(code);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct IntRange {
  long lo = 1, hi = 1;
};

IntRange parse_int_range(const std::string& s) {
  auto pos = s.find("..");
  IntRange r;
  try {
    if (pos == std::string::npos) {
      r.lo = r.hi = std::stol(s);
    } else {
      r.lo = std::stol(s.substr(0, pos));
      r.hi = std::stol(s.substr(pos + 2));
    }
  } catch (const std::exception&) {
    fail(kExitUsage, "bad integer range '" + s + "'");
  }
  if (r.lo < 1 || r.hi < r.lo) fail(kExitUsage, "bad integer range '" + s + "'");
  return r;
}

std::vector<double> parse_grid(const std::string& s) {
  // start:stop:step, inclusive of stop up to rounding
  double start, stop, step;
  char c1, c2;
  std::istringstream in(s);
  if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' ||
      step <= 0.0) {
    fail(kExitUsage, "bad grid '" + s + "' (expected start:stop:step)");
  }
  std::vector<double> g;
  for (long i = 0;; ++i) {
    double v = start + step * static_cast<double>(i);
    if (v > stop + 0.5 * step * 1e-9 + 1e-15) break;
    g.push_back(v);
  }
  if (g.empty()) fail(kExitUsage, "empty grid '" + s + "'");
  return g;
}

spinest::OutcomeCounts parse_counts(const std::string& s) {
  auto pos = s.find(',');
  if (pos == std::string::npos) fail(kExitUsage, "counts must be 'up,down'");
  try {
    long up = std::stol(s.substr(0, pos));
    long down = std::stol(s.substr(pos + 1));
    if (up < 0 || down < 0) throw std::invalid_argument("negative");
    return {up, up + down};
  } catch (const std::exception&) {
    fail(kExitUsage, "counts must be nonnegative integers 'up,down'");
  }
}

struct SweepConfig {
  std::vector<spinest::Strategy> strategies;
  IntRange n_range;
  std::vector<double> eta_grid;
  bool grid_is_adotb = false;
  long n1 = -1;
  long trials = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out_path;
};

void run_sweep(const SweepConfig& cfg) {
  std::ofstream out(cfg.out_path);
  if (!out) fail(kExitIo, "cannot open output file '" + cfg.out_path + "'");
  out << "strategy,N,eta,analytic_error,mc_error,mc_stderr,trials,seed\n";
  for (spinest::Strategy s : cfg.strategies) {
    for (long n = cfg.n_range.lo; n <= cfg.n_range.hi; ++n) {
      for (double g : cfg.eta_grid) {
        double eta = cfg.grid_is_adotb ? std::acos(g) : g;
        spinest::ErrorQuery q;
        q.strategy = s;
        q.n = n;
        q.eta = eta;
        q.n1 = cfg.n1 >= 0 ? cfg.n1 : n;
        double analytic = 0.0;
        try {
          analytic = spinest::analytic_error(q);
        } catch (const std::exception& e) {
          fail(kExitUsage, std::string("invalid sweep point: ") + e.what());
        }
        out << spinest::to_string(s) << ',' << n << ',' << fmt(eta) << ','
            << fmt(analytic) << ',';
        if (cfg.trials > 0) {
          spinest::TrialPlan plan;
          plan.strategy = s;
          plan.n = n;
          plan.eta = eta;
          plan.n1 = q.n1;
          plan.trials = cfg.trials;
          plan.master_seed = cfg.seed;
          plan.threads = cfg.threads;
          spinest::ErrorReport rep = spinest::run_trials(plan);
          out << fmt(rep.empirical_error) << ',' << fmt(rep.standard_error);
        } else {
          out << ',';
        }
        out << ',' << cfg.trials << ',' << cfg.seed << '\n';
      }
    }
  }
  if (!out) fail(kExitIo, "write failed for '" + cfg.out_path + "'");
}

std::vector<spinest::Strategy> parse_strategies(const std::string& csv) {
  std::vector<spinest::Strategy> out;
  std::istringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    auto s = spinest::strategy_from_string(tok);
    if (!s) fail(kExitUsage, "unknown strategy '" + tok + "'");
    out.push_back(*s);
  }
  if (out.empty()) fail(kExitUsage, "no strategies given");
  return out;
}

int cmd_validate(double eta, bool three, std::optional<double> alpha,
                 std::optional<double> beta) {
  using namespace spinest;
  nlohmann::json j;
  bool ok = true;
  if (three) {
    Povm p = joint_povm_three();
    ValidityReport rep = validate_povm(p);
    double g = 1.0 / std::sqrt(3.0);
    SteeringReport steer = steering_bound_check({g, g, g});
    j["report"] = rep;
    j["steering"] = steer;
    j["sharpness"] = {g, g, g};
    ok = rep.pass && steer.admissible;
  } else {
    if (!(eta >= 0.0 && eta <= M_PI)) fail(kExitUsage, "eta must lie in [0, pi]");
    BlochVector a{0, 0, 1};
    BlochVector b{std::sin(eta), 0, std::cos(eta)};
    double al = alpha.value_or(optimal_sharpness_pair(eta).alpha);
    double be = beta.value_or(al);
    double residual = saturation_residual(a, b, al, be);
    j["eta"] = eta;
    j["alpha"] = al;
    j["beta"] = be;
    j["saturation_residual"] = residual;
    if (residual < -kStructuralTol) {
      j["pass"] = false;
      ok = false;
    } else {
      Povm p = joint_povm_two(a, b, al, be);
      ValidityReport rep = validate_povm(p);
      j["report"] = rep;
      j["marginal_sharpness"] = {extract_marginal_sharpness(p, 0, a),
                                 extract_marginal_sharpness(p, 1, b)};
      ok = rep.pass;
    }
  }
  std::cout << j.dump(2) << "\n";
  return ok ? kExitOk : kExitValidation;
}

int cmd_estimate(const std::string& counts_a_str,
                 const std::string& counts_b_str, double adotb, double alpha,
                 const std::string& method) {
  using namespace spinest;
  OutcomeCounts ca = parse_counts(counts_a_str);
  std::optional<OutcomeCounts> cb;
  if (!counts_b_str.empty()) cb = parse_counts(counts_b_str);

  nlohmann::json j;
  j["method"] = method;
  try {
    if (method == "mean" || method == "shrinkage" || method == "bayes-single") {
      auto est = [&](const OutcomeCounts& c) {
        return method == "mean" ? mean_estimate(c) : shrinkage_estimate(c);
      };
      j["est_a"] = est(ca);
      if (cb) j["est_b"] = est(*cb);
      ErrorQuery q;
      q.strategy = method == "mean" ? Strategy::SepUnbiased : Strategy::SepBiased;
      q.n = ca.total;
      j["analytic_error"] = two_observable_error(q);
    } else if (method == "joint-rescaled" || method == "joint-biased") {
      double est = method == "joint-rescaled"
                       ? joint_rescaled_estimate(ca, alpha)
                       : joint_biased_estimate(ca, alpha);
      j["est_a"] = est;
      if (ca.total % 2 == 0 && alpha <= 1.0) {
        ErrorQuery q;
        q.strategy = method == "joint-rescaled" ? Strategy::JointUnbiased
                                                : Strategy::JointBiased;
        q.n = ca.total / 2;
        q.eta = std::asin(std::clamp(1.0 / (alpha * alpha) - 1.0, 0.0, 1.0));
        j["analytic_error"] = two_observable_error(q);
      }
    } else if (method == "cross-weighted") {
      if (!cb) fail(kExitUsage, "cross-weighted needs --counts-b");
      auto [ea, eb] = cross_weighted_estimate(ca, *cb, adotb);
      j["est_a"] = ea;
      j["est_b"] = eb;
      ErrorQuery q;
      q.strategy = Strategy::CrossWeighted;
      q.n = ca.total;
      q.adotb = adotb;
      j["analytic_error"] = two_observable_error(q);
    } else if (method == "bayes-joint") {
      if (!cb) fail(kExitUsage, "bayes-joint needs --counts-b");
      if (ca.total != cb->total) {
        fail(kExitUsage, "bayes-joint needs equal shot counts per axis");
      }
      long n = ca.total;
      std::size_t nodes = static_cast<std::size_t>(2 * n + 8);
      j["est_a"] = bayes_joint_estimate(ca.up, cb->up, n, adotb, nodes);
      j["est_b"] = bayes_joint_estimate(cb->up, ca.up, n, adotb, nodes);
      j["analytic_error"] = bayes_joint_error(n, adotb);
    } else {
      fail(kExitUsage, "unknown method '" + method + "'");
    }
  } catch (const std::exception& e) {
    fail(kExitUsage, e.what());
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-1/2 expectation-value estimation strategies: analytic "
               "errors, POM validation and seeded Monte Carlo"};
  app.require_subcommand(1);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Emit a CSV of errors over a strategy/N/angle grid");
  std::string strategies_csv, n_spec = "1..10", eta_spec, adotb_spec, out_path,
              config_path;
  long trials = 0, n1 = -1;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  auto* opt_strat = sweep->add_option("--strategies", strategies_csv, "comma-separated strategy ids");
  auto* opt_n = sweep->add_option("--n", n_spec, "N range, lo..hi");
  auto* opt_eta = sweep->add_option("--eta", eta_spec, "eta grid, start:stop:step (radians)");
  auto* opt_adotb = sweep->add_option("--adotb", adotb_spec, "a.b grid, start:stop:step");
  auto* opt_trials = sweep->add_option("--trials", trials, "Monte Carlo trials per row (0 = analytic only)");
  auto* opt_seed = sweep->add_option("--seed", seed, "master seed");
  auto* opt_out = sweep->add_option("--out", out_path, "output CSV path");
  sweep->add_option("--n1", n1, "copies of the first observable (split strategy)");
  sweep->add_option("--threads", threads, "worker threads (0 = auto)");
  sweep->add_option("--config", config_path, "JSON config file; flags override");

  // validate-povm
  auto* validate = app.add_subcommand("validate-povm", "Construct and validate a joint POM");
  double v_eta = 0.0;
  bool v_three = false;
  std::optional<double> v_alpha, v_beta;
  auto* opt_veta = validate->add_option("--eta", v_eta, "angle between a and b (radians)");
  validate->add_flag("--three", v_three, "validate the three-observable joint POM");
  double tmp_alpha = 0.0, tmp_beta = 0.0;
  auto* opt_valpha = validate->add_option("--alpha", tmp_alpha, "override sharpness alpha");
  auto* opt_vbeta = validate->add_option("--beta", tmp_beta, "override sharpness beta");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Estimate expectation values from counts");
  std::string counts_a, counts_b, method;
  double e_adotb = 0.0, e_alpha = 1.0;
  estimate->add_option("--counts-a", counts_a, "up,down for observable A")->required();
  estimate->add_option("--counts-b", counts_b, "up,down for observable B");
  estimate->add_option("--adotb", e_adotb, "inner product a.b");
  estimate->add_option("--alpha", e_alpha, "sharpness (joint methods)");
  estimate->add_option("--method", method, "estimator kind")->required();

  // figure
  auto* figure = app.add_subcommand("figure", "Emit the dataset behind one of the three comparison figures");
  int fig_id = 0;
  std::string fig_out;
  figure->add_option("--id", fig_id, "figure id, 1..3")->required();
  figure->add_option("--out", fig_out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (sweep->parsed()) {
      SweepConfig cfg;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) fail(kExitIo, "cannot read config '" + config_path + "'");
        nlohmann::json j;
        try {
          in >> j;
        } catch (const std::exception& e) {
          fail(kExitUsage, std::string("bad config JSON: ") + e.what());
        }
        // flags override file values
        if (!opt_strat->count() && j.contains("strategies"))
          strategies_csv = j["strategies"].get<std::string>();
        if (!opt_n->count() && j.contains("n")) n_spec = j["n"].get<std::string>();
        if (!opt_eta->count() && j.contains("eta")) eta_spec = j["eta"].get<std::string>();
        if (!opt_adotb->count() && j.contains("adotb")) adotb_spec = j["adotb"].get<std::string>();
        if (!opt_trials->count() && j.contains("trials")) trials = j["trials"].get<long>();
        if (!opt_seed->count() && j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
        if (!opt_out->count() && j.contains("out")) out_path = j["out"].get<std::string>();
      }
      if (strategies_csv.empty()) fail(kExitUsage, "--strategies is required");
      if (out_path.empty()) fail(kExitUsage, "--out is required");
      if (eta_spec.empty() == adotb_spec.empty()) {
        fail(kExitUsage, "give exactly one of --eta or --adotb");
      }
      cfg.strategies = parse_strategies(strategies_csv);
      cfg.n_range = parse_int_range(n_spec);
      cfg.grid_is_adotb = eta_spec.empty();
      cfg.eta_grid = parse_grid(cfg.grid_is_adotb ? adotb_spec : eta_spec);
      cfg.trials = trials;
      cfg.seed = seed;
      cfg.n1 = n1;
      cfg.threads = threads;
      cfg.out_path = out_path;
      run_sweep(cfg);
      return kExitOk;
    }
    if (validate->parsed()) {
      if (opt_valpha->count()) v_alpha = tmp_alpha;
      if (opt_vbeta->count()) v_beta = tmp_beta;
      if (!v_three && !opt_veta->count()) {
        fail(kExitUsage, "give --eta or --three");
      }
      return cmd_validate(v_eta, v_three, v_alpha, v_beta);
    }
    if (estimate->parsed()) {
      return cmd_estimate(counts_a, counts_b, e_adotb, e_alpha, method);
    }
    if (figure->parsed()) {
      SweepConfig cfg;
      switch (fig_id) {
        case 1:
          cfg.strategies = {spinest::Strategy::SepUnbiased,
                            spinest::Strategy::JointUnbiased};
          break;
        case 2:
          cfg.strategies = {spinest::Strategy::SepBiased,
                            spinest::Strategy::JointBiased};
          break;
        case 3:
          cfg.strategies = {spinest::Strategy::BayesJoint,
                            spinest::Strategy::JointBiased};
          break;
        default:
          fail(kExitUsage, "figure id must be 1, 2 or 3");
      }
      cfg.n_range = {1, 30};
      std::ostringstream grid;
      grid << "0:" << fmt(M_PI / 2) << ":" << fmt(M_PI / 60);
      cfg.eta_grid = parse_grid(grid.str());
      cfg.out_path = fig_out;
      run_sweep(cfg);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    fail(kExitValidation, e.what());
  }
  return kExitUsage;
}
