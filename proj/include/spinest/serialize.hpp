#pragma once

#include <nlohmann/json.hpp>

#include "spinest/montecarlo.hpp"
#include "spinest/povm.hpp"

namespace spinest {

inline void to_json(nlohmann::json& j, const ValidityReport& r) {
  j = nlohmann::json{{"positivity_residuals", r.positivity_residuals},
                     {"weight_sum_residual", r.weight_sum_residual},
                     {"vector_sum_norm", r.vector_sum_norm},
                     {"positivity_pass", r.positivity_pass},
                     {"completeness_pass", r.completeness_pass},
                     {"pass", r.pass}};
}

inline void to_json(nlohmann::json& j, const SteeringReport& r) {
  j = nlohmann::json{{"length", r.length},
                     {"admissible", r.admissible},
                     {"conditional_probs", r.conditional_probs}};
}

inline void to_json(nlohmann::json& j, const ErrorReport& r) {
  j = nlohmann::json{{"empirical_error", r.empirical_error},
                     {"standard_error", r.standard_error},
                     {"analytic_error", r.analytic_error},
                     {"out_of_range_fraction", r.out_of_range_fraction},
                     {"trials", r.trials},
                     {"seed", r.seed}};
  if (!std::isnan(r.trace_sq_mean)) j["trace_sq_mean"] = r.trace_sq_mean;
}

}  // namespace spinest
