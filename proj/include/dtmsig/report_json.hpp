#pragma once

#include "json.hpp"

#include "dtmsig/isomorphism_test.hpp"

namespace dtmsig {

/// {statistic, critical_value, p_value, reject, alpha, m, n, n_mc, seed, ks: {statistic, p_value}, warnings[]}
nlohmann::json to_json(const TestReport& report);
nlohmann::json to_json(const RateEstimate& rate);
nlohmann::json to_json(const LevelPowerResult& result);

}  // namespace dtmsig
