#include "dtmsig/report_json.hpp"

namespace dtmsig {

nlohmann::json to_json(const TestReport& report) {
    const auto& p = report.params;
    nlohmann::json j = {
        {"statistic", report.statistic},
        {"critical_value", report.critical_value},
        {"p_value", report.p_value},
        {"reject", report.reject},
        {"alpha", p.alpha},
        {"m", p.m},
        {"n", p.n},
        {"n_mc", p.n_mc},
        {"seed", p.seed},
        {"ks", {{"statistic", report.ks.statistic}, {"p_value", report.ks.p_value}}},
        {"warnings", report.warnings},
    };
    if (p.rho) j["rho"] = *p.rho;
    return j;
}

nlohmann::json to_json(const RateEstimate& rate) {
    return {{"reps", rate.reps},
            {"rejections", rate.rejections},
            {"rate", rate.rate},
            {"ci95", {rate.ci_low, rate.ci_high}}};
}

nlohmann::json to_json(const LevelPowerResult& result) {
    return {{"dtm", to_json(result.dtm)}, {"ks", to_json(result.ks)}, {"degenerate_runs", result.degenerate}};
}

}  // namespace dtmsig
