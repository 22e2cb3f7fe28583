#include "jitune/amortization.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "jitune/errors.hpp"

namespace jitune {

namespace {

void require_schedule_complete(const AmortizationInputs& inputs) {
  const int k = inputs.candidate_count();
  if (k < 1) {
    throw Error("amortization model needs at least one candidate cost");
  }
  if (inputs.total_calls < k + 1) {
    throw InsufficientCallsError(
        "model undefined for " + std::to_string(inputs.total_calls) +
        " calls with " + std::to_string(k) +
        " candidates; tuning has not finalized before call " +
        std::to_string(k + 1));
  }
}

double sum_costs(const std::vector<double>& costs) {
  return std::accumulate(costs.begin(), costs.end(), 0.0);
}

double min_cost(const std::vector<double>& costs) {
  return *std::min_element(costs.begin(), costs.end());
}

} // namespace

double autotuned_total(const AmortizationInputs& inputs) {
  require_schedule_complete(inputs);
  const double k = static_cast<double>(inputs.candidate_count());
  const double n = static_cast<double>(inputs.total_calls);
  return (k + 1.0) * inputs.compile_cost + sum_costs(inputs.exec_costs) +
         (n - k) * min_cost(inputs.exec_costs);
}

double net_gain(const AmortizationInputs& inputs) {
  require_schedule_complete(inputs);
  const double k = static_cast<double>(inputs.candidate_count());
  const double n = static_cast<double>(inputs.total_calls);
  const double gain =
      (n - k) * (inputs.baseline_cost - min_cost(inputs.exec_costs));
  const double overhead = (k + 1.0) * inputs.compile_cost +
                          sum_costs(inputs.exec_costs) -
                          k * inputs.baseline_cost;
  return gain - overhead;
}

std::optional<long long> break_even_calls(
    double compile_cost, const std::vector<double>& exec_costs,
    double baseline_cost) {
  if (exec_costs.empty()) {
    throw Error("amortization model needs at least one candidate cost");
  }
  const long long k = static_cast<long long>(exec_costs.size());
  AmortizationInputs inputs{compile_cost, exec_costs, baseline_cost, k + 1};

  // net_gain is affine in N with slope baseline_cost - min(exec_costs), so
  // when the slope is not positive only N = k+1 can qualify. Otherwise the
  // upward scan terminates.
  if (net_gain(inputs) >= 0.0) {
    return inputs.total_calls;
  }
  if (baseline_cost <= min_cost(exec_costs)) {
    return std::nullopt;
  }
  for (;;) {
    ++inputs.total_calls;
    if (net_gain(inputs) >= 0.0) {
      return inputs.total_calls;
    }
  }
}

RegimeReport regime_report(const AmortizationInputs& inputs,
                           const RegimeThresholds& thresholds) {
  const double k = static_cast<double>(inputs.candidate_count());
  const double n = static_cast<double>(inputs.total_calls);

  RegimeReport report;

  report.exploration_share.label = "exploration share k/N";
  report.exploration_share.threshold = thresholds.max_exploration_fraction;
  if (n <= 0.0) {
    report.exploration_share.value = std::numeric_limits<double>::infinity();
    report.exploration_share.favorable = false;
  } else {
    report.exploration_share.value = k / n;
    report.exploration_share.favorable =
        report.exploration_share.value <= thresholds.max_exploration_fraction;
  }

  report.slow_variant_ratio.label = "candidate cost sum over k*baseline";
  report.slow_variant_ratio.threshold = thresholds.max_slow_variant_ratio;
  const double baseline_mass = k * inputs.baseline_cost;
  if (baseline_mass <= 0.0) {
    report.slow_variant_ratio.value =
        sum_costs(inputs.exec_costs) > 0.0
            ? std::numeric_limits<double>::infinity()
            : 1.0;
  } else {
    report.slow_variant_ratio.value =
        sum_costs(inputs.exec_costs) / baseline_mass;
  }
  report.slow_variant_ratio.favorable =
      report.slow_variant_ratio.value <= thresholds.max_slow_variant_ratio;

  report.relative_gain.label = "relative gain (baseline - best) / baseline";
  report.relative_gain.threshold = thresholds.min_relative_gain;
  if (inputs.exec_costs.empty() || inputs.baseline_cost <= 0.0) {
    report.relative_gain.value = 0.0;
  } else {
    report.relative_gain.value =
        (inputs.baseline_cost - min_cost(inputs.exec_costs)) /
        inputs.baseline_cost;
  }
  report.relative_gain.favorable =
      report.relative_gain.value >= thresholds.min_relative_gain;

  return report;
}

} // namespace jitune
