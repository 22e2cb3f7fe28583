#pragma once

#include <optional>
#include <string>
#include <vector>

namespace jitune {

/// Inputs of the compile-overhead amortization model.
///
/// The model assumes an equal build cost per compilation and scores a run of
/// `total_calls` calls that tunes over k = exec_costs.size() candidates.
/// The fastest candidate cost is taken as min(exec_costs) regardless of
/// input order; `baseline_cost` is the per-call cost of the variant a
/// programmer would have picked without tuning (it need not be one of the
/// candidates).
struct AmortizationInputs {
  double compile_cost = 0.0;      // C, per build
  std::vector<double> exec_costs; // E_0..E_{k-1}, one per candidate
  double baseline_cost = 0.0;     // E_p
  long long total_calls = 0;      // N

  int candidate_count() const { return static_cast<int>(exec_costs.size()); }
};

/// Total cost of an autotuned run of N calls:
///
///   (k+1)·C + sum(E_i) + (N−k)·E_min
///
/// i.e. k exploration calls at C+E_i each, one finalization call at C+E_min
/// (the winner is rebuilt and executed), and N−k−1 steady-state calls at
/// E_min. An alternative bookkeeping that does not charge the finalization
/// run, (k+1)·C + sum(E_i) + (N−k−1)·E_min, is reported by the CLI for
/// comparison; this closed form is the one consistent with net_gain below.
///
/// Throws InsufficientCallsError when N < k+1 (the schedule has not
/// finalized; sum raw per-call costs instead).
double autotuned_total(const AmortizationInputs& inputs);

/// Signed profitability of tuning versus always running the baseline pick:
///
///   (N−k)·(E_p−E_min) − [(k+1)·C + sum(E_i) − k·E_p]
///
/// which equals N·E_p − autotuned_total(inputs); tuning pays off iff the
/// result is ≥ 0. Throws InsufficientCallsError when N < k+1.
double net_gain(const AmortizationInputs& inputs);

/// Smallest N ≥ k+1 with net_gain ≥ 0, or nullopt when no finite call count
/// can repay the tuning overhead (the baseline is already at least as fast
/// as the best candidate and the overhead is positive).
std::optional<long long> break_even_calls(double compile_cost,
                                          const std::vector<double>& exec_costs,
                                          double baseline_cost);

struct RegimeThresholds {
  /// (a) exploration must be short: k/N at most this fraction.
  double max_exploration_fraction = 0.1;
  /// (b) few slow variants: sum(E_i) at most this multiple of k·E_p.
  double max_slow_variant_ratio = 2.0;
  /// (c) significant gain: (E_p−E_min)/E_p at least this fraction.
  double min_relative_gain = 0.05;
};

struct RegimeIndicator {
  std::string label;
  double value = 0.0;
  double threshold = 0.0;
  bool favorable = false;
};

/// The three conditions under which tuning pays off, each as a labeled
/// indicator: (a) exploration short relative to the run, (b) the candidate
/// set not dominated by slow variants, (c) a significant gap between the
/// baseline and the fastest candidate.
struct RegimeReport {
  RegimeIndicator exploration_share;  // (a) k/N
  RegimeIndicator slow_variant_ratio; // (b) sum(E_i) / (k·E_p)
  RegimeIndicator relative_gain;      // (c) (E_p−E_min)/E_p

  bool all_favorable() const {
    return exploration_share.favorable && slow_variant_ratio.favorable &&
           relative_gain.favorable;
  }
};

RegimeReport regime_report(const AmortizationInputs& inputs,
                           const RegimeThresholds& thresholds = {});

} // namespace jitune
