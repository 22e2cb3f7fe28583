#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jitune/experiment.hpp"

namespace jitune {

// Per-iteration CSV: UTF-8, LF line endings, one header row, columns
//   run_id,call_index,phase,candidate,compile_ticks,exec_ticks,cumulative_ticks
// Parsing an emitted file reproduces the rows exactly.

void write_iteration_csv(std::ostream& out, std::span<const IterationRow> rows);
std::vector<IterationRow> read_iteration_csv(std::istream& in);

/// Histogram CSV: candidate_index,candidate_value,runs_chosen.
void write_histogram_csv(std::ostream& out, const ExperimentResult& result,
                         const CandidateSpace& space);

/// First call index at which the autotuned cumulative cost drops strictly
/// below the baseline cumulative cost, or nullopt when no crossing occurs
/// within the logged calls. Both logs must belong to a single run and be
/// ordered by call index.
std::optional<int> first_crossing(std::span<const IterationRow> autotuned,
                                  std::span<const IterationRow> baseline);

struct BaselineReport {
  int candidate_index = 0;
  long long candidate_value = 0;
  double total_ticks = 0.0;
  /// Crossing of autotuned run 0 against this baseline.
  std::optional<int> observed_break_even;
};

/// Run-level summary as a JSON document: configuration echo, per-run
/// outcomes with stability flags, the histogram with the modal choice, and
/// baseline crossings when baselines were run.
std::string summary_json(const ExperimentConfig& config,
                         const ExperimentResult& result,
                         const CandidateSpace& space,
                         std::span<const BaselineReport> baselines,
                         double min_stable_gap = 0.05);

std::string phase_name(PhaseKind phase);
PhaseKind phase_from_name(const std::string& name);

} // namespace jitune
