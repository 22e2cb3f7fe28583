#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jitune/candidate_space.hpp"
#include "jitune/tuner.hpp"

namespace jitune {

enum class BenchKernel { MatmulOrder, MatmulBlock, SaxpyDemo };

/// How variants are produced for an experiment. Closure builds the real
/// kernels and measures host ticks; Simulated runs on a virtual clock with
/// exact nominal costs (build_ticks per build, exec_costs[i] per call).
struct FactorySpec {
  enum class Kind { Closure, Simulated };

  Kind kind = Kind::Closure;
  Ticks build_ticks = 0; // Simulated only
};

struct ExperimentConfig {
  BenchKernel kernel = BenchKernel::MatmulOrder;
  int n = 128;          // matrix dimension / vector length
  int iterations = 100; // autotuned calls per run
  int runs = 1;
  /// Defaults per kernel when empty: the three loop orders for MatmulOrder,
  /// blocks {4,8,...,512} for MatmulBlock, strips {16,64,256,1024} for
  /// SaxpyDemo.
  std::optional<CandidateSpace> candidates;
  FactorySpec factory;
  std::vector<Ticks> exec_costs; // Simulated only; one per candidate
  std::uint64_t seed = 1;
  TunerConfig tuner;
};

/// One row of the per-iteration log.
struct IterationRow {
  int run_id = 0;
  int call_index = 0; // 1-based within the run
  PhaseKind phase = PhaseKind::Exploring;
  int candidate = 0;
  double compile_ticks = 0.0;
  double exec_ticks = 0.0;
  double cumulative_ticks = 0.0; // running sum of compile+exec within the run

  bool operator==(const IterationRow& other) const = default;
};

struct RunSummary {
  int run_id = 0;
  std::optional<int> finalized_candidate; // absent when tuning never finished
  double total_ticks = 0.0;
  /// (second best − best) / best over this run's aggregates; 0 when fewer
  /// than two candidates were measured.
  double best_gap_ratio = 0.0;
};

struct ExperimentResult {
  std::vector<IterationRow> log; // all runs, in order
  std::map<int, int> histogram;  // finalized candidate index -> run count
  std::vector<RunSummary> runs;
  std::string metric_id;
};

/// Streams rows as they are produced, so partial logs survive a failing run.
using RowSink = std::function<void(const IterationRow&)>;

/// Runs the configured experiment: for each run, a fresh tuner sweeps the
/// candidates over `iterations` autotuned calls, and the finalized choice is
/// tallied into the histogram. Runs execute sequentially; parallel runs
/// would perturb the measurements. Kernel and factory errors propagate;
/// rows already produced have been delivered to `sink`.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const RowSink& sink = {});

/// Baseline for crossing analysis: the fixed candidate runs every iteration
/// with tuning disabled and no build cost charged, as an ahead-of-time pick
/// would. Rows carry run_id = candidate index.
std::vector<IterationRow> run_fixed_candidate(const ExperimentConfig& config,
                                              int candidate_index);

/// The candidate space an empty config.candidates resolves to.
CandidateSpace default_candidates(BenchKernel kernel);

const char* to_string(BenchKernel kernel);
const char* to_string(PhaseKind phase);

} // namespace jitune
