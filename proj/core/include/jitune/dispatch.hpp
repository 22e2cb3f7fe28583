#pragma once

#include <cstdint>
#include <string_view>

#include "jitune/tuner.hpp"
#include "jitune/variant.hpp"

namespace jitune {

/// What one autotuned call did.
struct IterationReport {
  std::uint64_t call_index = 0; // 1-based per key
  PhaseKind phase = PhaseKind::Exploring;
  int candidate = 0;
  double compile_ticks = 0.0; // 0 when no build happened
  double exec_ticks = 0.0;
};

/// Runs one call of a tunable function end to end.
///
/// Orchestrates lookup_or_create, begin_call, a build when the action
/// requires one, the measured execution, complete_call, and — on the
/// finalization call — inserting the winner into the cache. The kernel's
/// output lives in the payload, which variants may mutate freely.
///
/// The first k·replicates calls each build and measure one candidate (one
/// build per candidate, on its first replicate); the next call rebuilds the
/// winner and caches it; every call after that runs the cached winner with
/// no build. Factory and kernel errors propagate, and the tuning state is
/// rolled back to its pre-call phase so the call can be retried.
IterationReport autotuned_invoke(TunerRegistry& registry,
                                 InstantiationCache& cache,
                                 VariantFactory& factory,
                                 std::string_view site_id,
                                 std::string_view problem_label,
                                 const CandidateSpace& space, void* payload,
                                 MetricSource& source,
                                 const TunerConfig& config = {});

} // namespace jitune
