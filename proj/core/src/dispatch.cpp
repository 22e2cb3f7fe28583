#include "jitune/dispatch.hpp"

#include <memory>
#include <string>
#include <utility>

#include "jitune/errors.hpp"

namespace jitune {

IterationReport autotuned_invoke(TunerRegistry& registry,
                                 InstantiationCache& cache,
                                 VariantFactory& factory,
                                 std::string_view site_id,
                                 std::string_view problem_label,
                                 const CandidateSpace& space, void* payload,
                                 MetricSource& source,
                                 const TunerConfig& config) {
  const TunerHandle tuner =
      registry.lookup_or_create(site_id, problem_label, space, config);
  const Action action = tuner->begin_call();

  IterationReport report;
  report.candidate = action.candidate;
  // No other completion can interleave while this call is in flight, so the
  // index is exact.
  report.call_index = tuner->call_count() + 1;

  try {
    std::shared_ptr<CompiledVariant> variant;
    switch (action.kind) {
    case ActionKind::ExecuteCandidate:
      report.phase = PhaseKind::Exploring;
      if (action.must_compile) {
        variant = std::make_shared<CompiledVariant>(
            build_variant(factory, space, action.candidate, source));
        report.compile_ticks = variant->compile_cost;
        // Held only while this candidate's replicates run; discarded on
        // advance, never cached.
        tuner->set_exploration_attachment(variant);
      } else {
        variant = std::static_pointer_cast<CompiledVariant>(
            tuner->exploration_attachment());
        if (!variant) {
          variant = std::make_shared<CompiledVariant>(
              build_variant(factory, space, action.candidate, source));
          report.compile_ticks = variant->compile_cost;
          tuner->set_exploration_attachment(variant);
        }
      }
      break;
    case ActionKind::CompileBestAndExecute:
      report.phase = PhaseKind::Finalizing;
      variant = std::make_shared<CompiledVariant>(
          build_variant(factory, space, action.candidate, source));
      report.compile_ticks = variant->compile_cost;
      break;
    case ActionKind::ExecuteTuned: {
      report.phase = PhaseKind::Tuned;
      const TuningKey key{std::string(site_id), std::string(problem_label)};
      if (auto cached = cache.get(key)) {
        variant = std::make_shared<CompiledVariant>(std::move(*cached));
      } else {
        // Entry evicted out from under a tuned state: rebuild the winner and
        // restore the cache.
        variant = std::make_shared<CompiledVariant>(
            build_variant(factory, space, action.candidate, source));
        report.compile_ticks = variant->compile_cost;
        cache.put(key, *variant);
      }
      break;
    }
    }

    const MetricSample sample = measure(variant->exec, payload, source);
    report.exec_ticks = sample.value;
    tuner->complete_call(action, sample);

    if (action.kind == ActionKind::CompileBestAndExecute) {
      cache.put(tuner->key(), std::move(*variant));
    }
  } catch (...) {
    tuner->abort_call(action);
    throw;
  }
  return report;
}

} // namespace jitune
