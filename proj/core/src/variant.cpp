#include "jitune/variant.hpp"

#include <mutex>
#include <string>

#include "jitune/errors.hpp"

namespace jitune {

CompiledVariant build_variant(VariantFactory& factory,
                              const CandidateSpace& space, int index,
                              MetricSource& source) {
  if (index < 0 || index >= space.size()) {
    throw Error("candidate index " + std::to_string(index) +
                " out of range for space of size " +
                std::to_string(space.size()));
  }
  const MetricSource::Token token = source.start();
  ExecFn exec = factory.make_exec(space, index);
  const MetricSample cost = source.stop(token);
  if (!exec) {
    throw FactoryError("factory produced an empty executable for candidate " +
                       std::to_string(index));
  }
  return CompiledVariant{std::move(exec), cost.value, index};
}

std::optional<CompiledVariant> InstantiationCache::get(
    const TuningKey& key) const {
  std::shared_lock lock(mutex_);
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    return std::nullopt;
  }
  return it->second;
}

void InstantiationCache::put(const TuningKey& key, CompiledVariant variant) {
  std::unique_lock lock(mutex_);
  const auto [it, inserted] = entries_.emplace(key, std::move(variant));
  if (!inserted) {
    throw DoubleFinalizeError("key (" + key.site_id + ", " +
                              key.problem_label +
                              ") already holds a finalized variant");
  }
}

void InstantiationCache::erase(const TuningKey& key) {
  std::unique_lock lock(mutex_);
  entries_.erase(key);
}

std::size_t InstantiationCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

ExecFn BusyWaitFactory::make_exec(const CandidateSpace& space, int index) {
  (void)space;
  busy_wait_ticks(build_latency_);
  const Ticks cost = exec_costs_.at(static_cast<std::size_t>(index));
  return [cost](void*) { busy_wait_ticks(cost); };
}

ExecFn VirtualCostFactory::make_exec(const CandidateSpace& space, int index) {
  (void)space;
  clock_->advance(build_latency_);
  const Ticks cost = exec_costs_.at(static_cast<std::size_t>(index));
  auto clock = clock_;
  return [clock, cost](void*) { clock->advance(cost); };
}

} // namespace jitune
