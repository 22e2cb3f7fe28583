#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "jitune/candidate_space.hpp"
#include "jitune/metric.hpp"
#include "jitune/tuning_key.hpp"

namespace jitune {

/// An executable realization of one candidate plus its recorded build cost.
struct CompiledVariant {
  ExecFn exec;
  double compile_cost = 0.0;
  int candidate_index = 0;
};

/// Public extension interface for variant backends.
///
/// Contract: make_exec(space, index) is deterministic — repeated builds of
/// the same (space, index) yield functionally identical executables. Build
/// cost is observable: callers construct variants through build_variant,
/// which times the factory call with the active metric source, so a backend
/// must do its real work inside make_exec rather than lazily on first call.
class VariantFactory {
public:
  virtual ~VariantFactory() = default;

  virtual ExecFn make_exec(const CandidateSpace& space, int index) = 0;
};

/// Builds candidate `index` and records the elapsed metric of the factory
/// call as the variant's compile cost. Exploration variants are used and
/// discarded by the caller; only the finalized winner is cached.
/// Factory errors propagate. Throws Error for an out-of-range index.
CompiledVariant build_variant(VariantFactory& factory,
                              const CandidateSpace& space, int index,
                              MetricSource& source);

/// Holds only finalized winners, one per key. Nothing is inserted during
/// exploration. Concurrent readers, exclusive insertion.
class InstantiationCache {
public:
  std::optional<CompiledVariant> get(const TuningKey& key) const;

  /// Throws DoubleFinalizeError if the key already holds a winner; erase or
  /// a tuner reset must come first.
  void put(const TuningKey& key, CompiledVariant variant);

  void erase(const TuningKey& key);

  std::size_t size() const;

private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<TuningKey, CompiledVariant, TuningKeyHash> entries_;
};

/// Wraps a plain callable as a factory: closure specialization. The build
/// cost recorded for these is the measured wall ticks of the call — cheap,
/// but it keeps the cost accounting uniform across backends.
class CallableFactory final : public VariantFactory {
public:
  using Maker = std::function<ExecFn(const CandidateSpace&, int)>;

  explicit CallableFactory(Maker maker) : maker_(std::move(maker)) {}

  ExecFn make_exec(const CandidateSpace& space, int index) override {
    return maker_(space, index);
  }

private:
  Maker maker_;
};

/// Factory with a real busy-wait build latency and busy-wait executors.
/// Costs are in host ticks and carry real measurement jitter; use
/// VirtualCostFactory for exact, noise-free simulation.
class BusyWaitFactory final : public VariantFactory {
public:
  BusyWaitFactory(Ticks build_latency, std::vector<Ticks> exec_costs)
      : build_latency_(build_latency), exec_costs_(std::move(exec_costs)) {}

  ExecFn make_exec(const CandidateSpace& space, int index) override;

private:
  Ticks build_latency_;
  std::vector<Ticks> exec_costs_;
};

/// Deterministic simulation factory: building advances a VirtualClock by the
/// build latency, and candidate i's executor advances it by exec_costs[i].
/// Measured through a VirtualTickSource on the same clock, compile and
/// execution samples equal the nominal costs exactly.
class VirtualCostFactory final : public VariantFactory {
public:
  VirtualCostFactory(std::shared_ptr<VirtualClock> clock, Ticks build_latency,
                     std::vector<Ticks> exec_costs)
      : clock_(std::move(clock)), build_latency_(build_latency),
        exec_costs_(std::move(exec_costs)) {}

  ExecFn make_exec(const CandidateSpace& space, int index) override;

  const std::shared_ptr<VirtualClock>& clock() const { return clock_; }

private:
  std::shared_ptr<VirtualClock> clock_;
  Ticks build_latency_;
  std::vector<Ticks> exec_costs_;
};

} // namespace jitune
