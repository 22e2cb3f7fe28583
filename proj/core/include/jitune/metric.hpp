#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "jitune/ticks.hpp"

namespace jitune {

/// One scored observation. Values are compared only within the same
/// metric_id; lower is better.
struct MetricSample {
  double value = 0.0;
  std::string metric_id = "ticks";
};

/// Pluggable measurement backend. The default counts ticks; adapters for
/// other cost metrics (energy meters, counters) implement the same
/// start/stop contract. Lower values are better.
///
/// stop(start()) around a no-op yields a sample bounded by the baseline
/// overhead reported by noop_baseline().
class MetricSource {
public:
  using Token = std::uint64_t;

  virtual ~MetricSource() = default;

  virtual Token start() = 0;
  virtual MetricSample stop(Token token) = 0;
  virtual std::string_view metric_id() const = 0;
};

/// Default metric source: elapsed ticks of the host counter.
class TickMetricSource final : public MetricSource {
public:
  Token start() override { return read_ticks(); }

  MetricSample stop(Token token) override {
    return {static_cast<double>(read_ticks() - token), "ticks"};
  }

  std::string_view metric_id() const override { return "ticks"; }
};

/// A manually advanced tick counter for deterministic simulation. Simulated
/// factories and executors advance it by their nominal cost; a
/// VirtualTickSource observing the same clock then reports those costs
/// exactly, with zero measurement noise.
class VirtualClock {
public:
  Ticks now() const noexcept { return now_.load(std::memory_order_relaxed); }

  void advance(Ticks delta) noexcept {
    now_.fetch_add(delta, std::memory_order_relaxed);
  }

private:
  std::atomic<Ticks> now_{0};
};

/// Metric source reading a VirtualClock.
class VirtualTickSource final : public MetricSource {
public:
  explicit VirtualTickSource(std::shared_ptr<VirtualClock> clock)
      : clock_(std::move(clock)) {}

  Token start() override { return clock_->now(); }

  MetricSample stop(Token token) override {
    return {static_cast<double>(clock_->now() - token), "virtual-ticks"};
  }

  std::string_view metric_id() const override { return "virtual-ticks"; }

  const std::shared_ptr<VirtualClock>& clock() const { return clock_; }

private:
  std::shared_ptr<VirtualClock> clock_;
};

/// Executable handle produced by a variant factory. Receives an opaque
/// payload owned by the caller; mutating it is allowed.
using ExecFn = std::function<void(void*)>;

/// Scores exactly the executor invocation. Build time is never included
/// here; it is recorded separately when the variant is built. If the
/// executor throws, the error propagates and no sample is produced.
MetricSample measure(const ExecFn& exec, void* payload, MetricSource& source);

/// Measures a no-op `trials` times and returns the largest sample observed:
/// the documented baseline overhead of the source itself.
MetricSample noop_baseline(MetricSource& source, int trials = 256);

} // namespace jitune
