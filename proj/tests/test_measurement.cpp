#include <algorithm>
#include <memory>
#include <vector>

#include "doctest.h"

#include "jitune/errors.hpp"
#include "jitune/metric.hpp"
#include "jitune/ticks.hpp"
#include "jitune/variant.hpp"

using namespace jitune;

TEST_CASE("tick reads never go backwards") {
  const Ticks t1 = read_ticks();
  const Ticks t2 = read_ticks();
  CHECK(t2 >= t1);

  Ticks previous = read_ticks();
  for (int i = 0; i < 4096; ++i) {
    const Ticks current = read_ticks();
    CHECK(current >= previous);
    previous = current;
  }
}

TEST_CASE("busy waiting advances the counter") {
  const Ticks start = read_ticks();
  busy_wait_ticks(100000);
  CHECK(read_ticks() - start >= 100000);
}

TEST_CASE("a no-op measurement stays within the calibrated baseline") {
  TickMetricSource source;
  const MetricSample baseline = noop_baseline(source);
  CHECK(baseline.value >= 0.0);

  // The median of fresh no-op samples must not exceed the worst case seen
  // during calibration.
  const ExecFn noop = [](void*) {};
  std::vector<double> samples;
  for (int i = 0; i < 101; ++i) {
    samples.push_back(measure(noop, nullptr, source).value);
  }
  std::sort(samples.begin(), samples.end());
  CHECK(samples[50] <= baseline.value);
}

TEST_CASE("measured ordering matches true ordering at a 3x cost ratio") {
  TickMetricSource source;
  // Long enough that scheduler noise (multi-ms on a virtualized host)
  // cannot outweigh the 3x gap.
  const ExecFn fast = [](void*) { busy_wait_ticks(10000000); };
  const ExecFn slow = [](void*) { busy_wait_ticks(30000000); };

  int correct = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double fast_sample = measure(fast, nullptr, source).value;
    const double slow_sample = measure(slow, nullptr, source).value;
    if (slow_sample > fast_sample) {
      ++correct;
    }
  }
  CHECK(correct >= 99);
}

TEST_CASE("executor failures produce no sample") {
  TickMetricSource source;
  const ExecFn failing = [](void*) { throw Error("kernel failure"); };
  CHECK_THROWS_AS(measure(failing, nullptr, source), Error);
}

TEST_CASE("build latency never leaks into execution samples") {
  // A factory that takes a long time to build a no-op kernel: the exec
  // samples must stay near the no-op baseline no matter the build latency.
  constexpr Ticks kBuildLatency = 2000000;
  BusyWaitFactory factory(kBuildLatency, {0, 0});
  const auto space = CandidateSpace::implementation_indices(2);
  TickMetricSource source;

  const CompiledVariant variant = build_variant(factory, space, 0, source);
  CHECK(variant.compile_cost >= static_cast<double>(kBuildLatency));

  for (int i = 0; i < 10; ++i) {
    const MetricSample sample = measure(variant.exec, nullptr, source);
    CHECK(sample.value < static_cast<double>(kBuildLatency) / 10.0);
  }
}

TEST_CASE("the virtual clock reports nominal costs exactly") {
  auto clock = std::make_shared<VirtualClock>();
  VirtualTickSource source(clock);

  const auto token = source.start();
  clock->advance(12345);
  const MetricSample sample = source.stop(token);
  CHECK(sample.value == 12345.0);
  CHECK(sample.metric_id == "virtual-ticks");

  // Without advancing, a measurement is exactly zero.
  CHECK(measure([](void*) {}, nullptr, source).value == 0.0);
}
