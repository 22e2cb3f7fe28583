#include "jitune/metric.hpp"

#include <algorithm>

namespace jitune {

MetricSample measure(const ExecFn& exec, void* payload, MetricSource& source) {
  const MetricSource::Token token = source.start();
  exec(payload);
  return source.stop(token);
}

MetricSample noop_baseline(MetricSource& source, int trials) {
  const ExecFn noop = [](void*) {};
  MetricSample worst{0.0, std::string(source.metric_id())};
  for (int i = 0; i < trials; ++i) {
    const MetricSample sample = measure(noop, nullptr, source);
    worst.value = std::max(worst.value, sample.value);
  }
  return worst;
}

} // namespace jitune
