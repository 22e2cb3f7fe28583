#include "jitune/experiment.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <utility>

#include "jitune/dispatch.hpp"
#include "jitune/errors.hpp"
#include "jitune/kernels.hpp"
#include "jitune/variant.hpp"

namespace jitune {

namespace {

using kernels::LoopOrder;
using kernels::Matrix;

struct MatmulPayload {
  const Matrix* a = nullptr;
  const Matrix* b = nullptr;
  Matrix* out = nullptr;
};

struct SaxpyPayload {
  double alpha = 0.0;
  const std::vector<double>* x = nullptr;
  std::vector<double>* y = nullptr;
};

/// Input data for one run. The tuner measures on this live data; variants
/// may mutate it between calls (saxpy does).
struct BenchData {
  Matrix a, b, out;
  std::vector<double> x, y;
  MatmulPayload matmul;
  SaxpyPayload saxpy;

  static BenchData make(const ExperimentConfig& config) {
    BenchData data;
    switch (config.kernel) {
    case BenchKernel::MatmulOrder:
    case BenchKernel::MatmulBlock:
      data.a = kernels::random_matrix(config.n, config.seed);
      data.b = kernels::random_matrix(config.n, config.seed + 1);
      data.out = Matrix(config.n);
      data.matmul = {&data.a, &data.b, &data.out};
      break;
    case BenchKernel::SaxpyDemo: {
      std::mt19937_64 rng(config.seed);
      const auto count = static_cast<std::size_t>(config.n);
      data.x.resize(count);
      data.y.resize(count);
      for (std::size_t i = 0; i < count; ++i) {
        data.x[i] = static_cast<double>(rng() % 1000) / 100.0;
        data.y[i] = static_cast<double>(rng() % 1000) / 100.0;
      }
      data.saxpy = {1.5, &data.x, &data.y};
      break;
    }
    }
    return data;
  }

  void* payload(BenchKernel kernel) {
    return kernel == BenchKernel::SaxpyDemo ? static_cast<void*>(&saxpy)
                                            : static_cast<void*>(&matmul);
  }
};

constexpr LoopOrder kOrders[] = {LoopOrder::Ijk, LoopOrder::Ikj,
                                 LoopOrder::Jik};

ExecFn make_kernel_exec(BenchKernel kernel, const CandidateSpace& space,
                        int index) {
  switch (kernel) {
  case BenchKernel::MatmulOrder: {
    const LoopOrder order = kOrders[space.value_at(index)];
    return [order](void* p) {
      auto& payload = *static_cast<MatmulPayload*>(p);
      kernels::matmul(order, *payload.a, *payload.b, *payload.out);
    };
  }
  case BenchKernel::MatmulBlock: {
    const long long block = space.value_at(index);
    return [block](void* p) {
      auto& payload = *static_cast<MatmulPayload*>(p);
      kernels::blocked_matmul(block, *payload.a, *payload.b, *payload.out);
    };
  }
  case BenchKernel::SaxpyDemo: {
    const long long strip = space.value_at(index);
    return [strip](void* p) {
      auto& payload = *static_cast<SaxpyPayload*>(p);
      kernels::saxpy_strip<double>(payload.alpha, *payload.x, *payload.y,
                                   payload.y->size(), strip);
    };
  }
  }
  throw Error("unknown kernel");
}

const char* problem_label(BenchKernel kernel) {
  switch (kernel) {
  case BenchKernel::MatmulOrder:
    return "loop_order";
  case BenchKernel::MatmulBlock:
    return "block_size";
  case BenchKernel::SaxpyDemo:
    return "strip";
  }
  return "?";
}

struct RunContext {
  std::unique_ptr<VariantFactory> factory;
  std::unique_ptr<MetricSource> source;
};

RunContext make_run_context(const ExperimentConfig& config,
                            const CandidateSpace& space) {
  RunContext ctx;
  if (config.factory.kind == FactorySpec::Kind::Simulated) {
    if (config.exec_costs.size() != static_cast<std::size_t>(space.size())) {
      throw Error("simulated factory needs one exec cost per candidate: " +
                  std::to_string(space.size()) + " candidates, " +
                  std::to_string(config.exec_costs.size()) + " costs");
    }
    auto clock = std::make_shared<VirtualClock>();
    ctx.factory = std::make_unique<VirtualCostFactory>(
        clock, config.factory.build_ticks, config.exec_costs);
    ctx.source = std::make_unique<VirtualTickSource>(clock);
  } else {
    const BenchKernel kernel = config.kernel;
    ctx.factory = std::make_unique<CallableFactory>(
        [kernel](const CandidateSpace& s, int index) {
          return make_kernel_exec(kernel, s, index);
        });
    ctx.source = std::make_unique<TickMetricSource>();
  }
  return ctx;
}

void validate(const ExperimentConfig& config) {
  if (config.n < 1) {
    throw Error("problem size must be at least 1");
  }
  if (config.iterations < 1) {
    throw Error("iterations must be at least 1");
  }
  if (config.runs < 1) {
    throw Error("runs must be at least 1");
  }
}

} // namespace

CandidateSpace default_candidates(BenchKernel kernel) {
  switch (kernel) {
  case BenchKernel::MatmulOrder:
    return CandidateSpace::implementation_indices(3);
  case BenchKernel::MatmulBlock:
    return CandidateSpace::parameter_values({4, 8, 16, 32, 64, 128, 256, 512});
  case BenchKernel::SaxpyDemo:
    return CandidateSpace::parameter_values({16, 64, 256, 1024});
  }
  throw Error("unknown kernel");
}

const char* to_string(BenchKernel kernel) {
  switch (kernel) {
  case BenchKernel::MatmulOrder:
    return "matmul-order";
  case BenchKernel::MatmulBlock:
    return "matmul-block";
  case BenchKernel::SaxpyDemo:
    return "saxpy-demo";
  }
  return "?";
}

const char* to_string(PhaseKind phase) {
  switch (phase) {
  case PhaseKind::Exploring:
    return "exploring";
  case PhaseKind::Finalizing:
    return "finalizing";
  case PhaseKind::Tuned:
    return "tuned";
  }
  return "?";
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const RowSink& sink) {
  validate(config);
  const CandidateSpace space =
      config.candidates ? *config.candidates : default_candidates(config.kernel);
  if (config.factory.kind == FactorySpec::Kind::Closure &&
      config.kernel == BenchKernel::MatmulOrder &&
      (space.kind() != CandidateSpace::Kind::ImplementationIndices ||
       space.size() > 3)) {
    throw Error("matmul-order selects among 3 fixed loop orders");
  }

  const std::string site = std::string("bench/") + to_string(config.kernel);
  const char* label = problem_label(config.kernel);

  ExperimentResult result;
  for (int run = 0; run < config.runs; ++run) {
    TunerRegistry registry;
    InstantiationCache cache;
    RunContext ctx = make_run_context(config, space);
    BenchData data = BenchData::make(config);
    if (run == 0) {
      result.metric_id = std::string(ctx.source->metric_id());
    }

    double cumulative = 0.0;
    for (int call = 1; call <= config.iterations; ++call) {
      const IterationReport rep = autotuned_invoke(
          registry, cache, *ctx.factory, site, label, space,
          data.payload(config.kernel), *ctx.source, config.tuner);
      cumulative += rep.compile_ticks + rep.exec_ticks;
      const IterationRow row{run,
                             static_cast<int>(rep.call_index),
                             rep.phase,
                             rep.candidate,
                             rep.compile_ticks,
                             rep.exec_ticks,
                             cumulative};
      result.log.push_back(row);
      if (sink) {
        sink(row);
      }
    }

    const TunerHandle tuner =
        registry.find(TuningKey{site, label});
    RunSummary summary;
    summary.run_id = run;
    summary.total_ticks = cumulative;
    if (tuner) {
      if (tuner->phase().kind == PhaseKind::Tuned) {
        const BestCandidate best = tuner->best_candidate();
        summary.finalized_candidate = best.index;
        ++result.histogram[best.index];
      }
      std::vector<double> scores = tuner->aggregates();
      std::sort(scores.begin(), scores.end());
      const auto measured = static_cast<std::size_t>(
          std::count_if(scores.begin(), scores.end(), [](double s) {
            return s < std::numeric_limits<double>::infinity();
          }));
      if (measured >= 2 && scores[0] > 0.0) {
        summary.best_gap_ratio = (scores[1] - scores[0]) / scores[0];
      }
    }
    result.runs.push_back(summary);
  }
  return result;
}

std::vector<IterationRow> run_fixed_candidate(const ExperimentConfig& config,
                                              int candidate_index) {
  validate(config);
  const CandidateSpace space =
      config.candidates ? *config.candidates : default_candidates(config.kernel);
  RunContext ctx = make_run_context(config, space);
  BenchData data = BenchData::make(config);

  // The fixed pick stands in for an ahead-of-time compiled choice, so its
  // build cost is not charged to the run.
  const CompiledVariant variant =
      build_variant(*ctx.factory, space, candidate_index, *ctx.source);

  std::vector<IterationRow> rows;
  rows.reserve(static_cast<std::size_t>(config.iterations));
  double cumulative = 0.0;
  for (int call = 1; call <= config.iterations; ++call) {
    const MetricSample sample =
        measure(variant.exec, data.payload(config.kernel), *ctx.source);
    cumulative += sample.value;
    rows.push_back(IterationRow{candidate_index, call, PhaseKind::Tuned,
                                candidate_index, 0.0, sample.value,
                                cumulative});
  }
  return rows;
}

} // namespace jitune
