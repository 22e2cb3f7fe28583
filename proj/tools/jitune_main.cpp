// jitune CLI: run autotuning experiments and evaluate the amortization
// model. See README.md for the file formats.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jitune/amortization.hpp"
#include "jitune/errors.hpp"
#include "jitune/experiment.hpp"
#include "jitune/report.hpp"
#include "jitune/ticks.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct BenchOptions {
  std::string kernel;
  int n = 128;
  int iterations = 100;
  int runs = 1;
  std::vector<long long> block_sizes;
  std::uint64_t seed = 1;
  std::string factory = "closure";
  std::vector<jitune::Ticks> exec_costs;
  std::string metric = "ticks";
  std::string out_dir = ".";
  bool baselines = false;
  int replicates = 1;
};

struct ModelOptions {
  double compile_cost = 0.0;
  std::vector<double> exec_costs;
  double baseline_cost = 0.0;
  long long total_calls = -1;
  std::string log_path;
};

jitune::BenchKernel parse_kernel(const std::string& name) {
  if (name == "matmul-order") {
    return jitune::BenchKernel::MatmulOrder;
  }
  if (name == "matmul-block") {
    return jitune::BenchKernel::MatmulBlock;
  }
  if (name == "saxpy-demo") {
    return jitune::BenchKernel::SaxpyDemo;
  }
  throw CLI::ValidationError("kernel must be matmul-order, matmul-block or "
                             "saxpy-demo, got " +
                             name);
}

// Host ticks per second, calibrated against the steady clock. Reports only;
// the core compares raw ticks.
double estimate_ticks_per_second() {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const jitune::Ticks ticks0 = jitune::read_ticks();
  while (Clock::now() - t0 < std::chrono::milliseconds(20)) {
  }
  const auto t1 = Clock::now();
  const jitune::Ticks ticks1 = jitune::read_ticks();
  return static_cast<double>(ticks1 - ticks0) /
         std::chrono::duration<double>(t1 - t0).count();
}

int run_bench(const BenchOptions& options) {
  jitune::ExperimentConfig config;
  config.kernel = parse_kernel(options.kernel);
  config.n = options.n;
  config.iterations = options.iterations;
  config.runs = options.runs;
  config.seed = options.seed;
  config.tuner.replicates_per_candidate = options.replicates;

  if (options.metric != "ticks") {
    std::cerr << "error: only the ticks metric is available\n";
    return kExitUsage;
  }

  if (!options.block_sizes.empty()) {
    if (config.kernel == jitune::BenchKernel::MatmulOrder) {
      std::cerr << "error: matmul-order selects among fixed loop orders; "
                   "--block-sizes does not apply\n";
      return kExitUsage;
    }
    config.candidates =
        jitune::CandidateSpace::parameter_values(options.block_sizes);
  }

  if (options.factory == "closure") {
    config.factory.kind = jitune::FactorySpec::Kind::Closure;
  } else if (options.factory.rfind("simulated:", 0) == 0) {
    config.factory.kind = jitune::FactorySpec::Kind::Simulated;
    config.factory.build_ticks =
        std::stoull(options.factory.substr(std::string("simulated:").size()));
    if (options.exec_costs.empty()) {
      std::cerr << "error: --factory simulated:<ticks> needs --exec-costs\n";
      return kExitUsage;
    }
    config.exec_costs = options.exec_costs;
  } else {
    std::cerr << "error: --factory must be closure or simulated:<ticks>\n";
    return kExitUsage;
  }

  const jitune::CandidateSpace space =
      config.candidates ? *config.candidates
                        : jitune::default_candidates(config.kernel);
  const int k = space.size();
  if (config.iterations <
      k * config.tuner.replicates_per_candidate + 1) {
    std::cerr << "warning: tuning will not finalize (" << config.iterations
              << " iterations for " << k
              << " candidates); the log will be partial\n";
  }

  // The environment variable wins over the flag.
  std::filesystem::path out_dir = options.out_dir;
  if (const char* env_out = std::getenv("JITUNE_OUT")) {
    out_dir = env_out;
  }
  std::filesystem::create_directories(out_dir);

  const auto iterations_path = out_dir / "iterations.csv";
  std::ofstream iterations_file(iterations_path, std::ios::binary);
  if (!iterations_file) {
    std::cerr << "error: cannot open " << iterations_path << " for writing\n";
    return kExitRuntime;
  }
  iterations_file << "run_id,call_index,phase,candidate,compile_ticks,"
                     "exec_ticks,cumulative_ticks\n";

  // Stream rows so a failing run still leaves a usable partial log.
  const jitune::RowSink sink = [&](const jitune::IterationRow& row) {
    const std::vector<jitune::IterationRow> one{row};
    std::ostringstream buffer;
    jitune::write_iteration_csv(buffer, one);
    const std::string text = buffer.str();
    iterations_file << text.substr(text.find('\n') + 1);
    iterations_file.flush();
  };

  const jitune::ExperimentResult result = jitune::run_experiment(config, sink);

  std::vector<jitune::BaselineReport> baselines;
  if (options.baselines) {
    std::vector<jitune::IterationRow> run0;
    for (const jitune::IterationRow& row : result.log) {
      if (row.run_id == 0) {
        run0.push_back(row);
      }
    }
    std::ofstream baseline_file(out_dir / "baselines.csv", std::ios::binary);
    std::vector<jitune::IterationRow> all_baseline_rows;
    for (int candidate = 0; candidate < k; ++candidate) {
      const auto rows = jitune::run_fixed_candidate(config, candidate);
      jitune::BaselineReport report;
      report.candidate_index = candidate;
      report.candidate_value = space.value_at(candidate);
      report.total_ticks = rows.back().cumulative_ticks;
      report.observed_break_even = jitune::first_crossing(run0, rows);
      baselines.push_back(report);
      all_baseline_rows.insert(all_baseline_rows.end(), rows.begin(),
                               rows.end());
    }
    jitune::write_iteration_csv(baseline_file, all_baseline_rows);
  }

  {
    std::ofstream histogram_file(out_dir / "histogram.csv", std::ios::binary);
    jitune::write_histogram_csv(histogram_file, result, space);
  }
  {
    std::ofstream summary_file(out_dir / "summary.json", std::ios::binary);
    summary_file << jitune::summary_json(config, result, space, baselines)
                 << '\n';
  }

  std::cout << "kernel " << jitune::to_string(config.kernel) << ", n "
            << config.n << ", " << config.runs << " run(s) x "
            << config.iterations << " iterations\n";
  for (const jitune::RunSummary& run : result.runs) {
    std::cout << "  run " << run.run_id << ": ";
    if (run.finalized_candidate) {
      std::cout << "chose " << space.value_at(*run.finalized_candidate)
                << " (gap to runner-up "
                << run.best_gap_ratio * 100.0 << "%)";
    } else {
      std::cout << "tuning incomplete";
    }
    std::cout << ", total " << run.total_ticks << " " << result.metric_id;
    if (result.metric_id == "ticks") {
      std::cout << " (~" << run.total_ticks / estimate_ticks_per_second() * 1e3
                << " ms)";
    }
    std::cout << '\n';
  }
  for (const jitune::BaselineReport& report : baselines) {
    std::cout << "  baseline " << report.candidate_value << ": total "
              << report.total_ticks << ", break-even ";
    if (report.observed_break_even) {
      std::cout << "at call " << *report.observed_break_even;
    } else {
      std::cout << "not reached";
    }
    std::cout << '\n';
  }
  std::cout << "wrote " << (out_dir / "iterations.csv").string() << ", "
            << (out_dir / "histogram.csv").string() << ", "
            << (out_dir / "summary.json").string();
  if (options.baselines) {
    std::cout << ", " << (out_dir / "baselines.csv").string();
  }
  std::cout << '\n';
  return kExitOk;
}

int run_model(const ModelOptions& options) {
  const int k = static_cast<int>(options.exec_costs.size());
  const double best =
      *std::min_element(options.exec_costs.begin(), options.exec_costs.end());

  std::cout << "candidates: " << k << ", best per-call cost: " << best
            << ", baseline per-call cost: " << options.baseline_cost << '\n';

  const auto break_even = jitune::break_even_calls(
      options.compile_cost, options.exec_costs, options.baseline_cost);
  if (break_even) {
    std::cout << "break-even calls: " << *break_even << '\n';
  } else {
    std::cout << "break-even calls: none (no finite break-even; the baseline "
                 "is at least as fast as the best candidate)\n";
  }

  jitune::AmortizationInputs inputs{options.compile_cost, options.exec_costs,
                                    options.baseline_cost,
                                    options.total_calls};
  if (options.total_calls >= 0) {
    const double total = jitune::autotuned_total(inputs);
    const double baseline_total =
        static_cast<double>(options.total_calls) * options.baseline_cost;
    std::cout << "autotuned total over " << options.total_calls
              << " calls: " << total << '\n';
    std::cout << "  (alternate accounting without the finalization run: "
              << total - best << ")\n";
    std::cout << "baseline total: " << baseline_total << '\n';
    std::cout << "net gain: " << jitune::net_gain(inputs) << '\n';
  }

  const jitune::RegimeReport regime = jitune::regime_report(inputs);
  const auto print_indicator = [](const jitune::RegimeIndicator& indicator,
                                  bool favorable_is_low) {
    std::cout << "  " << indicator.label << ": " << indicator.value
              << (favorable_is_low ? " (max " : " (min ")
              << indicator.threshold << ") -> "
              << (indicator.favorable ? "favorable" : "unfavorable") << '\n';
  };
  std::cout << "regime indicators:\n";
  print_indicator(regime.exploration_share, true);
  print_indicator(regime.slow_variant_ratio, true);
  print_indicator(regime.relative_gain, false);

  if (!options.log_path.empty()) {
    std::ifstream log_file(options.log_path, std::ios::binary);
    if (!log_file) {
      std::cerr << "error: cannot read " << options.log_path << '\n';
      return kExitRuntime;
    }
    const auto rows = jitune::read_iteration_csv(log_file);
    std::vector<jitune::IterationRow> run0;
    for (const jitune::IterationRow& row : rows) {
      if (row.run_id == 0) {
        run0.push_back(row);
      }
    }
    if (run0.empty()) {
      std::cerr << "error: no rows for run 0 in " << options.log_path << '\n';
      return kExitRuntime;
    }
    const long long calls =
        options.total_calls >= 0
            ? std::min<long long>(options.total_calls,
                                  static_cast<long long>(run0.size()))
            : static_cast<long long>(run0.size());
    const double measured =
        run0[static_cast<std::size_t>(calls - 1)].cumulative_ticks;
    jitune::AmortizationInputs measured_inputs = inputs;
    measured_inputs.total_calls = calls;
    const double model = jitune::autotuned_total(measured_inputs);
    std::cout << "measured cumulative at call " << calls << ": " << measured
              << " vs model " << model << " (deviation "
              << (measured - model) / model * 100.0 << "%)\n";
  }
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"just-in-time online autotuning benchmark driver"};
  app.require_subcommand(1);

  BenchOptions bench;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "run an autotuning experiment and write CSV/JSON reports");
  bench_cmd
      ->add_option("kernel", bench.kernel,
                   "matmul-order | matmul-block | saxpy-demo")
      ->required();
  bench_cmd->add_option("--n", bench.n, "matrix dimension / vector length");
  bench_cmd->add_option("--iterations", bench.iterations,
                        "autotuned calls per run");
  bench_cmd->add_option("--runs", bench.runs, "independent runs");
  bench_cmd
      ->add_option("--block-sizes", bench.block_sizes,
                   "candidate values (matmul-block blocks, saxpy-demo strips)")
      ->delimiter(',');
  bench_cmd->add_option("--seed", bench.seed, "RNG seed for input data");
  bench_cmd->add_option("--factory", bench.factory,
                        "closure | simulated:<build ticks>");
  bench_cmd
      ->add_option("--exec-costs", bench.exec_costs,
                   "per-candidate costs for the simulated factory")
      ->delimiter(',');
  bench_cmd->add_option("--metric", bench.metric, "ticks");
  bench_cmd->add_option("--out", bench.out_dir,
                        "output directory (JITUNE_OUT overrides)");
  bench_cmd->add_flag("--baselines", bench.baselines,
                      "also run each fixed candidate for crossing analysis");
  bench_cmd->add_option("--replicates", bench.replicates,
                        "measurements per candidate during exploration");

  ModelOptions model;
  CLI::App* model_cmd = app.add_subcommand(
      "model", "evaluate the compile-overhead amortization model");
  model_cmd->add_option("--C", model.compile_cost, "cost of one build")
      ->required();
  model_cmd
      ->add_option("--E", model.exec_costs, "per-candidate execution costs")
      ->delimiter(',')
      ->required();
  model_cmd
      ->add_option("--Ep", model.baseline_cost,
                   "per-call cost of the baseline pick")
      ->required();
  model_cmd->add_option("--N", model.total_calls, "total call count");
  model_cmd->add_option("--log", model.log_path,
                        "iterations CSV for a measured-vs-model comparison");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForAllHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return kExitUsage;
  }

  try {
    if (bench_cmd->parsed()) {
      return run_bench(bench);
    }
    return run_model(model);
  } catch (const jitune::InsufficientCallsError& error) {
    std::cerr << "error: " << error.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return kExitRuntime;
  }
}
