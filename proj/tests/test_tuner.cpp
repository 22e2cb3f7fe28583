#include <atomic>
#include <chrono>
#include <random>
#include <thread>
#include <vector>

#include "doctest.h"

#include "jitune/errors.hpp"
#include "jitune/tuner.hpp"

using namespace jitune;

namespace {

MetricSample ticks(double value) { return {value, "ticks"}; }

/// Drives one full call: begin, then complete with the given sample value.
Phase step(Tuner& tuner, double sample) {
  const Action action = tuner.begin_call();
  return tuner.complete_call(action, ticks(sample));
}

/// Runs a scripted tuning session where candidate i always costs costs[i].
/// Returns the finalized winner index.
int run_to_tuned(Tuner& tuner, const std::vector<double>& costs,
                 int extra_calls = 0) {
  const int k = tuner.space().size();
  const int replicates = tuner.config().replicates_per_candidate;
  for (int call = 0; call < k * replicates + 1 + extra_calls; ++call) {
    const Action action = tuner.begin_call();
    tuner.complete_call(
        action, ticks(costs[static_cast<std::size_t>(action.candidate)]));
  }
  REQUIRE(tuner.phase().kind == PhaseKind::Tuned);
  return tuner.phase().candidate;
}

} // namespace

TEST_CASE("fresh tuners start exploring the first candidate") {
  TunerRegistry registry;
  const auto a = registry.create({"site", "block_size"},
                                 CandidateSpace::parameter_values({2, 4, 8}));
  CHECK(a->phase() == Phase{PhaseKind::Exploring, 0});

  const auto b = registry.create({"site", "impl"},
                                 CandidateSpace::implementation_indices(3));
  CHECK(b->phase() == Phase{PhaseKind::Exploring, 0});

  CHECK_THROWS_AS(CandidateSpace::parameter_values({}),
                  EmptyCandidateSpaceError);
  CHECK_THROWS_AS(CandidateSpace::parameter_values({4, 4}),
                  DuplicateCandidateError);
  CHECK_THROWS_AS(CandidateSpace::implementation_indices(0),
                  EmptyCandidateSpaceError);
}

TEST_CASE("duplicate keys are rejected") {
  TunerRegistry registry;
  registry.create({"site", "p"}, CandidateSpace::parameter_values({2, 4}));
  CHECK_THROWS_AS(registry.create({"site", "p"},
                                  CandidateSpace::parameter_values({2, 4})),
                  DuplicateKeyError);
}

TEST_CASE("lookup_or_create is idempotent per key") {
  TunerRegistry registry;
  const auto space = CandidateSpace::parameter_values({2, 4});
  const auto first = registry.lookup_or_create("site1", "block_size", space);
  const auto second = registry.lookup_or_create("site1", "block_size", space);
  CHECK(first.get() == second.get());
  CHECK(registry.size() == 1);
}

TEST_CASE("a changed label restarts tuning from scratch") {
  TunerRegistry registry;
  const auto space = CandidateSpace::parameter_values({2, 4});
  const auto original = registry.lookup_or_create("site1", "block_size", space);
  run_to_tuned(*original, {30, 10});
  CHECK(original->call_count() == 3);

  const auto fresh = registry.lookup_or_create("site1", "unroll", space);
  CHECK(fresh.get() != original.get());
  CHECK(fresh->phase() == Phase{PhaseKind::Exploring, 0});
  CHECK(fresh->call_count() == 0);
  CHECK_THROWS_AS(fresh->best_candidate(), NoMeasurementsError);
}

TEST_CASE("a key cannot change its candidate space") {
  TunerRegistry registry;
  registry.lookup_or_create("site1", "block_size",
                            CandidateSpace::parameter_values({2, 4}));
  CHECK_THROWS_AS(
      registry.lookup_or_create("site1", "block_size",
                                CandidateSpace::parameter_values({2, 4, 8})),
      SpaceMismatchError);
}

TEST_CASE("the first call explores the first candidate, with a build") {
  Tuner tuner({"s", "p"}, CandidateSpace::implementation_indices(3), {});
  const Action action = tuner.begin_call();
  CHECK(action.kind == ActionKind::ExecuteCandidate);
  CHECK(action.candidate == 0);
  CHECK(action.must_compile);
  tuner.abort_call(action);
}

TEST_CASE("after full exploration the best candidate is rebuilt") {
  Tuner tuner({"s", "p"}, CandidateSpace::implementation_indices(2), {});
  step(tuner, 100);
  CHECK(tuner.phase() == Phase{PhaseKind::Exploring, 1});
  step(tuner, 50);
  CHECK(tuner.phase().kind == PhaseKind::Finalizing);

  const Action final_action = tuner.begin_call();
  CHECK(final_action.kind == ActionKind::CompileBestAndExecute);
  CHECK(final_action.candidate == 1);
  tuner.complete_call(final_action, ticks(50));
  CHECK(tuner.phase() == Phase{PhaseKind::Tuned, 1});

  const Action steady = tuner.begin_call();
  CHECK(steady.kind == ActionKind::ExecuteTuned);
  CHECK(steady.candidate == 1);
  CHECK_FALSE(steady.must_compile);
  tuner.complete_call(steady, ticks(50));
}

TEST_CASE("ties break toward the lowest candidate index") {
  Tuner tuner({"s", "p"}, CandidateSpace::implementation_indices(2), {});
  step(tuner, 50);
  step(tuner, 50);
  const Action action = tuner.begin_call();
  CHECK(action.candidate == 0);
  tuner.complete_call(action, ticks(50));
  CHECK(tuner.phase() == Phase{PhaseKind::Tuned, 0});
}

TEST_CASE("scripted costs drive the machine to the cheapest candidate") {
  Tuner tuner({"s", "p"}, CandidateSpace::implementation_indices(3), {});
  const int winner = run_to_tuned(tuner, {1, 3, 2});
  CHECK(winner == 0);
  CHECK(tuner.call_count() == 4);
}

TEST_CASE("best_candidate reports values for parameter spaces") {
  Tuner tuner({"s", "p"}, CandidateSpace::parameter_values({2, 4, 8}), {});
  CHECK_THROWS_AS(tuner.best_candidate(), NoMeasurementsError);

  step(tuner, 100);
  const BestCandidate early = tuner.best_candidate();
  CHECK(early.value == 2);
  CHECK_FALSE(early.is_final);

  step(tuner, 50);
  step(tuner, 70);
  step(tuner, 50); // finalization
  const BestCandidate best = tuner.best_candidate();
  CHECK(best.value == 4);
  CHECK(best.index == 1);
  CHECK(best.is_final);
}

TEST_CASE("reset restores a fresh exploration") {
  Tuner tuner({"s", "p"}, CandidateSpace::implementation_indices(2), {});
  run_to_tuned(tuner, {30, 10});
  CHECK(tuner.phase() == Phase{PhaseKind::Tuned, 1});

  tuner.reset();
  CHECK(tuner.phase() == Phase{PhaseKind::Exploring, 0});
  CHECK(tuner.call_count() == 0);
  CHECK(tuner.compile_count() == 0);
  CHECK_THROWS_AS(tuner.best_candidate(), NoMeasurementsError);

  tuner.reset(); // idempotent on fresh state
  CHECK(tuner.phase() == Phase{PhaseKind::Exploring, 0});

  // Re-exploration pays the full compile schedule again.
  run_to_tuned(tuner, {30, 10});
  CHECK(tuner.compile_count() == 3);
}

TEST_CASE("compile count follows min(calls, k) plus the finalization") {
  const int k = 3;
  Tuner tuner({"s", "p"}, CandidateSpace::implementation_indices(k), {});
  for (std::uint64_t call = 1; call <= 10; ++call) {
    step(tuner, 5);
    const std::uint64_t expected =
        std::min<std::uint64_t>(call, k) + (call >= k + 1 ? 1 : 0);
    CHECK(tuner.compile_count() == expected);
  }
}

TEST_CASE("phases only ever move forward through the expected sequence") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 4);
    Tuner tuner({"s", "p"}, CandidateSpace::implementation_indices(k), {});
    int rank_seen = 0; // Exploring(i) -> i, Finalizing -> k, Tuned -> k+1
    for (int call = 0; call < k + 4; ++call) {
      const Phase phase = tuner.phase();
      const int rank = phase.kind == PhaseKind::Exploring ? phase.candidate
                       : phase.kind == PhaseKind::Finalizing ? k
                                                             : k + 1;
      CHECK(rank >= rank_seen);
      rank_seen = rank;
      step(tuner, static_cast<double>(rng() % 100));
    }
    CHECK(rank_seen == k + 1);
  }
}

TEST_CASE("replicates explore each candidate several times, one build each") {
  TunerConfig config;
  config.replicates_per_candidate = 2;
  Tuner tuner({"s", "p"}, CandidateSpace::implementation_indices(2), config);

  std::vector<std::pair<int, bool>> seen; // (candidate, must_compile)
  for (int call = 0; call < 5; ++call) {
    const Action action = tuner.begin_call();
    seen.emplace_back(action.candidate, action.must_compile);
    // Candidate 1 is the faster one on aggregate.
    const double cost = action.candidate == 0 ? 50 : 20;
    tuner.complete_call(action, ticks(cost));
  }
  const std::vector<std::pair<int, bool>> expected{
      {0, true}, {0, false}, {1, true}, {1, false}, {1, true}};
  CHECK(seen == expected);
  CHECK(tuner.phase() == Phase{PhaseKind::Tuned, 1});
  CHECK(tuner.compile_count() == 3);
}

TEST_CASE("mean aggregation can pick a different winner than min") {
  TunerConfig config;
  config.replicates_per_candidate = 2;
  config.aggregate = Aggregate::Mean;
  Tuner tuner({"s", "p"}, CandidateSpace::implementation_indices(2), config);

  // Candidate 0: samples 10, 90 (min 10, mean 50).
  // Candidate 1: samples 30, 40 (min 30, mean 35).
  for (const double cost : {10, 90, 30, 40}) {
    step(tuner, cost);
  }
  const Action action = tuner.begin_call();
  CHECK(action.candidate == 1);
  tuner.complete_call(action, ticks(35));
  CHECK(tuner.phase() == Phase{PhaseKind::Tuned, 1});
}

TEST_CASE("selection is invariant under monotone sample transforms") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 4);
    std::vector<double> costs;
    for (int i = 0; i < k; ++i) {
      costs.push_back(static_cast<double>(1 + rng() % 500));
    }
    std::vector<double> transformed;
    for (const double c : costs) {
      transformed.push_back(c * c + 7.0);
    }

    Tuner plain({"s", "p"}, CandidateSpace::implementation_indices(k), {});
    Tuner mapped({"s", "q"}, CandidateSpace::implementation_indices(k), {});
    CHECK(run_to_tuned(plain, costs) == run_to_tuned(mapped, transformed));
  }
}

TEST_CASE("completions must match the pending action") {
  Tuner tuner({"s", "p"}, CandidateSpace::implementation_indices(2), {});
  const Action action = tuner.begin_call();

  Action stale = action;
  stale.ticket += 1;
  CHECK_THROWS_AS(tuner.complete_call(stale, ticks(1)),
                  OutOfOrderCompletionError);

  tuner.complete_call(action, ticks(1));
  CHECK_THROWS_AS(tuner.complete_call(action, ticks(1)),
                  OutOfOrderCompletionError);
}

TEST_CASE("abort rolls the call back without recording anything") {
  Tuner tuner({"s", "p"}, CandidateSpace::implementation_indices(2), {});
  const Action action = tuner.begin_call();
  tuner.abort_call(action);
  CHECK(tuner.phase() == Phase{PhaseKind::Exploring, 0});
  CHECK(tuner.call_count() == 0);

  // The retry gets the same decision.
  const Action retry = tuner.begin_call();
  CHECK(retry.candidate == 0);
  CHECK(retry.must_compile);
  tuner.complete_call(retry, ticks(5));
  CHECK(tuner.call_count() == 1);
}

TEST_CASE("busy contention signals instead of blocking") {
  TunerConfig config;
  config.contention = Contention::Busy;
  Tuner tuner({"s", "p"}, CandidateSpace::implementation_indices(2), config);

  const Action action = tuner.begin_call();
  CHECK_THROWS_AS(tuner.begin_call(), BusyError);
  tuner.complete_call(action, ticks(1));
  CHECK_NOTHROW(tuner.abort_call(tuner.begin_call()));
}

TEST_CASE("blocking contention serializes calls on one key") {
  Tuner tuner({"s", "p"}, CandidateSpace::implementation_indices(2), {});
  const Action first = tuner.begin_call();

  std::atomic<bool> second_started{false};
  std::atomic<bool> second_finished{false};
  std::thread other([&] {
    second_started = true;
    const Action action = tuner.begin_call(); // blocks until `first` completes
    second_finished = true;
    tuner.complete_call(action, ticks(2));
  });

  while (!second_started) {
    std::this_thread::yield();
  }
  std::this_thread::sleep_for(std::chrono::milliseconds(20));
  CHECK_FALSE(second_finished.load());

  tuner.complete_call(first, ticks(1));
  other.join();
  CHECK(second_finished.load());
  CHECK(tuner.call_count() == 2);
}

TEST_CASE("hammering one key from several threads stays consistent") {
  Tuner tuner({"s", "p"}, CandidateSpace::implementation_indices(3), {});
  constexpr int kThreads = 4;
  constexpr int kCallsPerThread = 25;

  std::vector<std::thread> workers;
  for (int t = 0; t < kThreads; ++t) {
    workers.emplace_back([&] {
      for (int i = 0; i < kCallsPerThread; ++i) {
        const Action action = tuner.begin_call();
        tuner.complete_call(action,
                            ticks(10.0 * (action.candidate + 1)));
      }
    });
  }
  for (auto& worker : workers) {
    worker.join();
  }

  CHECK(tuner.call_count() == kThreads * kCallsPerThread);
  CHECK(tuner.compile_count() == 4); // 3 exploration builds + finalization
  CHECK(tuner.phase() == Phase{PhaseKind::Tuned, 0});
}
