#pragma once

#include <condition_variable>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "jitune/candidate_space.hpp"
#include "jitune/metric.hpp"
#include "jitune/tuning_key.hpp"

namespace jitune {

/// How replicate samples of one candidate are folded into its score.
enum class Aggregate { Min, Mean };

/// What a second caller on the same key gets while a call is in flight.
enum class Contention { Block, Busy };

struct TunerConfig {
  /// Measurements taken per candidate before moving to the next one.
  /// 1 reproduces the single-shot protocol exactly.
  int replicates_per_candidate = 1;
  /// Min is robust to transient noise and is the default.
  Aggregate aggregate = Aggregate::Min;
  Contention contention = Contention::Block;
  // Metric direction is fixed: lower is better. Sources must conform.
};

enum class PhaseKind { Exploring, Finalizing, Tuned };

/// Tuning progresses only forward: Exploring(0) .. Exploring(k-1),
/// Finalizing, Tuned(best). Backward only via explicit reset().
struct Phase {
  PhaseKind kind = PhaseKind::Exploring;
  /// Exploring: next candidate to run. Tuned: the frozen winner. -1 otherwise.
  int candidate = 0;

  bool operator==(const Phase& other) const = default;
};

enum class ActionKind {
  /// Run candidate `candidate`; build it first iff must_compile (its first
  /// replicate). Issued only while Exploring.
  ExecuteCandidate,
  /// Rebuild the winning candidate one final time, run it, and cache it.
  /// Issued only while Finalizing.
  CompileBestAndExecute,
  /// Run the cached winner. Issued only once Tuned.
  ExecuteTuned,
};

/// One instruction from begin_call. Must be handed back unchanged to
/// complete_call (or abort_call) before the next call on the same key.
struct Action {
  ActionKind kind = ActionKind::ExecuteCandidate;
  int candidate = 0;
  bool must_compile = false;
  /// Matches a completion to the begin_call that issued it.
  std::uint64_t ticket = 0;
};

struct BestCandidate {
  /// Parameter value for ParameterValues spaces, index for
  /// ImplementationIndices spaces.
  long long value = 0;
  int index = 0;
  /// True once tuning finalized; false while this is only best-so-far.
  bool is_final = false;
};

/// Per-key tuning state machine.
///
/// Usage is a strict begin/complete cycle per call: begin_call() decides
/// which candidate runs and whether it must be built, the caller executes
/// and measures, then complete_call() records the sample and advances the
/// phase. At most one begin/complete pair is in flight per key; concurrent
/// callers on the same key either block or receive BusyError per the
/// configured contention policy. Distinct keys are independent.
///
/// Selection is the argmin of the per-candidate aggregates, ties broken by
/// the lowest candidate index. The winner is frozen when finalization is
/// entered; later samples never change it.
class Tuner {
public:
  Tuner(TuningKey key, CandidateSpace space, TunerConfig config);

  Tuner(const Tuner&) = delete;
  Tuner& operator=(const Tuner&) = delete;

  const TuningKey& key() const { return key_; }
  const CandidateSpace& space() const { return space_; }
  const TunerConfig& config() const { return config_; }

  /// Decides the next action. Blocks (or throws BusyError) while another
  /// call on this key is between begin_call and complete_call.
  Action begin_call();

  /// Records the sample for the action's candidate and advances the phase.
  /// Throws OutOfOrderCompletionError unless `action` is the pending one
  /// issued by the most recent begin_call. Returns the phase after update.
  Phase complete_call(const Action& action, const MetricSample& sample);

  /// Releases an in-flight action without recording anything; the phase is
  /// rolled back to what it was before the matching begin_call.
  void abort_call(const Action& action) noexcept;

  /// The winning candidate once Tuned, otherwise the best measured so far.
  /// Throws NoMeasurementsError before any completed measurement.
  BestCandidate best_candidate() const;

  /// Clears all records and counters and restarts exploration at the first
  /// candidate. Waits for any in-flight call to finish first.
  void reset();

  Phase phase() const;
  std::uint64_t call_count() const;
  std::uint64_t compile_count() const;

  /// Per-candidate aggregate scores; +inf for candidates not yet measured.
  std::vector<double> aggregates() const;

  /// Scratch slot for the variant being explored, so replicates > 1 can
  /// reuse one build. Cleared automatically whenever exploration moves to
  /// another candidate, finalizes, or resets.
  void set_exploration_attachment(std::shared_ptr<void> attachment);
  std::shared_ptr<void> exploration_attachment() const;

private:
  struct CandidateRecord {
    std::uint64_t count = 0;
    double min_value = std::numeric_limits<double>::infinity();
    double sum = 0.0;

    void add(double value);
    double aggregate(Aggregate mode) const;
  };

  int arg_best_locked() const;
  Phase advance_locked(const Action& action);

  TuningKey key_;
  CandidateSpace space_;
  TunerConfig config_;

  mutable std::mutex mutex_;
  std::condition_variable idle_;
  std::optional<Action> pending_;
  std::uint64_t next_ticket_ = 1;

  Phase phase_;
  std::vector<CandidateRecord> records_;
  std::uint64_t call_count_ = 0;
  std::uint64_t compile_count_ = 0;
  std::shared_ptr<void> exploration_attachment_;
};

using TunerHandle = std::shared_ptr<Tuner>;

/// Owns one Tuner per TuningKey. Safe for concurrent callers.
class TunerRegistry {
public:
  /// Registers a fresh tuner. Throws DuplicateKeyError if the key exists.
  TunerHandle create(TuningKey key, CandidateSpace space,
                     TunerConfig config = {});

  /// Returns the existing tuner for (site_id, problem_label) or registers a
  /// fresh one. A changed label at the same site always yields fresh state.
  /// Throws SpaceMismatchError if the key exists with a different space.
  TunerHandle lookup_or_create(std::string_view site_id,
                               std::string_view problem_label,
                               const CandidateSpace& space,
                               const TunerConfig& config = {});

  /// nullptr when absent.
  TunerHandle find(const TuningKey& key) const;

  std::size_t size() const;

private:
  mutable std::mutex mutex_;
  std::unordered_map<TuningKey, TunerHandle, TuningKeyHash> tuners_;
};

} // namespace jitune
