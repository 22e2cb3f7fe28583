#include "jitune/tuner.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "jitune/errors.hpp"

namespace jitune {

void Tuner::CandidateRecord::add(double value) {
  ++count;
  min_value = std::min(min_value, value);
  sum += value;
}

double Tuner::CandidateRecord::aggregate(Aggregate mode) const {
  if (count == 0) {
    return std::numeric_limits<double>::infinity();
  }
  return mode == Aggregate::Min ? min_value : sum / static_cast<double>(count);
}

Tuner::Tuner(TuningKey key, CandidateSpace space, TunerConfig config)
    : key_(std::move(key)), space_(std::move(space)), config_(config) {
  if (config_.replicates_per_candidate < 1) {
    throw Error("replicates_per_candidate must be at least 1");
  }
  records_.resize(static_cast<std::size_t>(space_.size()));
  phase_ = Phase{PhaseKind::Exploring, 0};
}

Action Tuner::begin_call() {
  std::unique_lock lock(mutex_);
  if (pending_.has_value()) {
    if (config_.contention == Contention::Busy) {
      throw BusyError("another call on key (" + key_.site_id + ", " +
                      key_.problem_label + ") is in flight");
    }
    idle_.wait(lock, [&] { return !pending_.has_value(); });
  }

  Action action;
  action.ticket = next_ticket_++;
  switch (phase_.kind) {
  case PhaseKind::Exploring: {
    const int candidate = phase_.candidate;
    action.kind = ActionKind::ExecuteCandidate;
    action.candidate = candidate;
    action.must_compile =
        records_[static_cast<std::size_t>(candidate)].count == 0;
    break;
  }
  case PhaseKind::Finalizing:
    action.kind = ActionKind::CompileBestAndExecute;
    action.candidate = arg_best_locked();
    action.must_compile = true;
    break;
  case PhaseKind::Tuned:
    action.kind = ActionKind::ExecuteTuned;
    action.candidate = phase_.candidate;
    action.must_compile = false;
    break;
  }
  pending_ = action;
  return action;
}

Phase Tuner::complete_call(const Action& action, const MetricSample& sample) {
  std::unique_lock lock(mutex_);
  if (!pending_.has_value() || pending_->ticket != action.ticket) {
    throw OutOfOrderCompletionError(
        "completion does not match the pending action");
  }

  records_[static_cast<std::size_t>(action.candidate)].add(sample.value);
  ++call_count_;
  if (action.must_compile) {
    ++compile_count_;
  }
  const Phase after = advance_locked(action);

  pending_.reset();
  lock.unlock();
  idle_.notify_one();
  return after;
}

Phase Tuner::advance_locked(const Action& action) {
  switch (action.kind) {
  case ActionKind::ExecuteCandidate: {
    const auto& record = records_[static_cast<std::size_t>(action.candidate)];
    if (record.count >=
        static_cast<std::uint64_t>(config_.replicates_per_candidate)) {
      exploration_attachment_.reset();
      if (action.candidate + 1 < space_.size()) {
        phase_ = Phase{PhaseKind::Exploring, action.candidate + 1};
      } else {
        phase_ = Phase{PhaseKind::Finalizing, -1};
      }
    }
    break;
  }
  case ActionKind::CompileBestAndExecute:
    // The winner was decided when finalization was entered; the sample just
    // recorded cannot move it.
    phase_ = Phase{PhaseKind::Tuned, action.candidate};
    break;
  case ActionKind::ExecuteTuned:
    break;
  }
  return phase_;
}

void Tuner::abort_call(const Action& action) noexcept {
  {
    std::lock_guard lock(mutex_);
    if (!pending_.has_value() || pending_->ticket != action.ticket) {
      return;
    }
    pending_.reset();
  }
  idle_.notify_one();
}

int Tuner::arg_best_locked() const {
  int best = -1;
  double best_score = std::numeric_limits<double>::infinity();
  for (int i = 0; i < space_.size(); ++i) {
    const auto& record = records_[static_cast<std::size_t>(i)];
    if (record.count == 0) {
      continue;
    }
    const double score = record.aggregate(config_.aggregate);
    if (best < 0 || score < best_score) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

BestCandidate Tuner::best_candidate() const {
  std::lock_guard lock(mutex_);
  if (phase_.kind == PhaseKind::Tuned) {
    return {space_.value_at(phase_.candidate), phase_.candidate, true};
  }
  const int best = arg_best_locked();
  if (best < 0) {
    throw NoMeasurementsError("no completed measurement for key (" +
                              key_.site_id + ", " + key_.problem_label + ")");
  }
  return {space_.value_at(best), best, false};
}

void Tuner::reset() {
  std::unique_lock lock(mutex_);
  idle_.wait(lock, [&] { return !pending_.has_value(); });
  std::fill(records_.begin(), records_.end(), CandidateRecord{});
  phase_ = Phase{PhaseKind::Exploring, 0};
  call_count_ = 0;
  compile_count_ = 0;
  exploration_attachment_.reset();
}

Phase Tuner::phase() const {
  std::lock_guard lock(mutex_);
  return phase_;
}

std::uint64_t Tuner::call_count() const {
  std::lock_guard lock(mutex_);
  return call_count_;
}

std::uint64_t Tuner::compile_count() const {
  std::lock_guard lock(mutex_);
  return compile_count_;
}

std::vector<double> Tuner::aggregates() const {
  std::lock_guard lock(mutex_);
  std::vector<double> scores;
  scores.reserve(records_.size());
  for (const auto& record : records_) {
    scores.push_back(record.aggregate(config_.aggregate));
  }
  return scores;
}

void Tuner::set_exploration_attachment(std::shared_ptr<void> attachment) {
  std::lock_guard lock(mutex_);
  exploration_attachment_ = std::move(attachment);
}

std::shared_ptr<void> Tuner::exploration_attachment() const {
  std::lock_guard lock(mutex_);
  return exploration_attachment_;
}

TunerHandle TunerRegistry::create(TuningKey key, CandidateSpace space,
                                  TunerConfig config) {
  std::lock_guard lock(mutex_);
  if (tuners_.contains(key)) {
    throw DuplicateKeyError("key (" + key.site_id + ", " + key.problem_label +
                            ") is already registered");
  }
  auto tuner = std::make_shared<Tuner>(key, std::move(space), config);
  tuners_.emplace(std::move(key), tuner);
  return tuner;
}

TunerHandle TunerRegistry::lookup_or_create(std::string_view site_id,
                                            std::string_view problem_label,
                                            const CandidateSpace& space,
                                            const TunerConfig& config) {
  TuningKey key{std::string(site_id), std::string(problem_label)};
  std::lock_guard lock(mutex_);
  if (const auto it = tuners_.find(key); it != tuners_.end()) {
    if (!(it->second->space() == space)) {
      throw SpaceMismatchError("key (" + key.site_id + ", " +
                               key.problem_label +
                               ") is registered with a different space");
    }
    return it->second;
  }
  auto tuner = std::make_shared<Tuner>(key, space, config);
  tuners_.emplace(std::move(key), tuner);
  return tuner;
}

TunerHandle TunerRegistry::find(const TuningKey& key) const {
  std::lock_guard lock(mutex_);
  const auto it = tuners_.find(key);
  return it == tuners_.end() ? nullptr : it->second;
}

std::size_t TunerRegistry::size() const {
  std::lock_guard lock(mutex_);
  return tuners_.size();
}

} // namespace jitune
