#pragma once

#include <vector>

namespace jitune {

/// The set of candidates one tuner sweeps over: either a list of integer
/// parameter values (block sizes, strip lengths, ...) or a count of
/// interchangeable implementations addressed by index.
///
/// Exploration visits candidates in exactly the order given here. The space
/// is fixed for the lifetime of a tuner.
class CandidateSpace {
public:
  enum class Kind { ParameterValues, ImplementationIndices };

  /// Throws EmptyCandidateSpaceError for an empty list and
  /// DuplicateCandidateError for repeated values.
  static CandidateSpace parameter_values(std::vector<long long> values);

  /// Throws EmptyCandidateSpaceError when count < 1.
  static CandidateSpace implementation_indices(int count);

  Kind kind() const { return kind_; }

  /// Number of candidates (k).
  int size() const;

  /// The tunable value of candidate i: the parameter value for a
  /// ParameterValues space, the index itself for ImplementationIndices.
  long long value_at(int index) const;

  /// Index of `value` in a ParameterValues space, -1 if absent.
  int index_of(long long value) const;

  const std::vector<long long>& values() const { return values_; }

  bool operator==(const CandidateSpace& other) const = default;

private:
  CandidateSpace(Kind kind, std::vector<long long> values, int count)
      : kind_(kind), values_(std::move(values)), count_(count) {}

  Kind kind_ = Kind::ImplementationIndices;
  std::vector<long long> values_;
  int count_ = 0;
};

} // namespace jitune
