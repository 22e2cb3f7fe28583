#include "jitune/candidate_space.hpp"

#include <algorithm>
#include <string>

#include "jitune/errors.hpp"

namespace jitune {

CandidateSpace CandidateSpace::parameter_values(std::vector<long long> values) {
  if (values.empty()) {
    throw EmptyCandidateSpaceError("candidate space has no parameter values");
  }
  std::vector<long long> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DuplicateCandidateError("candidate space has duplicate values");
  }
  const int count = static_cast<int>(values.size());
  return CandidateSpace(Kind::ParameterValues, std::move(values), count);
}

CandidateSpace CandidateSpace::implementation_indices(int count) {
  if (count < 1) {
    throw EmptyCandidateSpaceError("implementation count must be at least 1, got " +
                                   std::to_string(count));
  }
  return CandidateSpace(Kind::ImplementationIndices, {}, count);
}

int CandidateSpace::size() const { return count_; }

long long CandidateSpace::value_at(int index) const {
  if (index < 0 || index >= count_) {
    throw Error("candidate index " + std::to_string(index) +
                " out of range [0, " + std::to_string(count_) + ")");
  }
  return kind_ == Kind::ParameterValues ? values_[static_cast<std::size_t>(index)]
                                        : index;
}

int CandidateSpace::index_of(long long value) const {
  if (kind_ == Kind::ImplementationIndices) {
    return value >= 0 && value < count_ ? static_cast<int>(value) : -1;
  }
  const auto it = std::find(values_.begin(), values_.end(), value);
  return it == values_.end() ? -1
                             : static_cast<int>(it - values_.begin());
}

} // namespace jitune
