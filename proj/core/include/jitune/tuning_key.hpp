#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace jitune {

/// Identity of one autotuning problem: a call site plus the label of the
/// parameter being tuned there. Renaming the label at the same site is a new
/// problem — tuning restarts from scratch, old state is never reused.
struct TuningKey {
  std::string site_id;
  std::string problem_label;

  bool operator==(const TuningKey& other) const = default;
};

struct TuningKeyHash {
  std::size_t operator()(const TuningKey& key) const noexcept {
    const std::size_t h1 = std::hash<std::string>{}(key.site_id);
    const std::size_t h2 = std::hash<std::string>{}(key.problem_label);
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
  }
};

} // namespace jitune
