#pragma once

#include <chrono>
#include <cstdint>

#if defined(__x86_64__) || defined(_M_X64)
#include <x86intrin.h>
#endif

namespace jitune {

using Ticks = std::uint64_t;

/// Reads the default high-resolution tick counter.
///
/// On x86-64 this is the TSC, read behind an lfence so the count is ordered
/// after preceding loads. Within one thread on invariant-TSC hardware the
/// sequence of reads is non-decreasing; we document that guarantee rather
/// than cycle-exactness. Elsewhere the steady clock's nanosecond count is
/// used, which is monotonic by definition.
inline Ticks read_ticks() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
  _mm_lfence();
  return __rdtsc();
#else
  return static_cast<Ticks>(
      std::chrono::steady_clock::now().time_since_epoch().count());
#endif
}

/// Spins until at least `duration` ticks have elapsed. Test and simulation
/// helper; burns CPU on purpose.
inline void busy_wait_ticks(Ticks duration) noexcept {
  const Ticks start = read_ticks();
  while (read_ticks() - start < duration) {
  }
}

} // namespace jitune
