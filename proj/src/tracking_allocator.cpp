#include "kreach/tracking_allocator.hpp"

namespace kreach::memory {

AllocationStats& thread_stats() {
  thread_local AllocationStats stats;
  return stats;
}

AllocationScope::AllocationScope() : baseline_(thread_stats().current_bytes) {
  thread_stats().peak_bytes = baseline_;
}

std::size_t AllocationScope::peak() const { return thread_stats().peak_bytes - baseline_; }

}  // namespace kreach::memory
