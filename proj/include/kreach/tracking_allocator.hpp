#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace kreach {
namespace memory {

/// Per-thread allocation counters for buffers owned by the Krylov iterations.
struct AllocationStats {
  std::size_t current_bytes = 0;
  std::size_t peak_bytes = 0;
};

AllocationStats& thread_stats();

/// Resets the peak to the current level on construction; peak() reports the
/// high-water mark above that level while the scope is alive.
class AllocationScope {
 public:
  AllocationScope();
  std::size_t peak() const;

 private:
  std::size_t baseline_;
};

template <typename T>
struct TrackingAllocator {
  using value_type = T;

  TrackingAllocator() noexcept = default;
  template <typename U>
  TrackingAllocator(const TrackingAllocator<U>&) noexcept {}

  T* allocate(std::size_t count) {
    T* p = std::allocator<T>{}.allocate(count);
    auto& s = thread_stats();
    s.current_bytes += count * sizeof(T);
    if (s.current_bytes > s.peak_bytes) s.peak_bytes = s.current_bytes;
    return p;
  }

  void deallocate(T* p, std::size_t count) noexcept {
    thread_stats().current_bytes -= count * sizeof(T);
    std::allocator<T>{}.deallocate(p, count);
  }

  template <typename U>
  bool operator==(const TrackingAllocator<U>&) const noexcept { return true; }
};

}  // namespace memory

/// Work vector used inside the Krylov module; its allocations are counted.
using Vector = std::vector<double, memory::TrackingAllocator<double>>;

}  // namespace kreach
