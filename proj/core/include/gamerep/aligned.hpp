#pragma once

#include <cstddef>
#include <new>

namespace gamerep {

/// 64-byte aligned allocator. Numeric buffers all share one alignment so
/// vectorized kernels peel identically on every run; without this, heap
/// placement leaks into floating-point summation order and breaks bitwise
/// reproducibility.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t alignment{64};

  AlignedAllocator() = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), alignment));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, alignment); }

  bool operator==(const AlignedAllocator&) const { return true; }
};

}  // namespace gamerep
