#pragma once

#include <cstddef>
#include <cstdlib>
#include <new>

#include <sys/mman.h>

namespace biasgraph::detail {

// Large blocks are 2 MiB aligned and advised for transparent huge pages;
// the randomly accessed tables of a big run otherwise spend much of their
// time in TLB misses.
template <class T> struct HugePageAllocator {
  using value_type = T;
  static constexpr std::size_t kHugePage = std::size_t{1} << 21;

  HugePageAllocator() = default;
  template <class U> HugePageAllocator(const HugePageAllocator<U> &) noexcept {}

  T *allocate(std::size_t count) {
    const std::size_t bytes = count * sizeof(T);
    if (bytes < kHugePage) {
      return static_cast<T *>(::operator new(bytes, std::align_val_t{alignof(T)}));
    }
    const std::size_t rounded = (bytes + kHugePage - 1) / kHugePage * kHugePage;
    void *p = std::aligned_alloc(kHugePage, rounded);
    if (p == nullptr)
      throw std::bad_alloc();
    ::madvise(p, rounded, MADV_HUGEPAGE);
    return static_cast<T *>(p);
  }

  void deallocate(T *p, std::size_t count) noexcept {
    if (count * sizeof(T) < kHugePage)
      ::operator delete(p, std::align_val_t{alignof(T)});
    else
      std::free(p);
  }

  template <class U> bool operator==(const HugePageAllocator<U> &) const noexcept {
    return true;
  }
};

} // namespace biasgraph::detail
