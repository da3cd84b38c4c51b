#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <new>
#include <vector>

#include <fftw3.h>

namespace abfdns {

using Complex = std::complex<double>;

/// Allocator backed by fftw_malloc so every buffer meets FFTW's SIMD
/// alignment and plans can be reused across arrays of the same shape.
template <class T>
struct FftwAllocator {
  using value_type = T;

  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    if (n > std::numeric_limits<std::size_t>::max() / sizeof(T)) {
      throw std::bad_alloc();
    }
    void* p = fftw_malloc(n * sizeof(T));
    if (p == nullptr) {
      throw std::bad_alloc();
    }
    return static_cast<T*>(p);
  }

  void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }

  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept {
    return true;
  }
};

template <class T>
using AlignedVector = std::vector<T, FftwAllocator<T>>;

}  // namespace abfdns
