#pragma once

#include <cstddef>
#include <functional>

namespace vdc {

// Worker count used by every parallel stage. Defaults to the VDC_THREADS
// environment variable when set, otherwise the hardware concurrency.
std::size_t num_threads();
void set_num_threads(std::size_t n);

// Splits [0, n) into contiguous chunks, one per worker, and calls
// fn(worker, begin, end) for each. Chunk boundaries depend only on n and
// the worker count; callers must write results by index so output never
// depends on scheduling.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  parallel_chunks(n, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) fn(i);
  });
}

}  // namespace vdc
