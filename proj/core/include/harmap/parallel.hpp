#pragma once

#include <cstddef>
#include <functional>

namespace harmap {

/// Splits [0, n) into contiguous chunks run on up to `threads` threads.
/// threads <= 1 runs inline.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body);

/// Thread count from HARMAP_THREADS; 1 when unset or invalid.
int threads_from_env();

}  // namespace harmap
