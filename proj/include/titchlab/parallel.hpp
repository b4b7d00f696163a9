#pragma once

#include <cstddef>
#include <functional>

namespace titchlab {

// Worker count used when a caller passes threads == 0.
void set_default_threads(unsigned threads);
unsigned default_threads();

/// Runs fn(block) for every block in [0, n_blocks) on up to `threads`
/// workers. Blocks are claimed dynamically, so fn must only write to
/// per-block state; callers then merge results in block order.
void parallel_for_blocks(std::size_t n_blocks, unsigned threads,
                         const std::function<void(std::size_t)>& fn);

}  // namespace titchlab
