#pragma once

#include <cstddef>
#include <functional>

namespace webgeo {

// Worker count: WEBGEO_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t thread_count();

// Runs body(block) for block in [0, blocks). Blocks are distributed over
// thread_count() workers; callers own per-block state and reduce it in block
// order afterwards, so results never depend on the worker count.
void parallel_blocks(std::size_t blocks, const std::function<void(std::size_t)>& body);

}  // namespace webgeo
