#pragma once

#include <cstddef>
#include <functional>

namespace qchaos {

/// 0 -> hardware concurrency, otherwise the requested count.
int resolve_workers(int requested);

/// Runs fn(0..count-1) on a shared-nothing worker pool. Task exceptions are
/// rethrown (first one wins) after all workers join; callers that need
/// per-task error capture should catch inside fn.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace qchaos
