#pragma once

#include <cstddef>
#include <functional>

namespace mcooks {

/// Worker count for the parallel sections of the core. 0 means one worker
/// per hardware thread.
struct Parallelism {
  unsigned threads = 0;

  unsigned resolved() const noexcept;
};

/// Runs body(i) for i in [0, count). Each index is visited exactly once; the
/// first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  Parallelism parallelism = {});

}  // namespace mcooks
