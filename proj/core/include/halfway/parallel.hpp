#pragma once

#include <cstddef>
#include <functional>

namespace halfway {

/// Runs body(i) for i in [0, count) on up to `threads` workers. Indices are
/// handed out dynamically, so body must only write to slots owned by i.
/// The exception of the lowest failing index is rethrown after all workers
/// have joined.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace halfway
