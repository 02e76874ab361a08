#pragma once

#include <cstddef>
#include <functional>

namespace pmheat {

/// Worker count for internal loops: PMHEAT_THREADS if set (>= 1),
/// otherwise hardware concurrency capped at 8.
int thread_budget();

/// Run fn(i) for i in [0, count). Static block partition over thread_budget()
/// threads; each index writes only its own slots, so results are deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace pmheat
