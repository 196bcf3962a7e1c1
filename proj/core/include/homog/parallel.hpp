#ifndef HOMOG_PARALLEL_HPP
#define HOMOG_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace homog {

/// Global cap on worker threads (CLI --threads); 0 means hardware concurrency.
void set_max_threads(int n);
int max_threads();

/// Runs fn(begin, end) over deterministic chunks of [0, n). Chunk boundaries
/// depend only on n and chunk_size, never on the thread count, so reductions
/// that concatenate per-chunk results in chunk order are bit-reproducible.
/// chunk_size == 0 picks a default.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t)>& fn,
                     std::size_t chunk_size = 0);

/// Element-wise parallel loop, fn(i) for i in [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace homog

#endif
