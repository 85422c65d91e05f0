#pragma once

// Deterministic fan-out of independent trials. Results are stored by trial
// index, so the merged output does not depend on the thread count.

#include <cstddef>
#include <functional>
#include <vector>

namespace rgl {

struct ParallelOptions {
  int threads = 0;          // 0: hardware concurrency
  std::size_t batch = 256;  // trials per scheduling batch
};

int resolve_threads(int requested);

/// Runs fn(i) for i in [0, count) and returns the results in index order.
/// When `stop` is set it is evaluated on the results collected so far after
/// each complete batch; returning true ends the run early. Because batches
/// have a fixed size the cut-off point is independent of the thread count.
template <class T>
std::vector<T> run_indexed(std::size_t count, const std::function<T(std::size_t)>& fn,
                           const ParallelOptions& opts,
                           const std::function<bool(const std::vector<T>&)>& stop = {});

namespace detail {
void run_batch(std::size_t begin, std::size_t end, int threads,
               const std::function<void(std::size_t)>& body);
}

template <class T>
std::vector<T> run_indexed(std::size_t count, const std::function<T(std::size_t)>& fn,
                           const ParallelOptions& opts,
                           const std::function<bool(const std::vector<T>&)>& stop) {
  const int threads = resolve_threads(opts.threads);
  const std::size_t batch = opts.batch == 0 ? count : opts.batch;
  std::vector<T> out;
  out.reserve(count);
  for (std::size_t begin = 0; begin < count; begin += batch) {
    const std::size_t end = std::min(count, begin + batch);
    std::vector<T> chunk(end - begin);
    detail::run_batch(begin, end, threads, [&](std::size_t i) { chunk[i - begin] = fn(i); });
    for (auto& c : chunk) out.push_back(std::move(c));
    if (stop && stop(out)) break;
  }
  return out;
}

}  // namespace rgl
