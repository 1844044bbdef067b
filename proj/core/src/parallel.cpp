#include "ltd/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace ltd {

int worker_count() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char *env = std::getenv("LTD_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0) n = std::min(n, cap);
    } catch (const std::exception &) {
      // ignore malformed values
    }
  }
  return n;
}

void parallel_for(Index n, const std::function<void(Index)> &body) {
  const Index workers = std::min<Index>(worker_count(), n);
  if (workers <= 1) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
  pool.reserve(static_cast<std::size_t>(workers - 1));
  auto run = [&](Index w) {
    try {
      for (Index i = w; i < n; i += workers) body(i);
    } catch (...) {
      failures[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };
  for (Index w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto &t : pool) t.join();
  for (auto &f : failures)
    if (f) std::rethrow_exception(f);
}

} // namespace ltd
