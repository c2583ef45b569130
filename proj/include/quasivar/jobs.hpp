#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <future>
#include <string>
#include <vector>

namespace quasivar {

// Worker count: explicit value, else QUASIVAR_JOBS, else 1.
inline int resolve_jobs(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QUASIVAR_JOBS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

inline int& default_jobs() {
  static int jobs = resolve_jobs();
  return jobs;
}

// Runs f(0..n-1) on up to `jobs` threads; results come back in index order,
// so callers see the same output for any job count.
template <class T>
std::vector<T> parallel_map(int n, const std::function<T(int)>& f, int jobs = default_jobs()) {
  std::vector<T> out(n);
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  int workers = std::min(jobs, n);
  std::vector<std::future<void>> running;
  for (int w = 0; w < workers; ++w)
    running.push_back(std::async(std::launch::async, [&, w] {
      for (int i = w; i < n; i += workers) out[i] = f(i);
    }));
  for (auto& r : running) r.get();
  return out;
}

}  // namespace quasivar
