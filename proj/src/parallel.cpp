#include "surfnema/parallel.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

namespace surfnema {

int max_threads() {
  static int cached = [] {
    if (const char* env = std::getenv("SURFNEMA_THREADS")) {
      int v = std::atoi(env);
      if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? int(hw) : 1;
  }();
  return cached;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  const int nt = max_threads();
  if (nt <= 1 || n < 1024) {
    fn(0, n);
    return;
  }
  const std::size_t chunks = std::size_t(nt);
  std::vector<std::thread> pool;
  pool.reserve(chunks - 1);
  const std::size_t per = (n + chunks - 1) / chunks;
  for (std::size_t c = 1; c < chunks; ++c) {
    std::size_t b = c * per, e = std::min(n, b + per);
    if (b >= e) break;
    pool.emplace_back(fn, b, e);
  }
  fn(0, std::min(per, n));
  for (auto& t : pool) t.join();
}

}  // namespace surfnema
