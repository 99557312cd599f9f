#include "coxeter/parallel.hpp"

namespace coxeter {

namespace {
std::atomic<int> configured{0};
}

void set_thread_count(int threads) { configured = std::max(0, threads); }

int thread_count() {
  int t = configured;
  if (t > 0) return t;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace coxeter
