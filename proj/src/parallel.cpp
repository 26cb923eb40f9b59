#include "mmcurv/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <exception>
#include <limits>
#include <mutex>

namespace mmcurv {

namespace {
std::atomic<ExecPolicy> g_policy{ExecPolicy::OpenMP};
std::atomic<int> g_threads{0};
}  // namespace

ExecPolicy default_policy() { return g_policy.load(); }
void set_default_policy(ExecPolicy policy) { g_policy.store(policy); }

void set_thread_count(int n) { g_threads.store(n > 0 ? n : 0); }

int thread_count() {
  const int n = g_threads.load();
  return n > 0 ? n : omp_get_max_threads();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  ExecPolicy policy) {
  if (policy == ExecPolicy::Serial || n < 2 || omp_in_parallel()) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::size_t error_index = std::numeric_limits<std::size_t>::max();
  std::mutex mu;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (static_cast<std::size_t>(i) < error_index) {
        error_index = static_cast<std::size_t>(i);
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace mmcurv
