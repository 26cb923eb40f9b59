#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace mmcurv {

/// How independent pointwise work is scheduled. Serial is the reference path;
/// OpenMP must produce bit-identical results since every kernel writes into
/// an index-addressed slot and reductions happen afterwards in fixed order.
enum class ExecPolicy { Serial, OpenMP };

ExecPolicy default_policy();
void set_default_policy(ExecPolicy policy);
/// Sets the OpenMP team size; n <= 0 restores the runtime default.
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, n). If any call throws, the exception from the
/// smallest failing index is rethrown after the loop. Nested calls inside an
/// active parallel region run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  ExecPolicy policy = default_policy());

template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn,
                            ExecPolicy policy = default_policy()) {
  std::vector<T> out(n);
  parallel_for(
      n, [&](std::size_t i) { out[i] = fn(i); }, policy);
  return out;
}

}  // namespace mmcurv
