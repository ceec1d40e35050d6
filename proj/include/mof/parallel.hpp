// Copyright 2026 The MOF Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MOF__PARALLEL_HPP_
#define MOF__PARALLEL_HPP_

#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <vector>

#include <omp.h>

namespace mof
{

/// Serial paths are the reference implementation the parallel kernels are tested against.
enum class Execution { serial, parallel };

/// Sets the OpenMP worker count; 0 keeps the runtime default.
inline void set_worker_count(int workers)
{
  if (workers > 0) omp_set_num_threads(workers);
}

inline int worker_count() { return omp_get_max_threads(); }

/**
 * @brief out[i] = fn(i) for i in [0, n).
 *
 * Each slot is written by exactly one iteration, so the result does not
 * depend on scheduling. The first exception thrown by any iteration is
 * rethrown on the calling thread.
 */
template <class Result, class Fn>
std::vector<Result> parallel_map(std::size_t n, Fn && fn, Execution exec)
{
  std::vector<Result> out(n);
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace mof

#endif  // MOF__PARALLEL_HPP_
