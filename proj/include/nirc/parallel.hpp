// Copyright 2026 The nirc Authors.
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

#ifndef NIRC_PARALLEL_HPP_
#define NIRC_PARALLEL_HPP_

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace nirc {

inline int default_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

// Runs fn(i) for i in [0, n) across up to `threads` workers. Iterations must
// write disjoint state; under that contract results are identical for every
// thread count. The first exception thrown by a worker is rethrown.
inline void parallel_for(int n, int threads,
                         const std::function<void(int)>& fn) {
  threads = std::clamp(threads, 1, std::max(1, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        // Static block partition; iteration->thread mapping never affects
        // results because writes are disjoint.
        const int lo = static_cast<int>(static_cast<long long>(n) * t / threads);
        const int hi =
            static_cast<int>(static_cast<long long>(n) * (t + 1) / threads);
        for (int i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace nirc

#endif  // NIRC_PARALLEL_HPP_
