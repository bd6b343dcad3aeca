// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#include "dgtd/parallel.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace dgtd
{

void parallel_for(int n, int workers, const std::function<void(int, int)> &fn)
{
  if (n <= 0)
  {
    return;
  }
  workers = std::clamp(workers, 1, n);
  if (workers == 1)
  {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers - 1);
  auto chunk = [&](int w) {
    const int begin = static_cast<int>(static_cast<long>(n) * w / workers);
    const int end = static_cast<int>(static_cast<long>(n) * (w + 1) / workers);
    try
    {
      fn(begin, end);
    }
    catch (...)
    {
      errors[w] = std::current_exception();
    }
  };
  for (int w = 1; w < workers; ++w)
  {
    pool.emplace_back(chunk, w);
  }
  chunk(0);
  for (auto &t : pool)
  {
    t.join();
  }
  for (auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
}

}  // namespace dgtd
