// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DGTD_PARALLEL_HPP
#define DGTD_PARALLEL_HPP

#include <functional>

namespace dgtd
{

/// Runs fn(begin, end) over [0, n) split into `workers` contiguous static
/// chunks. Each index is handled by exactly one call, so results do not depend
/// on the worker count as long as fn writes disjoint outputs.
void parallel_for(int n, int workers, const std::function<void(int, int)> &fn);

}  // namespace dgtd

#endif  // DGTD_PARALLEL_HPP
