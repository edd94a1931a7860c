// Copyright 2026 The corerank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CORERANK_PARALLEL_HPP_
#define CORERANK_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace corerank {

// Worker count: CORE_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
int WorkerCount();

// Splits [begin, end) into contiguous blocks and calls body(block_begin,
// block_end) once per block, possibly on several threads. Blocks are
// disjoint, so bodies that only write their own outputs stay deterministic
// regardless of the worker count. Nested calls run serially on the caller.
void ParallelFor(std::ptrdiff_t begin, std::ptrdiff_t end,
                 const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& body);

}  // namespace corerank

#endif  // CORERANK_PARALLEL_HPP_
