// Copyright 2026 The Minimax Forge Authors
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

#ifndef MINIMAX_PARALLEL_H_
#define MINIMAX_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace minimax {

// Number of worker threads to use. MINIMAX_FORGE_THREADS, when set to a
// positive integer, overrides `requested`; 0 means hardware concurrency.
unsigned resolve_threads(unsigned requested);

// Calls body(i) for i in [0, n) on up to `threads` workers. Bodies must only
// write to slots owned by their index; callers reduce in index order.
// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace minimax

#endif  // MINIMAX_PARALLEL_H_
