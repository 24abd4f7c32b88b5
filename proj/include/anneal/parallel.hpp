// Copyright 2026 anneal-tuner contributors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cstddef>
#include <functional>

namespace anneal {

/// Process-wide cap on worker threads (0 = hardware concurrency).
void set_max_threads(int n);
int max_threads();

/// Run fn(i) for i in [0, n) on up to max_threads() workers with static
/// chunking. Iterations must be independent and write to disjoint slots;
/// results are then identical to the serial loop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace anneal
