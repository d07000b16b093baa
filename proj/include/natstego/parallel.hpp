// Copyright 2026 The natstego Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>

namespace natstego {

// Number of worker threads used by data-parallel loops. 0 means "resolve from
// NATSTEGO_THREADS, falling back to 1".
void set_thread_count(int n);
int thread_count();

// Splits [0, n) into contiguous chunks and runs body(begin, end) on up to
// thread_count() threads. Callers must make each index's result independent
// of the chunking.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace natstego
