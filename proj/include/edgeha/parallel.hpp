// Copyright 2026 The edgeha Authors.
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

// Execution policy for the data-parallel kernels. Every kernel has a serial
// reference path that the parallel path must match exactly.

#ifndef EDGEHA_PARALLEL_HPP_
#define EDGEHA_PARALLEL_HPP_

#include <cstdint>

namespace edgeha {

enum class Exec { kSerial, kParallel };

// OpenMP thread count for kParallel, or 1 without OpenMP.
int max_threads();
bool openmp_enabled();

// Spins `iterations` mixing steps split over `threads` workers and returns a
// checksum that does not depend on the split.
std::uint64_t burn_cpu(std::uint64_t iterations, int threads);
std::uint64_t burn_cpu_serial(std::uint64_t iterations);

}  // namespace edgeha

#endif  // EDGEHA_PARALLEL_HPP_
