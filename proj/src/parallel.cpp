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

#include "edgeha/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace edgeha {

namespace {

inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

std::uint64_t burn_cpu(std::uint64_t iterations, int threads) {
  const auto n = static_cast<std::int64_t>(iterations);
  std::uint64_t acc = 0;
#ifdef _OPENMP
#pragma omp parallel for num_threads(threads > 0 ? threads : 1) reduction(^ : acc) schedule(static)
#endif
  for (std::int64_t i = 0; i < n; ++i) acc ^= mix(static_cast<std::uint64_t>(i));
  (void)threads;
  return acc;
}

std::uint64_t burn_cpu_serial(std::uint64_t iterations) {
  std::uint64_t acc = 0;
  for (std::uint64_t i = 0; i < iterations; ++i) acc ^= mix(i);
  return acc;
}

}  // namespace edgeha
