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


#include <doctest.h>

#include <initializer_list>

#include "edgeha/parallel.hpp"

using namespace edgeha;

TEST_CASE("cpu burn checksum does not depend on the thread count") {
  const auto serial = burn_cpu_serial(100000);
  for (int threads : {1, 2, 3, 4, 8}) CHECK(burn_cpu(100000, threads) == serial);
  CHECK(burn_cpu(0, 4) == 0);
  CHECK(burn_cpu(7, 0) == burn_cpu_serial(7));
}

TEST_CASE("thread reporting") {
  CHECK(max_threads() >= 1);
  if (!openmp_enabled()) CHECK(max_threads() == 1);
}
