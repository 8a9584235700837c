// Copyright 2026 The xplain Authors
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

#include <gtest/gtest.h>

#include <set>
#include <stdexcept>
#include <vector>

#include "xplain/rng.hpp"

namespace xplain {
namespace {

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  Rng a(42, {1, 2});
  Rng b(42, {1, 2});
  Rng c(42, {2, 1});
  EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_NE(derive_seed(42, {1, 2}), derive_seed(42, {2, 1}));
  EXPECT_NE(derive_seed(42, {}), derive_seed(43, {}));
  (void)c;
}

TEST(Rng, UniformRanges) {
  Rng r(7);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = r.uniform(-2.0, 3.0);
    ASSERT_GE(v, -2.0);
    ASSERT_LT(v, 3.0);
    seen.insert(r.uniform_int(-1, 3));
  }
  EXPECT_EQ(seen, (std::set<std::int64_t>{-1, 0, 1, 2, 3}));
}

TEST(Rng, ParallelForIsIndexStable) {
  std::vector<double> serial(1000), threaded(1000);
  auto fill = [](std::vector<double>& out) {
    return [&out](std::size_t i) { out[i] = Rng(9, {i}).uniform(); };
  };
  parallel_for(serial.size(), 1, fill(serial));
  parallel_for(threaded.size(), 4, fill(threaded));
  EXPECT_EQ(serial, threaded);
}

TEST(Rng, ParallelForRethrows) {
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 5) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

}  // namespace
}  // namespace xplain
