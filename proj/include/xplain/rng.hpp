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

#ifndef XPLAIN_RNG_HPP_
#define XPLAIN_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>

namespace xplain {

// Mixes a master seed with a list of stream identifiers into an independent
// 64-bit seed. Every random draw in the library goes through a stream derived
// this way, so results never depend on evaluation order or thread count.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> stream);

// Named-substream generator. Draws are produced by mt19937_64; uniform reals
// are built from the top 53 bits so they are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, std::initializer_list<std::uint64_t> stream)
      : engine_(derive_seed(master, stream)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] (inclusive), unbiased via rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

// Runs fn(i) for i in [0, count) on up to `threads` workers. Work is split into
// contiguous blocks; callers write results by index, keeping output ordering
// deterministic regardless of thread count.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace xplain

#endif  // XPLAIN_RNG_HPP_
