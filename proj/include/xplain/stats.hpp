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

#ifndef XPLAIN_STATS_HPP_
#define XPLAIN_STATS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "xplain/region.hpp"

namespace xplain::stats {

// Samples needed for the empirical CDF to be within epsilon of the true CDF
// with probability 1 - delta: ceil(ln(2 / delta) / (2 epsilon^2)).
std::size_t dkw_samples(double epsilon, double delta);

enum class Alternative { kGreater, kLess, kTwoSided };
enum class Method { kAuto, kExact, kNormal };

inline constexpr std::size_t kExactWilcoxonLimit = 20;
inline constexpr std::size_t kExactKendallLimit = 10;

struct WilcoxonResult {
  std::size_t n = 0;  // nonzero differences
  double w = 0.0;     // sum of positive ranks
  double p = 1.0;
  std::string method;
};

// Zeros dropped, midranks for ties. Exact null distribution for n <= 20
// (unless forced), else the normal approximation with tie-corrected variance
// and a 0.5 continuity correction. Throws AllZero.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& differences,
                                    Alternative alternative = Alternative::kGreater,
                                    Method method = Method::kAuto);

struct TrendResult {
  std::size_t n = 0;
  double tau = 0.0;
  double p = 1.0;
  std::string method;
};

// Kendall tau-b between feature and gap. Exact permutation p for n <= 10,
// else the tie-corrected normal approximation.
TrendResult kendall_trend(const std::vector<std::pair<double, double>>& pairs,
                          Alternative alternative = Alternative::kGreater,
                          Method method = Method::kAuto);

double normal_cdf(double z);

using GapFn = std::function<double(const std::vector<double>&)>;

struct SignificanceParams {
  std::size_t n_pairs = 185;
  double margin = 0.025;  // fraction of the mean dimension range
  double alpha = 0.05;
  unsigned threads = 1;
};

// Pairs points drawn uniformly inside `region` with reflections across the
// nearest crossable facet (pushed a further `margin` outside, clipped to the
// space) and runs a one-sided Wilcoxon test on gap_in - gap_out. Throws
// SamplingFailure when fewer than 1% of 10 * n_pairs pilot draws land inside.
SignificanceReport check_significance(const Polytope& region, const Box& space,
                                      const GapFn& gap_fn, const SignificanceParams& params,
                                      std::uint64_t seed);

}  // namespace xplain::stats

#endif  // XPLAIN_STATS_HPP_
