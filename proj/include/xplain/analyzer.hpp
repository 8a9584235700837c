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

#ifndef XPLAIN_ANALYZER_HPP_
#define XPLAIN_ANALYZER_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "xplain/region.hpp"

namespace xplain::analysis {

struct InputSpace {
  Box box;
  std::vector<std::string> labels;

  std::size_t dims() const { return box.dims(); }
  // Throws InvalidArgument on an empty or inverted box or a label count
  // that does not match.
  void check() const;
};

struct AdversarialPoint {
  std::vector<double> x;
  double gap = 0.0;
  std::string strategy;  // "grid" or "pattern-search"
  std::size_t evaluations = 0;
};

// Regions the analyzer must stay out of. Every rejected candidate bumps the
// counter of the first region containing it; a region whose counter reaches
// the cap is reported as permanent. Rejection itself never depends on the
// counters, so returned points are always outside every region.
class ExclusionSet {
 public:
  explicit ExclusionSet(std::size_t revisit_cap = 3) : cap_(revisit_cap) {}

  void add(Polytope region);
  // Index of the first region containing x.
  std::optional<std::size_t> find(const std::vector<double>& x) const;
  // find() plus counter update.
  bool reject(const std::vector<double>& x);

  std::size_t size() const { return regions_.size(); }
  const Polytope& region(std::size_t i) const { return regions_[i]; }
  std::size_t revisits(std::size_t i) const { return counts_[i]; }
  bool permanent(std::size_t i) const { return counts_[i] >= cap_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
  std::vector<Polytope> regions_;
  std::vector<std::size_t> counts_;
};

enum class Strategy { kAuto, kGrid, kPatternSearch };

struct AnalyzerParams {
  std::size_t budget = 2000;  // gap evaluations, rejected candidates included
  double min_gap = 1.0;
  unsigned threads = 1;
  Strategy strategy = Strategy::kAuto;
};

struct Evaluation {
  std::vector<double> x;
  double gap = 0.0;
};

using GapFn = std::function<double(const std::vector<double>&)>;

// Grid search when n <= 3 and a grid with at least two points per dimension
// fits the budget; otherwise half the budget goes to uniform screening and
// the rest to coordinate pattern search from the best screened points (step
// halving from 25% to 0.1% of each range). Ties go to the earliest candidate.
// nullopt when nothing outside the exclusions reaches min_gap. When `trace`
// is set every evaluated point is appended in evaluation order.
std::optional<AdversarialPoint> find_adversarial(const InputSpace& space, const GapFn& gap_fn,
                                                 ExclusionSet& exclusions,
                                                 const AnalyzerParams& params,
                                                 std::uint64_t seed,
                                                 std::vector<Evaluation>* trace = nullptr);

nlohmann::json to_json(const AdversarialPoint& p, const std::vector<std::string>& labels);

}  // namespace xplain::analysis

#endif  // XPLAIN_ANALYZER_HPP_
