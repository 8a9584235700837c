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

#ifndef XPLAIN_SUBSPACE_GEN_HPP_
#define XPLAIN_SUBSPACE_GEN_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "xplain/analyzer.hpp"
#include "xplain/region.hpp"
#include "xplain/stats.hpp"

namespace xplain::subspace {

using GapFn = analysis::GapFn;

// Fractions are of each dimension's range.
struct GrowParams {
  double w0 = 0.02;      // half-width of the starting cube
  double delta = 0.05;   // shell thickness
  double rho_min = 0.5;  // bad density needed to keep expanding
  double gamma = 0.5;    // bad sample: gap >= gamma * seed gap
  std::size_t n_shell = 185;
  unsigned threads = 1;
};

struct Sample {
  std::vector<double> x;
  double gap = 0.0;
};

// One of the 2n axis directions.
struct Direction {
  std::size_t dim = 0;
  bool upper = true;
  std::size_t steps = 0;  // shells accepted so far
  double density = 0.0;   // bad fraction of the last sampled shell
  bool frozen = false;
};

struct RoughSubspace {
  Box box;
  std::vector<Sample> samples;  // starting cube first, then shells in sampling order
  std::vector<Direction> directions;
  std::size_t rounds = 0;
};

// Expands a cube around the seed one shell at a time. In each round every
// unfrozen direction samples n_shell points in the slab just beyond its face;
// directions whose bad density reaches rho_min grow by delta, the rest
// freeze, as do directions that reach the space boundary.
RoughSubspace grow_rough_subspace(const std::vector<double>& seed, double seed_gap,
                                  const Box& space, const GapFn& gap_fn,
                                  const GrowParams& params, std::uint64_t rng_seed);

struct TreeParams {
  std::size_t max_depth = 4;
  std::size_t min_leaf = 30;
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1;  // feature <= threshold
  int right = -1;
  double mean = 0.0;
  std::size_t count = 0;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::size_t num_features = 0;

  std::size_t leaf_of(const std::vector<double>& features) const;
  std::size_t leaves() const;
  std::size_t depth() const;
};

// Raw inputs followed by their sum.
std::vector<double> tree_features(const std::vector<double>& x);
std::vector<std::string> tree_feature_names(const std::vector<std::string>& labels);

// CART with squared-error splits at midpoints of adjacent distinct values.
// Ties go to the lowest feature index, then the lowest threshold. Throws
// DegenerateData on an empty sample set.
RegressionTree fit_regression_tree(const std::vector<std::vector<double>>& features,
                                   const std::vector<double>& targets, const TreeParams& params);

struct PathRows {
  std::vector<std::vector<double>> t;
  std::vector<double> v;
};

// Rows t.x <= v for the splits between the root and the seed's leaf, over
// the tree_features of an n-dimensional input. Repeated splits on the same
// feature and side keep only the tightest.
PathRows extract_path_predicates(const RegressionTree& tree, const std::vector<double>& seed);

// grow_rough_subspace + tree refinement around one seed; sample statistics
// cover the growth samples inside the result. Significance is left unset.
Subspace build_subspace(const std::vector<double>& seed, double seed_gap, const Box& space,
                        const GapFn& gap_fn, const GrowParams& grow, const TreeParams& tree,
                        std::uint64_t rng_seed, Box* rough_box = nullptr);

struct GenerateParams {
  analysis::AnalyzerParams analyzer;
  GrowParams grow;
  TreeParams tree;
  stats::SignificanceParams significance;
  std::size_t revisit_cap = 3;
  std::size_t max_subspaces = 8;
  std::size_t max_attempts = 16;
};

struct GenerateResult {
  std::vector<Subspace> subspaces;  // significant, in discovery order
  std::vector<Subspace> rejected;   // candidates that failed the check
  std::size_t attempts = 0;
  bool exhausted = false;  // the analyzer found nothing more
};

// Analyzer -> rough box -> tree refinement -> significance check, repeated
// with exclusions. Significant candidates exclude their rough box; rejected
// ones exclude a cube of half-width delta around their seed.
GenerateResult generate_subspaces(const analysis::InputSpace& space, const GapFn& gap_fn,
                                  const GenerateParams& params, std::uint64_t seed);

nlohmann::json to_json(const RegressionTree& tree, const std::vector<std::string>& feature_names);
nlohmann::json to_json(const GenerateResult& r, const std::vector<std::string>& labels);

}  // namespace xplain::subspace

#endif  // XPLAIN_SUBSPACE_GEN_HPP_
