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

#include "xplain/subspace_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xplain/error.hpp"
#include "xplain/rng.hpp"

namespace xplain::subspace {

namespace {

std::vector<double> draw(Rng& rng, const std::vector<double>& lo, const std::vector<double>& hi) {
  std::vector<double> x(lo.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(lo[i], hi[i]);
  return x;
}

}  // namespace

RoughSubspace grow_rough_subspace(const std::vector<double>& seed, double seed_gap,
                                  const Box& space, const GapFn& gap_fn,
                                  const GrowParams& params, std::uint64_t rng_seed) {
  space.check();
  const std::size_t n = space.dims();
  if (seed.size() != n || !space.contains(seed)) {
    throw Error(ErrorKind::kInvalidArgument, "seed lies outside the input space");
  }
  if (!(params.delta > 0.0) || !(params.w0 >= 0.0) || params.n_shell == 0) {
    throw Error(ErrorKind::kInvalidArgument, "invalid growth parameters");
  }
  const double bad_at = params.gamma * seed_gap;
  std::vector<double> range(n);
  for (std::size_t i = 0; i < n; ++i) range[i] = space.hi[i] - space.lo[i];

  RoughSubspace out;
  out.box = space;
  for (std::size_t i = 0; i < n; ++i) {
    out.box.lo[i] = std::max(space.lo[i], seed[i] - params.w0 * range[i]);
    out.box.hi[i] = std::min(space.hi[i], seed[i] + params.w0 * range[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.directions.push_back({i, true});
    out.directions.push_back({i, false});
  }

  auto evaluate = [&](std::vector<std::vector<double>> xs) {
    std::vector<double> gaps(xs.size());
    parallel_for(xs.size(), params.threads, [&](std::size_t k) { gaps[k] = gap_fn(xs[k]); });
    std::vector<Sample> s(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) s[k] = {std::move(xs[k]), gaps[k]};
    return s;
  };

  {
    std::vector<std::vector<double>> xs;
    for (std::size_t k = 0; k < params.n_shell; ++k) {
      Rng rng(rng_seed, {2 * n, 0, k});
      xs.push_back(draw(rng, out.box.lo, out.box.hi));
    }
    out.samples = evaluate(std::move(xs));
  }

  while (true) {
    // Shell geometry for this round, against the box as it stood at the start.
    std::vector<std::size_t> active;
    std::vector<Box> shells;
    std::vector<std::vector<double>> xs;
    for (std::size_t d = 0; d < out.directions.size(); ++d) {
      Direction& dir = out.directions[d];
      if (dir.frozen) continue;
      const std::size_t i = dir.dim;
      Box shell = out.box;
      if (dir.upper) {
        shell.lo[i] = out.box.hi[i];
        shell.hi[i] = std::min(space.hi[i], out.box.hi[i] + params.delta * range[i]);
      } else {
        shell.hi[i] = out.box.lo[i];
        shell.lo[i] = std::max(space.lo[i], out.box.lo[i] - params.delta * range[i]);
      }
      if (!(shell.hi[i] > shell.lo[i])) {
        dir.frozen = true;
        continue;
      }
      active.push_back(d);
      shells.push_back(shell);
      for (std::size_t k = 0; k < params.n_shell; ++k) {
        Rng rng(rng_seed, {d, dir.steps + 1, k});
        xs.push_back(draw(rng, shell.lo, shell.hi));
      }
    }
    if (active.empty()) break;
    ++out.rounds;
    std::vector<Sample> batch = evaluate(std::move(xs));
    for (std::size_t a = 0; a < active.size(); ++a) {
      Direction& dir = out.directions[active[a]];
      std::size_t bad = 0;
      for (std::size_t k = 0; k < params.n_shell; ++k) {
        bad += batch[a * params.n_shell + k].gap >= bad_at;
      }
      dir.density = static_cast<double>(bad) / static_cast<double>(params.n_shell);
      if (dir.density >= params.rho_min) {
        ++dir.steps;
      } else {
        dir.frozen = true;
        shells[a].lo.clear();  // marks "do not apply"
      }
    }
    for (std::size_t a = 0; a < active.size(); ++a) {
      if (shells[a].lo.empty()) continue;
      const Direction& dir = out.directions[active[a]];
      if (dir.upper) {
        out.box.hi[dir.dim] = shells[a].hi[dir.dim];
      } else {
        out.box.lo[dir.dim] = shells[a].lo[dir.dim];
      }
    }
    out.samples.insert(out.samples.end(), std::make_move_iterator(batch.begin()),
                       std::make_move_iterator(batch.end()));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> tree_features(const std::vector<double>& x) {
  std::vector<double> f = x;
  f.push_back(std::accumulate(x.begin(), x.end(), 0.0));
  return f;
}

std::vector<std::string> tree_feature_names(const std::vector<std::string>& labels) {
  std::vector<std::string> f = labels;
  f.push_back("sum");
  return f;
}

std::size_t RegressionTree::leaf_of(const std::vector<double>& features) const {
  std::size_t k = 0;
  while (nodes[k].feature >= 0) {
    const TreeNode& nd = nodes[k];
    k = static_cast<std::size_t>(features[nd.feature] <= nd.threshold ? nd.left : nd.right);
  }
  return k;
}

std::size_t RegressionTree::leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.feature < 0; }));
}

std::size_t RegressionTree::depth() const {
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t best = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    best = std::max(best, d[k]);
    if (nodes[k].feature >= 0) {
      d[nodes[k].left] = d[k] + 1;
      d[nodes[k].right] = d[k] + 1;
    }
  }
  return best;
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<std::vector<double>>& f, const std::vector<double>& y,
              const TreeParams& p)
      : f_(f), y_(y), p_(p) {}

  int build(std::vector<std::size_t> idx, std::size_t depth, RegressionTree& tree) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    double mean = 0.0;
    for (std::size_t i : idx) mean += y_[i];
    mean /= static_cast<double>(idx.size());
    tree.nodes[id].mean = mean;
    tree.nodes[id].count = idx.size();
    if (depth >= p_.max_depth || idx.size() < 2 * std::max<std::size_t>(p_.min_leaf, 1)) {
      return id;
    }
    double sse = 0.0;
    for (std::size_t i : idx) sse += (y_[i] - mean) * (y_[i] - mean);
    if (sse <= 1e-12 * std::max(1.0, mean * mean) * static_cast<double>(idx.size())) return id;

    const std::size_t nf = f_.front().size();
    const std::size_t m = idx.size();
    const std::size_t min_leaf = std::max<std::size_t>(p_.min_leaf, 1);
    double best_gain = 1e-12 * sse;
    int best_f = -1;
    double best_t = 0.0;
    std::vector<std::size_t> order = idx;
    for (std::size_t fi = 0; fi < nf; ++fi) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return f_[a][fi] < f_[b][fi]; });
      // Centered sums keep the gain well conditioned.
      double total = 0.0;
      for (std::size_t i : order) total += y_[i] - mean;
      double left = 0.0;
      for (std::size_t k = 1; k < m; ++k) {
        left += y_[order[k - 1]] - mean;
        if (k < min_leaf || m - k < min_leaf) continue;
        const double a = f_[order[k - 1]][fi];
        const double b = f_[order[k]][fi];
        if (!(a < b)) continue;
        const double right = total - left;
        const double nl = static_cast<double>(k);
        const double nr = static_cast<double>(m - k);
        const double gain = left * left / nl + right * right / nr - total * total / m;
        if (gain > best_gain) {
          best_gain = gain;
          best_f = static_cast<int>(fi);
          best_t = a + (b - a) / 2.0;
        }
      }
    }
    if (best_f < 0) return id;
    std::vector<std::size_t> l, r;
    for (std::size_t i : idx) (f_[i][best_f] <= best_t ? l : r).push_back(i);
    tree.nodes[id].feature = best_f;
    tree.nodes[id].threshold = best_t;
    const int li = build(std::move(l), depth + 1, tree);
    tree.nodes[id].left = li;
    const int ri = build(std::move(r), depth + 1, tree);
    tree.nodes[id].right = ri;
    return id;
  }

 private:
  const std::vector<std::vector<double>>& f_;
  const std::vector<double>& y_;
  const TreeParams& p_;
};

}  // namespace

RegressionTree fit_regression_tree(const std::vector<std::vector<double>>& features,
                                   const std::vector<double>& targets, const TreeParams& params) {
  if (features.empty()) throw Error(ErrorKind::kDegenerateData, "no samples to fit");
  if (features.size() != targets.size()) {
    throw Error(ErrorKind::kInvalidArgument, "feature and target counts differ");
  }
  for (const auto& f : features) {
    if (f.size() != features.front().size()) {
      throw Error(ErrorKind::kInvalidArgument, "ragged feature rows");
    }
  }
  RegressionTree tree;
  tree.num_features = features.front().size();
  std::vector<std::size_t> idx(features.size());
  std::iota(idx.begin(), idx.end(), 0);
  TreeBuilder(features, targets, params).build(std::move(idx), 0, tree);
  return tree;
}

PathRows extract_path_predicates(const RegressionTree& tree, const std::vector<double>& seed) {
  const std::vector<double> f = tree_features(seed);
  if (f.size() != tree.num_features) {
    throw Error(ErrorKind::kInvalidArgument, "seed dimension does not match the tree");
  }
  const std::size_t n = seed.size();
  struct Cut {
    int feature;
    bool upper;  // feature <= threshold
    double threshold;
  };
  std::vector<Cut> cuts;
  for (std::size_t k = 0; tree.nodes[k].feature >= 0;) {
    const TreeNode& nd = tree.nodes[k];
    const bool upper = f[nd.feature] <= nd.threshold;
    auto same = std::find_if(cuts.begin(), cuts.end(), [&](const Cut& c) {
      return c.feature == nd.feature && c.upper == upper;
    });
    if (same == cuts.end()) {
      cuts.push_back({nd.feature, upper, nd.threshold});
    } else {
      same->threshold = upper ? std::min(same->threshold, nd.threshold)
                              : std::max(same->threshold, nd.threshold);
    }
    k = static_cast<std::size_t>(upper ? nd.left : nd.right);
  }
  PathRows rows;
  for (const Cut& c : cuts) {
    std::vector<double> t(n, 0.0);
    if (static_cast<std::size_t>(c.feature) == n) {
      std::fill(t.begin(), t.end(), 1.0);
    } else {
      t[c.feature] = 1.0;
    }
    double v = c.threshold;
    if (!c.upper) {
      for (double& a : t) a = a == 0.0 ? 0.0 : -a;
      v = -v;
    }
    rows.t.push_back(std::move(t));
    rows.v.push_back(v);
  }
  return rows;
}

// ---------------------------------------------------------------------------

Subspace build_subspace(const std::vector<double>& seed, double seed_gap, const Box& space,
                        const GapFn& gap_fn, const GrowParams& grow, const TreeParams& tree_params,
                        std::uint64_t rng_seed, Box* rough_box) {
  const RoughSubspace rough = grow_rough_subspace(seed, seed_gap, space, gap_fn, grow, rng_seed);
  std::vector<std::vector<double>> feats;
  std::vector<double> gaps;
  for (const Sample& s : rough.samples) {
    feats.push_back(tree_features(s.x));
    gaps.push_back(s.gap);
  }
  // The seed is a measured point too. Without it a seed sitting on a gap
  // discontinuity can land on the wrong side of a midpoint threshold.
  feats.push_back(tree_features(seed));
  gaps.push_back(seed_gap);
  const RegressionTree tree = fit_regression_tree(feats, gaps, tree_params);
  PathRows rows = extract_path_predicates(tree, seed);

  Subspace out;
  out.polytope = Polytope::from_box(rough.box);
  out.polytope.t = std::move(rows.t);
  out.polytope.v = std::move(rows.v);
  out.seed = seed;
  out.seed_gap = seed_gap;
  const double bad_at = grow.gamma * seed_gap;
  double gap_sum = 0.0;
  std::size_t bad = 0;
  for (const Sample& s : rough.samples) {
    if (!out.polytope.contains(s.x)) continue;
    ++out.sample_count;
    gap_sum += s.gap;
    bad += s.gap >= bad_at;
  }
  if (out.sample_count > 0) {
    out.bad_fraction = static_cast<double>(bad) / static_cast<double>(out.sample_count);
    out.mean_gap = gap_sum / static_cast<double>(out.sample_count);
  }
  if (rough_box) *rough_box = rough.box;
  return out;
}

GenerateResult generate_subspaces(const analysis::InputSpace& space, const GapFn& gap_fn,
                                  const GenerateParams& params, std::uint64_t seed) {
  space.check();
  const Box& box = space.box;
  analysis::ExclusionSet exclusions(params.revisit_cap);
  GenerateResult out;
  while (out.attempts < params.max_attempts && out.subspaces.size() < params.max_subspaces) {
    const std::uint64_t a = out.attempts++;
    const auto point = analysis::find_adversarial(space, gap_fn, exclusions, params.analyzer,
                                                  derive_seed(seed, {1, a}));
    if (!point) {
      out.exhausted = true;
      break;
    }
    Box rough_box;
    Subspace cand = build_subspace(point->x, point->gap, box, gap_fn, params.grow, params.tree,
                                   derive_seed(seed, {2, a}), &rough_box);

    SignificanceReport report;
    report.alpha = params.significance.alpha;
    try {
      report = stats::check_significance(cand.polytope, box, gap_fn, params.significance,
                                         derive_seed(seed, {3, a}));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kSamplingFailure) throw;
      report.method = "sampling-failure";
    }
    cand.significance = report;

    const bool duplicate = std::any_of(out.subspaces.begin(), out.subspaces.end(),
                                       [&](const Subspace& s) { return s.polytope == cand.polytope; });
    if (report.keep && !duplicate) {
      exclusions.add(Polytope::from_box(rough_box));
      out.subspaces.push_back(std::move(cand));
    } else {
      Box ball = box;
      for (std::size_t i = 0; i < box.dims(); ++i) {
        const double r = params.grow.delta * (box.hi[i] - box.lo[i]);
        ball.lo[i] = std::max(box.lo[i], point->x[i] - r);
        ball.hi[i] = std::min(box.hi[i], point->x[i] + r);
      }
      exclusions.add(Polytope::from_box(ball));
      out.rejected.push_back(std::move(cand));
    }
  }
  return out;
}

nlohmann::json to_json(const RegressionTree& tree, const std::vector<std::string>& names) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const TreeNode& n : tree.nodes) {
    nlohmann::json j = {{"mean", n.mean}, {"count", n.count}};
    if (n.feature >= 0) {
      j["feature"] = static_cast<std::size_t>(n.feature) < names.size() ? names[n.feature]
                                                                        : std::to_string(n.feature);
      j["threshold"] = n.threshold;
      j["left"] = n.left;
      j["right"] = n.right;
    }
    nodes.push_back(std::move(j));
  }
  return {{"nodes", nodes}};
}

nlohmann::json to_json(const GenerateResult& r, const std::vector<std::string>& labels) {
  nlohmann::json subs = nlohmann::json::array();
  for (const Subspace& s : r.subspaces) subs.push_back(to_json(s, labels));
  nlohmann::json rej = nlohmann::json::array();
  for (const Subspace& s : r.rejected) rej.push_back(to_json(s, labels));
  return {{"subspaces", subs},
          {"rejected", rej},
          {"attempts", r.attempts},
          {"exhausted", r.exhausted},
          {"multiple_testing", "uncorrected; each p value is for its own subspace"}};
}

}  // namespace xplain::subspace
