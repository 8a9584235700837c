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

#include "xplain/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xplain/error.hpp"
#include "xplain/rng.hpp"

namespace xplain::analysis {

void InputSpace::check() const {
  box.check();
  if (!labels.empty() && labels.size() != box.dims()) {
    throw Error(ErrorKind::kInvalidArgument, "label count does not match the input dimension");
  }
}

void ExclusionSet::add(Polytope region) {
  regions_.push_back(std::move(region));
  counts_.push_back(0);
}

std::optional<std::size_t> ExclusionSet::find(const std::vector<double>& x) const {
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (regions_[i].contains(x)) return i;
  }
  return std::nullopt;
}

bool ExclusionSet::reject(const std::vector<double>& x) {
  const auto i = find(x);
  if (!i) return false;
  if (counts_[*i] < cap_) ++counts_[*i];
  return true;
}

namespace {

// Search state shared by both strategies: a budget, the best point so far
// and the optional trace.
class Search {
 public:
  Search(const GapFn& gap_fn, ExclusionSet& ex, std::size_t budget, unsigned threads,
         std::vector<Evaluation>* trace)
      : gap_fn_(gap_fn), ex_(ex), left_(budget), threads_(threads), trace_(trace) {}

  std::size_t left() const { return left_; }
  std::size_t used() const { return used_; }
  const std::optional<Evaluation>& best() const { return best_; }

  // Evaluates a batch in parallel; rejected or over-budget candidates come
  // back as nullopt.
  std::vector<std::optional<double>> evaluate(const std::vector<std::vector<double>>& xs) {
    std::vector<std::optional<double>> out(xs.size());
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < xs.size() && left_ > 0; ++i) {
      --left_;
      ++used_;
      if (!ex_.reject(xs[i])) live.push_back(i);
    }
    std::vector<double> gaps(live.size());
    parallel_for(live.size(), threads_, [&](std::size_t k) { gaps[k] = gap_fn_(xs[live[k]]); });
    for (std::size_t k = 0; k < live.size(); ++k) {
      out[live[k]] = gaps[k];
      record(xs[live[k]], gaps[k]);
    }
    return out;
  }

  std::optional<double> evaluate(const std::vector<double>& x) {
    return evaluate(std::vector<std::vector<double>>{x}).front();
  }

 private:
  void record(const std::vector<double>& x, double g) {
    if (trace_) trace_->push_back({x, g});
    if (!best_ || g > best_->gap) best_ = Evaluation{x, g};
  }

  const GapFn& gap_fn_;
  ExclusionSet& ex_;
  std::size_t left_;
  std::size_t used_ = 0;
  unsigned threads_;
  std::vector<Evaluation>* trace_;
  std::optional<Evaluation> best_;
};

// Largest g with g^n <= budget.
std::size_t grid_points(std::size_t n, std::size_t budget) {
  std::size_t g = 1;
  while (true) {
    double total = 1.0;
    for (std::size_t i = 0; i < n; ++i) total *= static_cast<double>(g + 1);
    if (total > static_cast<double>(budget)) return g;
    ++g;
  }
}

void grid_search(const Box& box, std::size_t g, Search& search) {
  const std::size_t n = box.dims();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= g;
  std::vector<std::vector<double>> xs(total, std::vector<double>(n));
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rem = k;
    for (std::size_t i = n; i-- > 0;) {
      const std::size_t idx = rem % g;
      rem /= g;
      xs[k][i] = box.lo[i] + (box.hi[i] - box.lo[i]) * static_cast<double>(idx) /
                                 static_cast<double>(g - 1);
    }
  }
  search.evaluate(xs);
}

void pattern_search(const Box& box, std::uint64_t seed, std::size_t screen, Search& search) {
  const std::size_t n = box.dims();
  Rng rng(seed, {0x73637265656e});
  std::vector<std::vector<double>> starts(screen, std::vector<double>(n));
  for (auto& x : starts) {
    for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(box.lo[i], box.hi[i]);
  }
  const auto gaps = search.evaluate(starts);
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    if (gaps[k]) order.push_back(k);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return *gaps[a] > *gaps[b]; });

  for (std::size_t k : order) {
    if (search.left() == 0) break;
    std::vector<double> cur = starts[k];
    double cur_gap = *gaps[k];
    for (double step = 0.25; step >= 0.001 && search.left() > 0;) {
      bool improved = false;
      for (std::size_t i = 0; i < n && search.left() > 0; ++i) {
        const double range = box.hi[i] - box.lo[i];
        if (range <= 0.0) continue;
        for (double dir : {1.0, -1.0}) {
          std::vector<double> cand = cur;
          cand[i] = std::clamp(cur[i] + dir * step * range, box.lo[i], box.hi[i]);
          if (cand[i] == cur[i]) continue;
          const auto g = search.evaluate(cand);
          if (g && *g > cur_gap) {
            cur = std::move(cand);
            cur_gap = *g;
            improved = true;
            break;
          }
          if (search.left() == 0) break;
        }
      }
      if (!improved) step /= 2.0;
    }
  }
}

}  // namespace

std::optional<AdversarialPoint> find_adversarial(const InputSpace& space, const GapFn& gap_fn,
                                                 ExclusionSet& exclusions,
                                                 const AnalyzerParams& params,
                                                 std::uint64_t seed,
                                                 std::vector<Evaluation>* trace) {
  space.check();
  if (params.budget == 0) throw Error(ErrorKind::kInvalidArgument, "budget must be > 0");
  Search search(gap_fn, exclusions, params.budget, params.threads, trace);
  const std::size_t n = space.dims();
  std::size_t g = grid_points(n, params.budget);
  if (params.strategy == Strategy::kPatternSearch || (params.strategy == Strategy::kAuto && n > 3)) {
    g = 1;
  }
  if (params.strategy == Strategy::kGrid && g < 2) {
    throw Error(ErrorKind::kInvalidArgument, "budget too small for a grid");
  }
  std::string strategy;
  if (g >= 2) {
    grid_search(space.box, g, search);
    strategy = "grid";
  } else {
    pattern_search(space.box, seed, std::max<std::size_t>(1, params.budget / 2), search);
    strategy = "pattern-search";
  }
  const auto& best = search.best();
  if (!best || !(best->gap >= params.min_gap)) return std::nullopt;
  return AdversarialPoint{best->x, best->gap, strategy, search.used()};
}

nlohmann::json to_json(const AdversarialPoint& p, const std::vector<std::string>& labels) {
  return {{"dimensions", labels},
          {"x", p.x},
          {"gap", p.gap},
          {"strategy", p.strategy},
          {"evaluations", p.evaluations}};
}

}  // namespace xplain::analysis
