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

#include "xplain/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "xplain/error.hpp"
#include "xplain/rng.hpp"

namespace xplain::stats {

std::size_t dkw_samples(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "epsilon must lie in (0, 1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "delta must lie in (0, 1)");
  }
  const double n = std::log(2.0 / delta) / (2.0 * epsilon * epsilon);
  // Guard against 184.99999999 style round-off on exact integers.
  const double r = std::round(n);
  return static_cast<std::size_t>(std::fabs(n - r) < 1e-9 ? r : std::ceil(n));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

double combine(double greater, double less, Alternative alt) {
  switch (alt) {
    case Alternative::kGreater: return greater;
    case Alternative::kLess: return less;
    case Alternative::kTwoSided: return std::min(1.0, 2.0 * std::min(greater, less));
  }
  return 1.0;
}

// Midranks of the values (1-based), plus tie group sizes.
std::vector<double> midranks(const std::vector<double>& values, std::vector<std::size_t>* ties) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    if (ties && j > i) ties->push_back(j - i + 1);
    i = j + 1;
  }
  return ranks;
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& differences,
                                    Alternative alternative, Method method) {
  std::vector<double> d;
  for (double v : differences) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kInvalidArgument, "non-finite difference");
    if (v != 0.0) d.push_back(v);
  }
  if (d.empty()) throw Error(ErrorKind::kAllZero, "every difference is zero");
  const std::size_t n = d.size();
  std::vector<double> abs(n);
  for (std::size_t i = 0; i < n; ++i) abs[i] = std::fabs(d[i]);
  std::vector<std::size_t> ties;
  const std::vector<double> ranks = midranks(abs, &ties);

  WilcoxonResult out;
  out.n = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] > 0) out.w += ranks[i];
  }

  const bool exact = method == Method::kExact ||
                     (method == Method::kAuto && n <= kExactWilcoxonLimit);
  if (exact) {
    // Null distribution of the doubled statistic; doubled midranks are integers.
    std::vector<long> r2(n);
    long total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      r2[i] = std::lround(2.0 * ranks[i]);
      total += r2[i];
    }
    std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
    count[0] = 1.0;
    long reach = 0;
    for (long r : r2) {
      for (long s = reach; s >= 0; --s) count[s + r] += count[s];
      reach += r;
    }
    const long w2 = std::lround(2.0 * out.w);
    double ge = 0.0, le = 0.0;
    for (long s = 0; s <= total; ++s) {
      if (s >= w2) ge += count[s];
      if (s <= w2) le += count[s];
    }
    const double all = std::ldexp(1.0, static_cast<int>(n));
    out.p = std::clamp(combine(ge / all, le / all, alternative), 0.0, 1.0);
    out.method = "exact";
    return out;
  }

  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
  for (std::size_t t : ties) {
    const double tt = static_cast<double>(t);
    var -= (tt * tt * tt - tt) / 48.0;
  }
  const double sd = std::sqrt(std::max(var, 0.0));
  double greater = 1.0, less = 1.0;
  if (sd > 0.0) {
    greater = normal_cdf(-(out.w - mean - 0.5) / sd);
    less = normal_cdf((out.w - mean + 0.5) / sd);
  }
  out.p = std::clamp(combine(greater, less, alternative), 0.0, 1.0);
  out.method = "normal-approx";
  return out;
}

// ---------------------------------------------------------------------------

namespace {

int sign(double v) { return (v > 0) - (v < 0); }

long kendall_s(const std::vector<double>& x, const std::vector<double>& y) {
  long s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) s += sign(x[j] - x[i]) * sign(y[j] - y[i]);
  }
  return s;
}

}  // namespace

TrendResult kendall_trend(const std::vector<std::pair<double, double>>& pairs,
                          Alternative alternative, Method method) {
  TrendResult out;
  out.n = pairs.size();
  out.method = "none";
  const std::size_t n = pairs.size();
  if (n < 2) return out;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = pairs[i].first;
    y[i] = pairs[i].second;
  }
  std::vector<std::size_t> tx, ty;
  midranks(x, &tx);
  midranks(y, &ty);
  const double n0 = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  double n1 = 0.0, n2 = 0.0;
  for (std::size_t t : tx) n1 += static_cast<double>(t * (t - 1)) / 2.0;
  for (std::size_t u : ty) n2 += static_cast<double>(u * (u - 1)) / 2.0;
  const double denom = std::sqrt((n0 - n1) * (n0 - n2));
  if (!(denom > 0.0)) return out;  // one side is constant: no information
  const long s = kendall_s(x, y);
  out.tau = static_cast<double>(s) / denom;

  const bool exact = method == Method::kExact ||
                     (method == Method::kAuto && n <= kExactKendallLimit);
  if (exact) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> yp(n);
    double ge = 0.0, le = 0.0, all = 0.0;
    do {
      for (std::size_t i = 0; i < n; ++i) yp[i] = y[perm[i]];
      const long sp = kendall_s(x, yp);
      ge += sp >= s;
      le += sp <= s;
      all += 1.0;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.p = combine(ge / all, le / all, alternative);
    out.method = "exact";
    return out;
  }

  const double nn = static_cast<double>(n);
  auto sum = [](const std::vector<std::size_t>& g, auto f) {
    double acc = 0.0;
    for (std::size_t t : g) acc += f(static_cast<double>(t));
    return acc;
  };
  const double v0 = nn * (nn - 1) * (2 * nn + 5);
  const double vt = sum(tx, [](double t) { return t * (t - 1) * (2 * t + 5); });
  const double vu = sum(ty, [](double t) { return t * (t - 1) * (2 * t + 5); });
  const double v1 = sum(tx, [](double t) { return t * (t - 1); }) *
                    sum(ty, [](double t) { return t * (t - 1); }) / (2 * nn * (nn - 1));
  const double v2 = sum(tx, [](double t) { return t * (t - 1) * (t - 2); }) *
                    sum(ty, [](double t) { return t * (t - 1) * (t - 2); }) /
                    (9 * nn * (nn - 1) * (nn - 2));
  const double var = (v0 - vt - vu) / 18.0 + v1 + v2;
  const double z = static_cast<double>(s) / std::sqrt(var);
  out.p = combine(normal_cdf(-z), normal_cdf(z), alternative);
  out.method = "normal-approx";
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Facet {
  std::vector<double> a;
  double c;
};

std::vector<Facet> facets(const Polytope& region) {
  std::vector<Facet> out;
  for (std::size_t i = 0; i < region.a.size(); ++i) out.push_back({region.a[i], region.c[i]});
  for (std::size_t i = 0; i < region.t.size(); ++i) out.push_back({region.t[i], region.v[i]});
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Partner of x across the nearest facet whose far side is reachable inside
// the space; nullopt when every facet lies on the space boundary.
std::optional<std::vector<double>> reflect(const std::vector<double>& x,
                                           const std::vector<Facet>& fs, const Box& space,
                                           double margin) {
  double best = std::numeric_limits<double>::infinity();
  std::optional<std::vector<double>> partner;
  for (const Facet& f : fs) {
    const double norm2 = dot(f.a, f.a);
    if (norm2 <= 0.0) continue;
    const double norm = std::sqrt(norm2);
    const double dist = std::max(0.0, (f.c - dot(f.a, x)) / norm);
    if (dist >= best) continue;
    std::vector<double> y(x.size());
    const double step = (2.0 * dist + margin) / norm;
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + step * f.a[i];
    y = space.clip(std::move(y));
    if (dot(f.a, y) <= f.c + kMembershipTol) continue;  // clipped back inside
    best = dist;
    partner = std::move(y);
  }
  return partner;
}

}  // namespace

SignificanceReport check_significance(const Polytope& region, const Box& space,
                                      const GapFn& gap_fn, const SignificanceParams& params,
                                      std::uint64_t seed) {
  space.check();
  if (params.n_pairs == 0) throw Error(ErrorKind::kInvalidArgument, "n_pairs must be > 0");
  SignificanceReport report;
  report.alpha = params.alpha;
  report.n_pairs = params.n_pairs;

  const PolytopeSampler sampler(region, space, 10 * params.n_pairs,
                                derive_seed(seed, {0x70696c6f74}));

  double mean_range = 0.0;
  for (std::size_t i = 0; i < space.dims(); ++i) mean_range += space.hi[i] - space.lo[i];
  mean_range /= static_cast<double>(space.dims());
  const double margin = params.margin * mean_range;
  const std::vector<Facet> fs = facets(region);

  std::vector<double> diffs(params.n_pairs, 0.0);
  std::vector<char> paired(params.n_pairs, 0);
  parallel_for(params.n_pairs, params.threads, [&](std::size_t k) {
    Rng rng(seed, {0x70616972, k});
    const std::vector<double> x = sampler.draw(rng);
    auto y = reflect(x, fs, space, margin);
    if (!y) return;
    diffs[k] = gap_fn(x) - gap_fn(*y);
    paired[k] = 1;
  });
  if (std::count(paired.begin(), paired.end(), 1) == 0) {
    report.method = "no-outside";
    return report;
  }
  std::vector<double> used;
  for (std::size_t k = 0; k < diffs.size(); ++k) {
    if (paired[k]) used.push_back(diffs[k]);
  }
  report.n_pairs = used.size();
  try {
    WilcoxonResult w = wilcoxon_signed_rank(used, Alternative::kGreater);
    report.w = w.w;
    report.p = w.p;
    report.method = w.method;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kAllZero) throw;
    report.method = "all-zero";
    report.p = 1.0;
  }
  report.keep = report.p < params.alpha;
  return report;
}

}  // namespace xplain::stats
