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

#include "xplain/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "xplain/error.hpp"
#include "xplain/rng.hpp"

namespace xplain {

namespace {

bool rows_hold(const std::vector<std::vector<double>>& m, const std::vector<double>& rhs,
               const std::vector<double>& x, double eps) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size() && j < m[i].size(); ++j) lhs += m[i][j] * x[j];
    if (lhs > rhs[i] + eps) return false;
  }
  return true;
}

}  // namespace

bool Box::contains(const std::vector<double>& x, double eps) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo[i] - eps || x[i] > hi[i] + eps) return false;
  }
  return true;
}

std::vector<double> Box::clip(std::vector<double> x) const {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
  return x;
}

void Box::check() const {
  if (lo.empty() || lo.size() != hi.size()) {
    throw Error(ErrorKind::kInvalidArgument, "input space needs matching, nonempty bounds");
  }
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] <= hi[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
      throw Error(ErrorKind::kInvalidArgument,
                  "dimension " + std::to_string(i) + " needs finite lo <= hi");
    }
  }
}

Polytope Polytope::from_box(const Box& box) {
  Polytope p;
  const std::size_t n = box.dims();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n, 0.0);
    row[i] = 1.0;
    p.a.push_back(row);
    p.c.push_back(box.hi[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n, 0.0);
    row[i] = -1.0;
    p.a.push_back(row);
    p.c.push_back(-box.lo[i]);
  }
  return p;
}

Box Polytope::box() const {
  const std::size_t n = dims();
  Box b;
  b.lo.assign(n, -std::numeric_limits<double>::infinity());
  b.hi.assign(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][j] > 0) b.hi[j] = std::min(b.hi[j], c[i] / a[i][j]);
      if (a[i][j] < 0) b.lo[j] = std::max(b.lo[j], c[i] / a[i][j]);
    }
  }
  return b;
}

bool Polytope::contains(const std::vector<double>& x, double eps) const {
  return x.size() == dims() && rows_hold(a, c, x, eps) && rows_hold(t, v, x, eps);
}

PolytopeSampler::PolytopeSampler(const Polytope& region, const Box& space, std::size_t pilot,
                                 std::uint64_t pilot_seed)
    : region_(region), bounds_(region.box()) {
  space.check();
  if (region.dims() != space.dims()) {
    throw Error(ErrorKind::kInvalidArgument, "polytope and space dimensions differ");
  }
  for (std::size_t i = 0; i < bounds_.dims(); ++i) {
    bounds_.lo[i] = std::max(bounds_.lo[i], space.lo[i]);
    bounds_.hi[i] = std::min(bounds_.hi[i], space.hi[i]);
  }
  // Rows on a single coordinate tighten the proposal box directly.
  for (std::size_t r = 0; r < region.t.size(); ++r) {
    std::size_t nonzero = 0, dim = 0;
    for (std::size_t i = 0; i < region.t[r].size(); ++i) {
      if (region.t[r][i] != 0.0) {
        ++nonzero;
        dim = i;
      }
    }
    if (nonzero != 1) continue;
    const double bound = region.v[r] / region.t[r][dim];
    if (region.t[r][dim] > 0.0) {
      bounds_.hi[dim] = std::min(bounds_.hi[dim], bound);
    } else {
      bounds_.lo[dim] = std::max(bounds_.lo[dim], bound);
    }
  }
  for (std::size_t i = 0; i < bounds_.dims(); ++i) {
    if (bounds_.lo[i] > bounds_.hi[i]) {
      throw Error(ErrorKind::kSamplingFailure, "subspace does not meet the input space");
    }
  }
  Rng rng(pilot_seed);
  std::size_t inside = 0;
  std::vector<double> x(bounds_.dims());
  for (std::size_t k = 0; k < pilot; ++k) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(bounds_.lo[i], bounds_.hi[i]);
    inside += region.contains(x);
  }
  if (static_cast<double>(inside) < 0.01 * static_cast<double>(pilot)) {
    throw Error(ErrorKind::kSamplingFailure, "rejection sampling acceptance below 1%");
  }
}

std::vector<double> PolytopeSampler::draw(Rng& rng) const {
  std::vector<double> x(bounds_.dims());
  for (int tries = 0; tries < 1000000; ++tries) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(bounds_.lo[i], bounds_.hi[i]);
    if (region_.contains(x)) return x;
  }
  throw Error(ErrorKind::kSamplingFailure, "no point found inside the subspace");
}

bool Polytope::box_contains(const std::vector<double>& x, double eps) const {
  return x.size() == dims() && rows_hold(a, c, x, eps);
}

bool membership(const std::vector<double>& x, const Subspace& s) {
  return s.polytope.contains(x);
}

nlohmann::json to_json(const Polytope& p, const std::vector<std::string>& labels) {
  return nlohmann::json{{"dimensions", labels}, {"A", p.a}, {"C", p.c}, {"T", p.t}, {"V", p.v}};
}

Polytope polytope_from_json(const nlohmann::json& doc) {
  Polytope p;
  try {
    p.a = doc.at("A").get<std::vector<std::vector<double>>>();
    p.c = doc.at("C").get<std::vector<double>>();
    p.t = doc.value("T", std::vector<std::vector<double>>{});
    p.v = doc.value("V", std::vector<double>{});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("polytope: ") + e.what());
  }
  if (p.a.size() != p.c.size() || p.t.size() != p.v.size()) {
    throw Error(ErrorKind::kParse, "polytope row counts disagree");
  }
  const std::size_t n = p.dims();
  for (const auto& row : p.a) {
    if (row.size() != n) throw Error(ErrorKind::kParse, "ragged A matrix");
  }
  for (const auto& row : p.t) {
    if (row.size() != n) throw Error(ErrorKind::kParse, "T rows must match A's width");
  }
  return p;
}

nlohmann::json to_json(const SignificanceReport& r) {
  return nlohmann::json{{"n_pairs", r.n_pairs}, {"W", r.w},         {"p", r.p},
                        {"method", r.method},   {"alpha", r.alpha}, {"keep", r.keep}};
}

nlohmann::json to_json(const Subspace& s, const std::vector<std::string>& labels) {
  nlohmann::json j = to_json(s.polytope, labels);
  j["seed"] = {{"x", s.seed}, {"gap", s.seed_gap}};
  j["samples"] = {{"count", s.sample_count},
                  {"bad_fraction", s.bad_fraction},
                  {"mean_gap", s.mean_gap}};
  j["significance"] = s.significance ? to_json(*s.significance) : nlohmann::json(nullptr);
  return j;
}

Subspace subspace_from_json(const nlohmann::json& doc) {
  Subspace s;
  s.polytope = polytope_from_json(doc);
  try {
    if (doc.contains("seed")) {
      s.seed = doc.at("seed").at("x").get<std::vector<double>>();
      s.seed_gap = doc.at("seed").value("gap", 0.0);
    }
    if (doc.contains("samples")) {
      const auto& st = doc.at("samples");
      s.sample_count = st.value("count", std::size_t{0});
      s.bad_fraction = st.value("bad_fraction", 0.0);
      s.mean_gap = st.value("mean_gap", 0.0);
    }
    if (doc.contains("significance") && !doc.at("significance").is_null()) {
      const auto& js = doc.at("significance");
      SignificanceReport r;
      r.n_pairs = js.value("n_pairs", std::size_t{0});
      r.w = js.value("W", 0.0);
      r.p = js.value("p", 1.0);
      r.method = js.value("method", std::string());
      r.alpha = js.value("alpha", 0.05);
      r.keep = js.value("keep", false);
      s.significance = r;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("subspace: ") + e.what());
  }
  return s;
}

}  // namespace xplain
