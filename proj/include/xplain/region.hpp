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

#ifndef XPLAIN_REGION_HPP_
#define XPLAIN_REGION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace xplain {

inline constexpr double kMembershipTol = 1e-9;

// Axis-aligned input box.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dims() const { return lo.size(); }
  bool contains(const std::vector<double>& x, double eps = kMembershipTol) const;
  std::vector<double> clip(std::vector<double> x) const;
  // Throws InvalidArgument unless lo <= hi componentwise and dims >= 1.
  void check() const;
};

// {x : A x <= C, T x <= V}; A stacks I and -I so C holds the upper bounds
// followed by the negated lower bounds.
struct Polytope {
  std::vector<std::vector<double>> a;
  std::vector<double> c;
  std::vector<std::vector<double>> t;
  std::vector<double> v;

  static Polytope from_box(const Box& box);
  std::size_t dims() const { return a.empty() ? 0 : a.front().size(); }
  // The box described by (A, C).
  Box box() const;
  bool contains(const std::vector<double>& x, double eps = kMembershipTol) const;
  bool box_contains(const std::vector<double>& x, double eps = kMembershipTol) const;
  bool operator==(const Polytope&) const = default;
};

class Rng;

// Uniform rejection sampling inside a polytope intersected with the space.
class PolytopeSampler {
 public:
  // Proposals come from the polytope's box, tightened by single-coordinate
  // rows and clipped to the space. Throws SamplingFailure when that box is
  // empty or fewer than 1% of `pilot` draws (on the stream of `pilot_seed`)
  // land inside.
  PolytopeSampler(const Polytope& region, const Box& space, std::size_t pilot,
                  std::uint64_t pilot_seed);

  // Throws SamplingFailure after a million consecutive misses.
  std::vector<double> draw(Rng& rng) const;
  const Box& bounds() const { return bounds_; }

 private:
  const Polytope& region_;
  Box bounds_;
};

struct SignificanceReport {
  std::size_t n_pairs = 0;
  double w = 0.0;
  double p = 1.0;
  // "exact", "normal-approx", "all-zero", "no-outside" or "sampling-failure"
  std::string method;
  double alpha = 0.05;
  bool keep = false;
};

struct Subspace {
  Polytope polytope;
  std::vector<double> seed;
  double seed_gap = 0.0;
  std::size_t sample_count = 0;
  double bad_fraction = 0.0;
  double mean_gap = 0.0;
  std::optional<SignificanceReport> significance;
};

bool membership(const std::vector<double>& x, const Subspace& s);

nlohmann::json to_json(const Polytope& p, const std::vector<std::string>& labels);
Polytope polytope_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SignificanceReport& r);
nlohmann::json to_json(const Subspace& s, const std::vector<std::string>& labels);
Subspace subspace_from_json(const nlohmann::json& doc);

}  // namespace xplain

#endif  // XPLAIN_REGION_HPP_
