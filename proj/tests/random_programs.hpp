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

// Seeded random program generators shared by unit tests and acceptance.

#ifndef XPLAIN_TESTS_RANDOM_PROGRAMS_HPP_
#define XPLAIN_TESTS_RANDOM_PROGRAMS_HPP_

#include <cmath>
#include <cstdint>

#include "xplain/milp_bridge.hpp"
#include "xplain/rng.hpp"
#include "xplain/solver.hpp"

namespace xplain::testing {

// Half-integer coefficient in [lo, hi].
inline double half_step(Rng& rng, double lo, double hi) {
  return std::round(rng.uniform(lo, hi) * 2.0) / 2.0;
}

inline solver::ConstraintProgram random_lp(std::uint64_t seed) {
  Rng rng(seed, {0x4c50});
  solver::ConstraintProgram p;
  const int n = static_cast<int>(rng.uniform_int(1, 3));
  const int m = static_cast<int>(rng.uniform_int(1, 4));
  for (int j = 0; j < n; ++j) {
    std::optional<double> ub;
    if (rng.uniform() < 0.3) ub = half_step(rng, 0.5, 6.0);
    p.add_variable("v" + std::to_string(j), solver::VarKind::kContinuous, ub);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<solver::Term> terms;
    for (int j = 0; j < n; ++j) {
      if (rng.uniform() < 0.8) terms.push_back({j, half_step(rng, -4.0, 4.0)});
    }
    const double u = rng.uniform();
    const solver::Sense s = u < 0.6   ? solver::Sense::kLessEq
                            : u < 0.8 ? solver::Sense::kGreaterEq
                                      : solver::Sense::kEqual;
    p.add_constraint(std::move(terms), s, half_step(rng, -3.0, 8.0));
  }
  p.objective.sense = rng.uniform() < 0.5 ? solver::ObjectiveSense::kMaximize
                                          : solver::ObjectiveSense::kMinimize;
  for (int j = 0; j < n; ++j) p.objective.terms.push_back({j, half_step(rng, -3.0, 3.0)});
  return p;
}

inline milp::Milp random_milp(std::uint64_t seed) {
  Rng rng(seed, {0x4d494c50});
  milp::Milp m;
  const int ny = static_cast<int>(rng.uniform_int(0, 2));
  const int nx = static_cast<int>(rng.uniform_int(1, 4 - ny));
  const bool budget = rng.uniform() < 0.7;
  const int rows = static_cast<int>(rng.uniform_int(1, budget ? 3 : 4));
  m.sense = rng.uniform() < 0.5 ? solver::ObjectiveSense::kMaximize
                                : solver::ObjectiveSense::kMinimize;
  for (int j = 0; j < nx; ++j) m.c_x.push_back(half_step(rng, -3.0, 3.0));
  for (int j = 0; j < ny; ++j) m.c_y.push_back(half_step(rng, -3.0, 3.0));
  for (int i = 0; i < rows; ++i) {
    std::vector<double> ax(nx), ay(ny);
    for (double& v : ax) v = rng.uniform() < 0.8 ? half_step(rng, -3.0, 3.0) : 0.0;
    for (double& v : ay) v = rng.uniform() < 0.8 ? half_step(rng, -3.0, 3.0) : 0.0;
    m.a_x.push_back(ax);
    m.a_y.push_back(ay);
    m.b.push_back(half_step(rng, -2.0, 6.0));
    m.row_sense.push_back(rng.uniform() < 0.8 ? milp::RowSense::kLessEq
                                              : milp::RowSense::kEqual);
  }
  // Keep most instances bounded: a shared budget row over all x.
  if (budget) {
    m.a_x.push_back(std::vector<double>(nx, 1.0));
    m.a_y.push_back(std::vector<double>(ny, 0.0));
    m.b.push_back(half_step(rng, 1.0, 8.0));
    m.row_sense.push_back(milp::RowSense::kLessEq);
  }
  return m;
}

// Integer coefficients in [-5, 5], at most 4 variables of which at most 2 are
// binary and at most 4 rows including the optional budget row.
inline milp::Milp random_integer_milp(std::uint64_t seed) {
  Rng rng(seed, {0x494e54});
  milp::Milp m;
  const int ny = static_cast<int>(rng.uniform_int(0, 2));
  const int nx = static_cast<int>(rng.uniform_int(1, 4 - ny));
  const bool budget = rng.uniform() < 0.7;
  const int rows = static_cast<int>(rng.uniform_int(1, budget ? 3 : 4));
  auto coef = [&] { return static_cast<double>(rng.uniform_int(-5, 5)); };
  m.sense = rng.uniform() < 0.5 ? solver::ObjectiveSense::kMaximize
                                : solver::ObjectiveSense::kMinimize;
  for (int j = 0; j < nx; ++j) m.c_x.push_back(coef());
  for (int j = 0; j < ny; ++j) m.c_y.push_back(coef());
  for (int i = 0; i < rows; ++i) {
    std::vector<double> ax(nx), ay(ny);
    for (double& v : ax) v = coef();
    for (double& v : ay) v = coef();
    m.a_x.push_back(ax);
    m.a_y.push_back(ay);
    m.b.push_back(static_cast<double>(rng.uniform_int(-2, 8)));
    m.row_sense.push_back(rng.uniform() < 0.8 ? milp::RowSense::kLessEq
                                              : milp::RowSense::kEqual);
  }
  if (budget) {
    m.a_x.push_back(std::vector<double>(nx, 1.0));
    m.a_y.push_back(std::vector<double>(ny, 0.0));
    m.b.push_back(static_cast<double>(rng.uniform_int(1, 8)));
    m.row_sense.push_back(milp::RowSense::kLessEq);
  }
  return m;
}

}  // namespace xplain::testing

#endif  // XPLAIN_TESTS_RANDOM_PROGRAMS_HPP_
