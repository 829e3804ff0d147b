// Copyright 2026 The adclip authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "adclip/selection.hpp"

namespace adclip::testing {

// Brute-force references, deliberately written along different routes than
// the library implementations they check.

// Precision/recall curve walked point by point, O(n^2).
double ap_oracle(const std::vector<double>& scores,
                 const std::vector<std::uint8_t>& labels);

// Every (positive, negative) pair compared, ties half credit.
double auroc_oracle(const std::vector<double>& scores,
                    const std::vector<std::uint8_t>& labels);

// Ranks by pairwise counting, Pearson by direct sums.
double spearman_oracle(const std::vector<double>& scores,
                       const std::vector<double>& reference);

// tau-b from naive concordant/discordant pair counting.
double kendall_oracle(const std::vector<double>& scores,
                      const std::vector<double>& reference);

// Shortest rank-prefix meeting the budget, checked prefix by prefix.
// Returns selected ids ascending.
std::vector<int> greedy_prefix_oracle(std::vector<adclip::ShotScore> scores,
                                      double budget_seconds);

// Central finite differences of f at x.
std::vector<double> finite_difference(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double eps = 1e-6);

}  // namespace adclip::testing
