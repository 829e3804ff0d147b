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
#include <vector>

#include "adclip/manifest.hpp"
#include "adclip/selection.hpp"

namespace adclip {

// Metric with an undefined marker. Undefined values (single-class labels,
// constant inputs) are flagged and excluded from averages, never zeroed.
struct MetricValue {
  double value = 0.0;
  bool defined = false;
};

// AP over the score-descending ranking; ties keep original index order.
// Undefined without at least one positive label.
MetricValue average_precision(const std::vector<double>& scores,
                              const std::vector<std::uint8_t>& labels);

// Mann-Whitney form: P(random positive outranks random negative) with half
// credit for ties. Undefined unless both classes are present.
MetricValue auroc(const std::vector<double>& scores,
                  const std::vector<std::uint8_t>& labels);

// Pearson correlation of tie-averaged ranks. Undefined for constant input.
MetricValue spearman(const std::vector<double>& scores,
                     const std::vector<double>& reference);

// Kendall tau-b (tie corrected), O(n log n) merge-sort counting.
MetricValue kendall(const std::vector<double>& scores,
                    const std::vector<double>& reference);

struct ShotRetrieval {
  int tp = 0, fp = 0, fn = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

// Positives = distinct mapped long shots; zero denominators give 0.
ShotRetrieval shot_retrieval_metrics(const std::vector<int>& selected,
                                     const std::vector<int>& positives);
ShotRetrieval shot_retrieval_metrics(const SelectionResult& selected,
                                     const ShotMapping& mapping);

}  // namespace adclip
