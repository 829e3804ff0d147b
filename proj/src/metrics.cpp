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

#include "adclip/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "adclip/errors.hpp"

namespace adclip {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b)
    throw ValidationError("metric input length mismatch: " +
                          std::to_string(a) + " vs " + std::to_string(b));
}

// 1-based ranks, ties averaged.
std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double mean_rank = (static_cast<double>(i) + j) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

// Inversions (strict) counted by merge sort.
std::int64_t count_inversions(std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> buf(n);
  std::int64_t inversions = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
      const std::size_t mid = lo + width;
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t a = lo, b = mid, out = lo;
      while (a < mid && b < hi) {
        if (v[b] < v[a]) {
          inversions += static_cast<std::int64_t>(mid - a);
          buf[out++] = v[b++];
        } else {
          buf[out++] = v[a++];
        }
      }
      while (a < mid) buf[out++] = v[a++];
      while (b < hi) buf[out++] = v[b++];
      std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                buf.begin() + static_cast<std::ptrdiff_t>(hi),
                v.begin() + static_cast<std::ptrdiff_t>(lo));
    }
  }
  return inversions;
}

std::int64_t tie_pair_count(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::int64_t pairs = 0;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
    const auto t = static_cast<std::int64_t>(j - i + 1);
    pairs += t * (t - 1) / 2;
    i = j + 1;
  }
  return pairs;
}

}  // namespace

MetricValue average_precision(const std::vector<double>& scores,
                              const std::vector<std::uint8_t>& labels) {
  check_lengths(scores.size(), labels.size());
  if (scores.empty()) throw ValidationError("metric over empty vectors");
  const auto positives = static_cast<std::int64_t>(
      std::count(labels.begin(), labels.end(), std::uint8_t{1}));
  if (positives == 0) return {};

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  double ap = 0.0;
  std::int64_t hits = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (labels[order[k]]) {
      ++hits;
      ap += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  return {ap / static_cast<double>(positives), true};
}

MetricValue auroc(const std::vector<double>& scores,
                  const std::vector<std::uint8_t>& labels) {
  check_lengths(scores.size(), labels.size());
  if (scores.empty()) throw ValidationError("metric over empty vectors");
  const auto p = static_cast<std::int64_t>(
      std::count(labels.begin(), labels.end(), std::uint8_t{1}));
  const auto n = static_cast<std::int64_t>(labels.size()) - p;
  if (p == 0 || n == 0) return {};

  const std::vector<double> ranks = average_ranks(scores);
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i]) positive_rank_sum += ranks[i];
  const double u = positive_rank_sum -
                   static_cast<double>(p) * (static_cast<double>(p) + 1) / 2.0;
  return {u / (static_cast<double>(p) * static_cast<double>(n)), true};
}

MetricValue spearman(const std::vector<double>& scores,
                     const std::vector<double>& reference) {
  check_lengths(scores.size(), reference.size());
  if (scores.size() < 2)
    throw ValidationError("correlation needs length >= 2");
  const std::vector<double> rx = average_ranks(scores);
  const std::vector<double> ry = average_ranks(reference);
  const double n = static_cast<double>(rx.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sx += rx[i];
    sy += ry[i];
  }
  const double mx = sx / n, my = sy / n;
  double cov = 0, vx = 0, vy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mx, dy = ry[i] - my;
    cov += dx * dy;
    vx += dx * dx;
    vy += dy * dy;
  }
  if (vx == 0.0 || vy == 0.0) return {};
  return {cov / std::sqrt(vx * vy), true};
}

MetricValue kendall(const std::vector<double>& scores,
                    const std::vector<double>& reference) {
  check_lengths(scores.size(), reference.size());
  const auto n = static_cast<std::int64_t>(scores.size());
  if (n < 2) throw ValidationError("correlation needs length >= 2");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] < scores[b];
    return reference[a] < reference[b];
  });

  const std::int64_t n0 = n * (n - 1) / 2;
  std::int64_t n1 = 0, n3 = 0;
  {
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j + 1 < order.size() &&
             scores[order[j + 1]] == scores[order[i]])
        ++j;
      const auto t = static_cast<std::int64_t>(j - i + 1);
      n1 += t * (t - 1) / 2;
      // joint ties inside the x-tie group (group is sorted by y)
      std::size_t a = i;
      while (a <= j) {
        std::size_t b = a;
        while (b + 1 <= j && reference[order[b + 1]] == reference[order[a]])
          ++b;
        const auto tj = static_cast<std::int64_t>(b - a + 1);
        n3 += tj * (tj - 1) / 2;
        a = b + 1;
      }
      i = j + 1;
    }
  }
  const std::int64_t n2 = tie_pair_count(reference);

  std::vector<double> y_in_x_order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    y_in_x_order[i] = reference[order[i]];
  const std::int64_t swaps = count_inversions(y_in_x_order);

  if (n0 == n1 || n0 == n2) return {};
  const double con_minus_dis =
      static_cast<double>(n0 - n1 - n2 + n3 - 2 * swaps);
  const double denom = std::sqrt(static_cast<double>(n0 - n1)) *
                       std::sqrt(static_cast<double>(n0 - n2));
  return {con_minus_dis / denom, true};
}

ShotRetrieval shot_retrieval_metrics(const std::vector<int>& selected,
                                     const std::vector<int>& positives) {
  const std::set<int> sel(selected.begin(), selected.end());
  const std::set<int> pos(positives.begin(), positives.end());
  ShotRetrieval r;
  for (int s : sel) {
    if (pos.count(s))
      ++r.tp;
    else
      ++r.fp;
  }
  for (int p : pos)
    if (!sel.count(p)) ++r.fn;
  r.precision = (r.tp + r.fp) ? static_cast<double>(r.tp) / (r.tp + r.fp)
                              : 0.0;
  r.recall = (r.tp + r.fn) ? static_cast<double>(r.tp) / (r.tp + r.fn) : 0.0;
  r.f1 = (r.precision + r.recall > 0.0)
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

ShotRetrieval shot_retrieval_metrics(const SelectionResult& selected,
                                     const ShotMapping& mapping) {
  return shot_retrieval_metrics(selected.selected_shot_ids,
                                mapping.mapped_long_shots());
}

}  // namespace adclip
