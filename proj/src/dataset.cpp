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

#include "adclip/dataset.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "adclip/errors.hpp"
#include "adclip/util.hpp"

namespace adclip {

int FrameLabels::positives() const {
  return static_cast<int>(
      std::count(values.begin(), values.end(), std::uint8_t{1}));
}

FrameLabels labels_from_mapping(const AdPair& pair) {
  if (!pair.mapping)
    throw ValidationError("pair '" + pair.pair_id + "' has no shot mapping");
  FrameLabels labels;
  labels.values.assign(static_cast<std::size_t>(pair.long_video.frame_count),
                       0);
  const auto& shots = pair.long_video.shots;
  for (int shot_id : pair.mapping->mapped_long_shots()) {
    if (shot_id < 0 || shot_id >= static_cast<int>(shots.size()))
      throw ValidationError("pair '" + pair.pair_id +
                            "': mapping references unknown shot_id " +
                            std::to_string(shot_id));
    const Shot& s = shots[static_cast<std::size_t>(shot_id)];
    std::fill(labels.values.begin() + s.start_frame,
              labels.values.begin() + s.end_frame + 1, std::uint8_t{1});
  }
  return labels;
}

FoldSplit make_folds(std::vector<std::string> pair_ids, int k,
                     std::uint64_t seed) {
  if (k < 2) throw ValidationError("fold count must be at least 2");
  if (static_cast<int>(pair_ids.size()) < k)
    throw ValidationError("fewer pairs (" + std::to_string(pair_ids.size()) +
                          ") than folds (" + std::to_string(k) + ")");
  std::sort(pair_ids.begin(), pair_ids.end());
  std::mt19937_64 rng(seed);
  seeded_shuffle(pair_ids, rng);
  FoldSplit split;
  split.folds.assign(static_cast<std::size_t>(k), {});
  for (std::size_t i = 0; i < pair_ids.size(); ++i)
    split.folds[i % static_cast<std::size_t>(k)].push_back(
        std::move(pair_ids[i]));
  return split;
}

FoldSplit make_folds(const std::vector<AdPair>& pairs, int k,
                     std::uint64_t seed) {
  std::vector<std::string> ids;
  ids.reserve(pairs.size());
  for (const auto& p : pairs) ids.push_back(p.pair_id);
  return make_folds(std::move(ids), k, seed);
}

}  // namespace adclip
