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
#include <string>
#include <vector>

#include "adclip/manifest.hpp"

namespace adclip {

// Per-frame binary ground truth for the long video: 1 iff the frame belongs
// to a long shot that some short shot maps to. Constant within each shot.
struct FrameLabels {
  std::vector<std::uint8_t> values;

  int positives() const;
};

FrameLabels labels_from_mapping(const AdPair& pair);

struct FoldSplit {
  std::vector<std::vector<std::string>> folds;  // pair ids, partitioning
};

// Seeded shuffle of the sorted ids, then round-robin assignment. Fold sizes
// differ by at most one.
FoldSplit make_folds(std::vector<std::string> pair_ids, int k,
                     std::uint64_t seed);
FoldSplit make_folds(const std::vector<AdPair>& pairs, int k,
                     std::uint64_t seed);

}  // namespace adclip
