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

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "adclip/features.hpp"

namespace adclip {

// Binary feature file: "FMC1" magic, stream byte, dtype byte (0 = f32),
// backend id, T, D, then row-major little-endian float32. Bit-exact round
// trips; also the format precomputed backends read.
void write_feature_map(const std::filesystem::path& path,
                       const FeatureMap& map);
FeatureMap read_feature_map(const std::filesystem::path& path);

struct FeatureCacheKey {
  std::string video_id;
  std::string backend_id;
  int stride = 0;
  int hws = 0;
};

// One file per key under the cache directory. Key components are
// percent-encoded before composing the file name, so distinct keys can
// never collide. Writes are atomic; a corrupt entry reads as a miss and
// leaves a warning record.
class FeatureCache {
 public:
  explicit FeatureCache(std::filesystem::path dir);

  std::filesystem::path path_for(const FeatureCacheKey& key) const;
  std::optional<FeatureMap> get(const FeatureCacheKey& key);
  void put(const FeatureCacheKey& key, const FeatureMap& map);

  std::vector<std::string> take_warnings();

 private:
  std::filesystem::path dir_;
  std::mutex mutex_;
  std::vector<std::string> warnings_;
};

}  // namespace adclip
