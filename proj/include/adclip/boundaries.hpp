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
#include <vector>

#include "adclip/manifest.hpp"

namespace adclip {

// Cuts a video into shots from per-frame boundary probabilities.
// A frame with prob >= threshold is a boundary frame and ends the current
// shot; a run of consecutive boundary frames collapses into a single cut at
// the run's last frame. The result tiles [0, probs.size()-1].
std::vector<Shot> boundaries_from_probabilities(
    const std::vector<double>& probs, double threshold);

// One real per frame: newline-delimited text (.txt) or a single JSON array
// (.json), chosen by extension.
std::vector<double> load_boundary_probs(const std::filesystem::path& path);

}  // namespace adclip
