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

#include "adclip/boundaries.hpp"

#include <sstream>

#include <json.hpp>

#include "adclip/errors.hpp"
#include "adclip/util.hpp"

namespace adclip {

std::vector<Shot> boundaries_from_probabilities(
    const std::vector<double>& probs, double threshold) {
  if (probs.empty())
    throw ValidationError("boundary probabilities are empty");
  if (!(threshold > 0.0 && threshold < 1.0))
    throw ValidationError("boundary threshold must lie in (0,1)");
  const int n = static_cast<int>(probs.size());
  std::vector<Shot> shots;
  int start = 0;
  int f = 0;
  while (f < n) {
    if (probs[f] >= threshold) {
      int run_end = f;
      while (run_end + 1 < n && probs[run_end + 1] >= threshold) ++run_end;
      shots.push_back(Shot{static_cast<int>(shots.size()), start, run_end});
      start = run_end + 1;
      f = run_end + 1;
    } else {
      ++f;
    }
  }
  if (start < n)
    shots.push_back(Shot{static_cast<int>(shots.size()), start, n - 1});
  return shots;
}

std::vector<double> load_boundary_probs(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  const std::string text = read_text_file(path);
  std::vector<double> probs;
  if (ext == ".json") {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError("boundary probability parse failure in " +
                            path.string() + ": " + e.what());
    }
    if (!doc.is_array())
      throw ValidationError("boundary probability JSON must be one array: " +
                            path.string());
    for (const auto& v : doc) probs.push_back(v.get<double>());
  } else {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        probs.push_back(std::stod(line));
      } catch (const std::exception&) {
        throw ValidationError("bad probability line '" + line + "' in " +
                              path.string());
      }
    }
  }
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0))
      throw ValidationError("probability out of [0,1] in " + path.string());
  }
  return probs;
}

}  // namespace adclip
