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

#include "adclip/manifest.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "adclip/errors.hpp"
#include "adclip/util.hpp"

namespace adclip {

using nlohmann::json;

std::vector<int> ShotMapping::mapped_long_shots() const {
  std::set<int> ids;
  for (const auto& e : entries) ids.insert(e.long_shot_id);
  return {ids.begin(), ids.end()};
}

void validate_shots(const VideoRef& video) {
  const auto& shots = video.shots;
  if (shots.empty())
    throw ValidationError("video '" + video.video_id + "' has no shots");
  if (video.frame_count <= 0)
    throw ValidationError("video '" + video.video_id +
                          "' has non-positive frame count");
  int expected_start = 0;
  for (std::size_t i = 0; i < shots.size(); ++i) {
    const Shot& s = shots[i];
    if (s.shot_id != static_cast<int>(i))
      throw ValidationError("video '" + video.video_id +
                            "': shot ids must be 0..m-1 in order");
    if (s.start_frame > s.end_frame)
      throw ValidationError("video '" + video.video_id + "': shot " +
                            std::to_string(s.shot_id) +
                            " has start_frame > end_frame");
    if (s.start_frame > expected_start)
      throw ValidationError("video '" + video.video_id +
                            "': shot gap at frame " +
                            std::to_string(expected_start));
    if (s.start_frame < expected_start)
      throw ValidationError("video '" + video.video_id +
                            "': shot overlap at frame " +
                            std::to_string(s.start_frame));
    expected_start = s.end_frame + 1;
  }
  if (expected_start < video.frame_count)
    throw ValidationError("video '" + video.video_id + "': shot gap at frame " +
                          std::to_string(expected_start));
  if (expected_start > video.frame_count)
    throw ValidationError("video '" + video.video_id +
                          "': shots extend past frame " +
                          std::to_string(video.frame_count - 1));
}

void validate_pair(const AdPair& pair) {
  validate_shots(pair.long_video);
  validate_shots(pair.short_video);
  if (!pair.mapping) return;
  std::unordered_set<int> seen_short;
  for (const auto& e : pair.mapping->entries) {
    if (e.short_shot_id < 0 ||
        e.short_shot_id >= static_cast<int>(pair.short_video.shots.size()))
      throw ValidationError("pair '" + pair.pair_id +
                            "': mapping references unknown short shot " +
                            std::to_string(e.short_shot_id));
    if (e.long_shot_id < 0 ||
        e.long_shot_id >= static_cast<int>(pair.long_video.shots.size()))
      throw ValidationError("pair '" + pair.pair_id +
                            "': mapping references unknown long shot " +
                            std::to_string(e.long_shot_id));
    if (!seen_short.insert(e.short_shot_id).second)
      throw ValidationError("pair '" + pair.pair_id +
                            "': short shot mapped twice: " +
                            std::to_string(e.short_shot_id));
  }
}

namespace {

json video_to_json(const VideoRef& v) {
  json shots = json::array();
  for (const auto& s : v.shots) shots.push_back({s.start_frame, s.end_frame});
  return json{{"video_id", v.video_id},
              {"file", v.file},
              {"fps", v.fps},
              {"frame_count", v.frame_count},
              {"shots", shots}};
}

VideoRef video_from_json(const json& j) {
  VideoRef v;
  v.video_id = j.at("video_id").get<std::string>();
  v.file = j.at("file").get<std::string>();
  v.fps = j.at("fps").get<double>();
  v.frame_count = j.at("frame_count").get<int>();
  int id = 0;
  for (const auto& s : j.at("shots")) {
    if (!s.is_array() || s.size() != 2)
      throw ValidationError("video '" + v.video_id +
                            "': each shot must be [start,end]");
    v.shots.push_back(Shot{id++, s.at(0).get<int>(), s.at(1).get<int>()});
  }
  return v;
}

json pair_to_json(const AdPair& p) {
  json j{{"pair_id", p.pair_id},
         {"long", video_to_json(p.long_video)},
         {"short", video_to_json(p.short_video)}};
  if (p.mapping) {
    json m = json::array();
    for (const auto& e : p.mapping->entries)
      m.push_back({e.short_shot_id, e.long_shot_id, e.similarity});
    j["mapping"] = m;
  }
  return j;
}

AdPair pair_from_json(const json& j) {
  AdPair p;
  p.pair_id = j.at("pair_id").get<std::string>();
  p.long_video = video_from_json(j.at("long"));
  p.short_video = video_from_json(j.at("short"));
  if (j.contains("mapping") && !j.at("mapping").is_null()) {
    ShotMapping m;
    for (const auto& e : j.at("mapping")) {
      if (!e.is_array() || e.size() != 3)
        throw ValidationError("pair '" + p.pair_id +
                              "': mapping entries must be "
                              "[short_id,long_id,similarity]");
      m.entries.push_back(MappingEntry{e.at(0).get<int>(), e.at(1).get<int>(),
                                       e.at(2).get<double>()});
    }
    std::sort(m.entries.begin(), m.entries.end(),
              [](const MappingEntry& a, const MappingEntry& b) {
                return a.short_shot_id < b.short_shot_id;
              });
    p.mapping = std::move(m);
  }
  return p;
}

}  // namespace

std::vector<AdPair> load_manifest(const std::filesystem::path& path,
                                  const ManifestLoadOptions& opts) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError("manifest parse failure in " + path.string() + ": " +
                          e.what());
  }
  if (!doc.is_array())
    throw ValidationError("manifest must be a top-level list of pairs");
  std::vector<AdPair> pairs;
  std::unordered_set<std::string> ids;
  for (const auto& item : doc) {
    AdPair p;
    try {
      p = pair_from_json(item);
    } catch (const json::exception& e) {
      throw ValidationError(std::string("manifest field error: ") + e.what());
    }
    if (!ids.insert(p.pair_id).second)
      throw ValidationError("duplicate pair_id: " + p.pair_id);
    validate_pair(p);
    if (opts.check_files) {
      for (const VideoRef* v : {&p.long_video, &p.short_video}) {
        if (!std::filesystem::exists(v->file))
          throw ValidationError("missing video file referenced by pair '" +
                                p.pair_id + "': " + v->file);
      }
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::string manifest_to_json_text(const std::vector<AdPair>& pairs) {
  json doc = json::array();
  for (const auto& p : pairs) doc.push_back(pair_to_json(p));
  return doc.dump(2) + "\n";
}

void save_manifest(const std::vector<AdPair>& pairs,
                   const std::filesystem::path& path) {
  std::unordered_set<std::string> ids;
  for (const auto& p : pairs) {
    validate_pair(p);
    if (!ids.insert(p.pair_id).second)
      throw ValidationError("duplicate pair_id: " + p.pair_id);
  }
  atomic_write_file(path, manifest_to_json_text(pairs));
}

}  // namespace adclip
