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

#include <doctest.h>

#include <random>
#include <set>

#include "adclip/boundaries.hpp"
#include "adclip/dataset.hpp"
#include "adclip/errors.hpp"
#include "adclip/manifest.hpp"
#include "adclip/util.hpp"
#include "support/fixtures.hpp"

using namespace adclip;

namespace {

AdPair tiled_pair(int long_frames, const std::vector<int>& long_ends,
                  int short_frames, const std::vector<int>& short_ends) {
  auto make = [](const std::string& id, int frames,
                 const std::vector<int>& ends) {
    VideoRef v{id, "", 24.0, frames, {}};
    int start = 0, shot = 0;
    for (int e : ends) {
      v.shots.push_back(Shot{shot++, start, e});
      start = e + 1;
    }
    return v;
  };
  AdPair p;
  p.pair_id = "p";
  p.long_video = make("p_long", long_frames, long_ends);
  p.short_video = make("p_short", short_frames, short_ends);
  return p;
}

}  // namespace

TEST_CASE("manifest round-trips two pairs") {
  const auto dir = testing::make_temp_dir("manifest");
  AdPair a = tiled_pair(20, {9, 19}, 10, {9});
  a.pair_id = "a";
  a.mapping = ShotMapping{{MappingEntry{0, 1, 0.75}}};
  AdPair b = tiled_pair(30, {14, 29}, 15, {14});
  b.pair_id = "b";
  const auto path = dir / "manifest.json";
  save_manifest({a, b}, path);
  const auto loaded = load_manifest(path, {.check_files = false});
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].pair_id == "a");
  CHECK(loaded[0].long_video.shots.size() == 2);
  CHECK(loaded[0].mapping.has_value());
  CHECK(loaded[0].mapping->entries[0].long_shot_id == 1);
  CHECK(loaded[0].mapping->entries[0].similarity == doctest::Approx(0.75));
  CHECK_FALSE(loaded[1].mapping.has_value());
  std::filesystem::remove_all(dir);
}

TEST_CASE("manifest rejects shot gaps naming the frame") {
  AdPair p = tiled_pair(21, {10, 20}, 10, {9});
  p.long_video.shots[1].start_frame = 12;  // gap at 11
  CHECK_THROWS_WITH_AS(validate_pair(p),
                       doctest::Contains("shot gap at frame 11"),
                       ValidationError);
}

TEST_CASE("manifest rejects overlaps, bad ordering and duplicates") {
  AdPair p = tiled_pair(20, {9, 19}, 10, {9});
  p.long_video.shots[1].start_frame = 8;
  CHECK_THROWS_WITH_AS(validate_pair(p), doctest::Contains("overlap"),
                       ValidationError);

  const auto dir = testing::make_temp_dir("manifest_dup");
  AdPair a = tiled_pair(20, {19}, 10, {9});
  a.pair_id = "same";
  AdPair b = tiled_pair(20, {19}, 10, {9});
  b.pair_id = "same";
  const auto path = dir / "manifest.json";
  CHECK_THROWS_AS(save_manifest({a, b}, path), ValidationError);
  // write bypassing validation to check the load side as well
  atomic_write_file(path, manifest_to_json_text({a}));
  CHECK_NOTHROW(load_manifest(path, {.check_files = false}));
  CHECK_THROWS_WITH_AS(load_manifest(path, {}),
                       doctest::Contains("missing video file"),
                       ValidationError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("boundaries: no boundary probabilities give one shot") {
  const auto shots =
      boundaries_from_probabilities(std::vector<double>(100, 0.0), 0.5);
  REQUIRE(shots.size() == 1);
  CHECK(shots[0].start_frame == 0);
  CHECK(shots[0].end_frame == 99);
}

TEST_CASE("boundaries: single spike ends the shot at the boundary frame") {
  std::vector<double> probs(100, 0.0);
  probs[50] = 0.9;
  const auto shots = boundaries_from_probabilities(probs, 0.5);
  REQUIRE(shots.size() == 2);
  CHECK(shots[0].start_frame == 0);
  CHECK(shots[0].end_frame == 50);
  CHECK(shots[1].start_frame == 51);
  CHECK(shots[1].end_frame == 99);
}

TEST_CASE("boundaries: consecutive boundary frames collapse into one cut") {
  std::vector<double> probs(20, 0.0);
  probs[5] = 0.8;
  probs[6] = 0.8;
  probs[19] = 0.9;  // boundary on the final frame adds no empty shot
  const auto shots = boundaries_from_probabilities(probs, 0.5);
  REQUIRE(shots.size() == 2);
  CHECK(shots[0].end_frame == 6);
  CHECK(shots[1].start_frame == 7);
  CHECK(shots[1].end_frame == 19);
}

TEST_CASE("boundaries: empty input and bad threshold rejected") {
  CHECK_THROWS_AS(boundaries_from_probabilities({}, 0.5), ValidationError);
  CHECK_THROWS_AS(boundaries_from_probabilities({0.1}, 0.0), ValidationError);
}

TEST_CASE("boundaries: threshold sweep monotonicity") {
  std::mt19937_64 rng(401);
  const std::vector<double> thresholds{0.1, 0.3, 0.5};
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 20 + static_cast<int>(next_index(rng, 180));

    // Boundary-frame count is non-increasing for arbitrary vectors.
    std::vector<double> dense(static_cast<std::size_t>(n));
    for (auto& p : dense) p = next_unit(rng);
    std::vector<std::size_t> frame_counts;
    for (double t : thresholds)
      frame_counts.push_back(static_cast<std::size_t>(
          std::count_if(dense.begin(), dense.end(),
                        [t](double p) { return p >= t; })));
    CHECK(frame_counts[0] >= frame_counts[1]);
    CHECK(frame_counts[1] >= frame_counts[2]);

    // Shot count is non-increasing for detector-style isolated spikes.
    // (Adjacent above-threshold runs collapse into one cut, so a run can
    // split as the threshold rises; isolation rules that out.)
    std::vector<double> sparse(static_cast<std::size_t>(n), 0.0);
    for (int b = 0; b < n / 8; ++b) {
      const auto f = next_index(rng, static_cast<std::size_t>(n));
      const bool isolated =
          (f == 0 || sparse[f - 1] == 0.0) &&
          (f + 1 >= sparse.size() || sparse[f + 1] == 0.0);
      if (isolated) sparse[f] = next_unit(rng);
    }
    std::size_t prev = SIZE_MAX;
    for (double t : thresholds) {
      const auto shots = boundaries_from_probabilities(sparse, t);
      CHECK(shots.size() <= prev);
      prev = shots.size();
      CHECK(shots.back().end_frame == n - 1);  // tiling
      CHECK(shots.front().start_frame == 0);
    }
  }
}

TEST_CASE("manifest parse failures name the file") {
  const auto dir = testing::make_temp_dir("manifest_parse");
  atomic_write_file(dir / "broken.json", "{not json");
  CHECK_THROWS_WITH_AS(load_manifest(dir / "broken.json"),
                       doctest::Contains("parse failure"), ValidationError);
  atomic_write_file(dir / "object.json", "{}");
  CHECK_THROWS_WITH_AS(load_manifest(dir / "object.json"),
                       doctest::Contains("top-level list"), ValidationError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("boundary probabilities load from text and JSON by extension") {
  const auto dir = testing::make_temp_dir("probs");
  atomic_write_file(dir / "p.txt", "0.0\n0.9\n0.25\n");
  const auto txt = load_boundary_probs(dir / "p.txt");
  CHECK(txt == std::vector<double>{0.0, 0.9, 0.25});
  atomic_write_file(dir / "p.json", "[0.0, 0.9, 0.25]");
  CHECK(load_boundary_probs(dir / "p.json") == txt);
  atomic_write_file(dir / "bad.json", "{\"not\": \"an array\"}");
  CHECK_THROWS_AS(load_boundary_probs(dir / "bad.json"), ValidationError);
  atomic_write_file(dir / "range.txt", "1.5\n");
  CHECK_THROWS_AS(load_boundary_probs(dir / "range.txt"), ValidationError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("labels: empty mapping yields all zeros") {
  AdPair p = tiled_pair(20, {9, 19}, 10, {9});
  p.mapping = ShotMapping{};
  const auto labels = labels_from_mapping(p);
  CHECK(labels.values.size() == 20);
  CHECK(labels.positives() == 0);
}

TEST_CASE("labels: mapped shot frames get ones") {
  AdPair p = tiled_pair(20, {9, 19}, 10, {9});
  p.mapping = ShotMapping{{MappingEntry{0, 1, 0.9}}};
  const auto labels = labels_from_mapping(p);
  for (int f = 0; f < 10; ++f) CHECK(labels.values[f] == 0);
  for (int f = 10; f < 20; ++f) CHECK(labels.values[f] == 1);
}

TEST_CASE("labels: two short shots on one long shot count it once") {
  AdPair p = tiled_pair(40, {9, 19, 29, 39}, 20, {9, 19});
  p.mapping =
      ShotMapping{{MappingEntry{0, 3, 0.9}, MappingEntry{1, 3, 0.8}}};
  const auto labels = labels_from_mapping(p);
  CHECK(labels.positives() == 10);
}

TEST_CASE("labels: unknown shot id is rejected") {
  AdPair p = tiled_pair(20, {9, 19}, 10, {9});
  p.mapping = ShotMapping{{MappingEntry{0, 7, 0.9}}};
  CHECK_THROWS_WITH_AS(labels_from_mapping(p),
                       doctest::Contains("unknown"), ValidationError);
}

TEST_CASE("labels consistency property: positives equal mapped frame total") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 2 + static_cast<int>(next_index(rng, 8));
    std::vector<int> ends;
    int f = 0;
    for (int s = 0; s < m; ++s) {
      f += 1 + static_cast<int>(next_index(rng, 30));
      ends.push_back(f - 1);
    }
    AdPair p = tiled_pair(f, ends, 10, {9});
    ShotMapping mapping;
    std::set<int> mapped;
    const int k = 1 + static_cast<int>(next_index(rng, m));
    for (int i = 0; i < k; ++i) {
      const int target = static_cast<int>(next_index(rng, m));
      mapping.entries.push_back(MappingEntry{i, target, 1.0});
      mapped.insert(target);
    }
    p.mapping = mapping;
    int expected = 0;
    for (int s : mapped) expected += p.long_video.shots[s].frame_count();
    CHECK(labels_from_mapping(p).positives() == expected);
  }
}

TEST_CASE("folds: 102 pairs split 21/21/20/20/20") {
  std::vector<std::string> ids;
  for (int i = 0; i < 102; ++i) ids.push_back("pair" + std::to_string(i));
  const auto split = make_folds(ids, 5, 7);
  REQUIRE(split.folds.size() == 5);
  std::multiset<std::size_t> sizes;
  for (const auto& f : split.folds) sizes.insert(f.size());
  CHECK(sizes == std::multiset<std::size_t>{20, 20, 20, 21, 21});
}

TEST_CASE("folds: forced partition and determinism") {
  std::vector<std::string> ids{"a", "b", "c", "d", "e"};
  const auto split = make_folds(ids, 5, 3);
  for (const auto& f : split.folds) CHECK(f.size() == 1);
  const auto again = make_folds(ids, 5, 3);
  CHECK(split.folds == again.folds);
  const auto other_seed = make_folds(ids, 5, 4);
  CHECK(other_seed.folds != split.folds);  // overwhelmingly likely
}

TEST_CASE("folds: partition property on random sizes") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 2 + static_cast<int>(next_index(rng, 6));
    const int n = k + static_cast<int>(next_index(rng, 60));
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
    const auto split = make_folds(ids, k, rng());
    std::set<std::string> seen;
    std::size_t min_size = SIZE_MAX, max_size = 0;
    for (const auto& fold : split.folds) {
      min_size = std::min(min_size, fold.size());
      max_size = std::max(max_size, fold.size());
      for (const auto& id : fold) CHECK(seen.insert(id).second);
    }
    CHECK(seen.size() == static_cast<std::size_t>(n));
    CHECK(max_size - min_size <= 1);
  }
}

TEST_CASE("folds: fewer pairs than folds rejected") {
  CHECK_THROWS_AS(make_folds(std::vector<std::string>{"a", "b"}, 5, 1),
                  ValidationError);
  CHECK_THROWS_AS(make_folds(std::vector<std::string>{"a", "b"}, 1, 1),
                  ValidationError);
}
