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

#include "adclip/feature_cache.hpp"

#include <bit>
#include <cstring>

#include "adclip/errors.hpp"
#include "adclip/util.hpp"

static_assert(std::endian::native == std::endian::little,
              "feature file format assumes a little-endian host");

namespace adclip {

namespace {

constexpr char kMagic[4] = {'F', 'M', 'C', '1'};

void append_u32(std::string& out, std::uint32_t v) {
  out.append(reinterpret_cast<const char*>(&v), 4);
}

std::uint32_t take_u32(const std::string& d, std::size_t& off) {
  if (off + 4 > d.size()) throw ValidationError("truncated feature file");
  std::uint32_t v;
  std::memcpy(&v, d.data() + off, 4);
  off += 4;
  return v;
}

}  // namespace

void write_feature_map(const std::filesystem::path& path,
                       const FeatureMap& map) {
  std::string out;
  const std::size_t payload =
      static_cast<std::size_t>(map.values.size()) * sizeof(float);
  out.reserve(18 + map.backend_id.size() + payload);
  out.append(kMagic, 4);
  out.push_back(map.stream == Stream::visual ? 0 : 1);
  out.push_back(0);  // dtype f32
  append_u32(out, static_cast<std::uint32_t>(map.backend_id.size()));
  out.append(map.backend_id);
  append_u32(out, static_cast<std::uint32_t>(map.num_clips()));
  append_u32(out, static_cast<std::uint32_t>(map.dim()));
  out.append(reinterpret_cast<const char*>(map.values.data()), payload);
  atomic_write_file(path, out);
}

FeatureMap read_feature_map(const std::filesystem::path& path) {
  const std::string d = read_text_file(path);
  if (d.size() < 18 || std::memcmp(d.data(), kMagic, 4) != 0)
    throw ValidationError("bad feature file magic: " + path.string());
  std::size_t off = 4;
  const unsigned char stream_byte = static_cast<unsigned char>(d[off++]);
  const unsigned char dtype = static_cast<unsigned char>(d[off++]);
  if (stream_byte > 1 || dtype != 0)
    throw ValidationError("unsupported feature file header: " + path.string());
  const std::uint32_t id_len = take_u32(d, off);
  if (off + id_len > d.size())
    throw ValidationError("truncated feature file: " + path.string());
  FeatureMap map;
  map.stream = stream_byte == 0 ? Stream::visual : Stream::audio;
  map.backend_id = d.substr(off, id_len);
  off += id_len;
  const std::uint32_t rows = take_u32(d, off);
  const std::uint32_t cols = take_u32(d, off);
  const std::size_t payload = std::size_t{rows} * cols * sizeof(float);
  if (off + payload != d.size())
    throw ValidationError("feature file size mismatch: " + path.string());
  map.values.resize(rows, cols);
  std::memcpy(map.values.data(), d.data() + off, payload);
  if (!map.values.allFinite())
    throw ValidationError("feature file holds non-finite values: " +
                          path.string());
  return map;
}

FeatureCache::FeatureCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path FeatureCache::path_for(
    const FeatureCacheKey& key) const {
  // '_' is always percent-encoded inside components, so the "__" separators
  // below cannot occur within them.
  return dir_ / (encode_component(key.video_id) + "__" +
                 encode_component(key.backend_id) + "__s" +
                 std::to_string(key.stride) + "__h" +
                 std::to_string(key.hws) + ".fmc");
}

std::optional<FeatureMap> FeatureCache::get(const FeatureCacheKey& key) {
  const auto path = path_for(key);
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    return read_feature_map(path);
  } catch (const ValidationError& e) {
    std::lock_guard<std::mutex> lock(mutex_);
    warnings_.push_back(std::string("corrupt cache entry treated as miss: ") +
                        e.what());
    return std::nullopt;
  }
}

void FeatureCache::put(const FeatureCacheKey& key, const FeatureMap& map) {
  write_feature_map(path_for(key), map);
}

std::vector<std::string> FeatureCache::take_warnings() {
  std::lock_guard<std::mutex> lock(mutex_);
  return std::exchange(warnings_, {});
}

}  // namespace adclip
