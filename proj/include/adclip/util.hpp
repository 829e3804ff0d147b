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
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace adclip {

// FNV-1a, 64 bit. Used for config fingerprints and for deriving backend
// seeds from id strings; stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view data,
                      std::uint64_t seed = 0xcbf29ce484222325ull);

std::string to_hex(std::uint64_t value);

// Uniform helpers built directly on mt19937_64 output bits.
// std::uniform_*_distribution is not bit-portable across standard library
// implementations, so seeded randomness that ends up in artifacts must not
// go through it.
double next_unit(std::mt19937_64& rng);                      // [0, 1)
double next_uniform(std::mt19937_64& rng, double lo, double hi);
std::size_t next_index(std::mt19937_64& rng, std::size_t n);  // [0, n)

// Fisher-Yates with next_index; deterministic for a fixed generator state.
template <typename T>
void seeded_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = next_index(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

// Percent-encodes everything outside [A-Za-z0-9.-], including '_' and '%'.
// The encoding is injective, so names composed with "__" separators cannot
// collide.
std::string encode_component(std::string_view s);

std::string read_text_file(const std::filesystem::path& path);

// Write-temp-then-rename; readers never observe a partial file.
void atomic_write_file(const std::filesystem::path& path,
                       std::string_view contents);

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Exceptions are
// captured and the first one rethrown after all workers finish.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace adclip
