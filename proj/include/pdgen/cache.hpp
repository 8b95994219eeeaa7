// Copyright 2026 The pdgen Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Content-addressed store for remote replies, one file per key.

#pragma once

#include <array>
#include <atomic>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace pdgen {

std::string sha256_hex(std::string_view data);

// Digest of (operation, model, rendered prompt).
std::string cache_key(std::string_view op, std::string_view model, std::string_view prompt);

class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  // Absent on a miss. An unreadable or mismatched entry is a miss and is
  // logged.
  std::optional<std::string> get(const std::string& key) const;
  // Creates the directory if needed; the write is atomic.
  void put(const std::string& key, const std::string& response) const;

  // Serves `key` from the cache or runs `compute` and stores its result.
  // Concurrent callers with the same key wait for one computation.
  std::string get_or_compute(const std::string& key, const std::function<std::string()>& compute);

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path path_for(const std::string& key) const;

  std::filesystem::path dir_;
  std::array<std::mutex, 64> stripes_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

}  // namespace pdgen
