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

#include "pdgen/cache.hpp"

#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pdgen/serialization.hpp"

namespace pdgen {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string cache_key(std::string_view op, std::string_view model, std::string_view prompt) {
  // Length-prefixed so that field boundaries cannot shift.
  std::string material;
  for (std::string_view part : {op, model, prompt}) {
    material += std::to_string(part.size());
    material += ':';
    material += part;
  }
  return sha256_hex(material);
}

std::filesystem::path ResponseCache::path_for(const std::string& key) const {
  return dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<std::string> ResponseCache::get(const std::string& key) const {
  auto path = path_for(key);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    Json j = Json::parse(buf.str());
    if (j.at("key").get<std::string>() != key) throw std::runtime_error("key mismatch");
    return j.at("response").get<std::string>();
  } catch (const std::exception& e) {
    spdlog::warn("ignoring corrupt cache entry {}: {}", path.string(), e.what());
    return std::nullopt;
  }
}

void ResponseCache::put(const std::string& key, const std::string& response) const {
  auto path = path_for(key);
  std::filesystem::create_directories(path.parent_path());
  Json j;
  j["key"] = key;
  j["response"] = response;
  std::ostringstream tmp_name;
  tmp_name << path.filename().string() << ".tmp." << std::this_thread::get_id();
  auto tmp = path.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << j.dump();
    if (!out) throw std::runtime_error("cannot write cache entry " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string ResponseCache::get_or_compute(const std::string& key, const std::function<std::string()>& compute) {
  std::lock_guard<std::mutex> lock(stripes_[std::hash<std::string>{}(key) % stripes_.size()]);
  if (auto hit = get(key)) {
    ++hits_;
    return *hit;
  }
  ++misses_;
  std::string response = compute();
  put(key, response);
  return response;
}

}  // namespace pdgen
