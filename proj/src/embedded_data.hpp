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

// Files from data/ compiled into the library.

#pragma once

#include <map>
#include <string>
#include <string_view>

namespace pdgen::embedded {

std::string_view rulepack_json();
std::string_view default_config_json();
// Operation name -> template text.
const std::map<std::string, std::string_view>& prompt_templates();

}  // namespace pdgen::embedded
