/* Copyright 2026 The dynloc Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dynloc {

/// One `key = value` line of a run config file.
struct ConfigEntry {
  std::string key;
  std::string value;
  long line = 0;
};

/// Parses the flat config format: one `key = value` per line, `#` starts a
/// comment, blank lines are ignored. Keys may repeat; the last one wins when
/// applied. Throws ParseError on a line without `=` or with an empty key.
std::vector<ConfigEntry> parse_config(std::istream& in);
std::vector<ConfigEntry> load_config(const std::filesystem::path& path);

}  // namespace dynloc
