/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#pragma once

#include <string>
#include <string_view>

#include "pathforge/rewriter.hpp"

namespace pathforge {

/**
 * Reads `key = value` lines into rewrite options. Blank lines and `#`
 * comments are ignored; values may be quoted. Recognised keys:
 *
 *   max_paths         simple paths enumerated per closure (default 10000)
 *   max_alternatives  alternatives per relation atom (default 64)
 *
 * Throws LoadError on unknown keys or malformed values.
 */
RewriteOptions parse_config(std::string_view text, RewriteOptions base = {});
RewriteOptions load_config_file(const std::string& path, RewriteOptions base = {});

}  // namespace pathforge
