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

#include "pathforge/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "pathforge/error.hpp"

namespace pathforge {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::size_t positive(std::string_view key, std::string_view value, int line) {
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
    if (ec != std::errc() || ptr != value.data() + value.size() || n == 0) {
        throw LoadError("config line " + std::to_string(line) + ": " + std::string(key) +
                        " needs a positive integer, got '" + std::string(value) + "'");
    }
    return n;
}

}  // namespace

RewriteOptions parse_config(std::string_view text, RewriteOptions base) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view l = raw;
        if (auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
        l = trim(l);
        if (l.empty()) continue;
        auto eq = l.find('=');
        if (eq == std::string_view::npos) throw LoadError("config line " + std::to_string(line) + ": expected key = value");
        std::string_view key = trim(l.substr(0, eq));
        std::string_view value = trim(l.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);

        if (key == "max_paths") {
            base.infer.max_paths = positive(key, value, line);
        } else if (key == "max_alternatives") {
            base.max_alternatives = positive(key, value, line);
        } else {
            throw LoadError("config line " + std::to_string(line) + ": unknown key '" + std::string(key) + "'");
        }
    }
    return base;
}

RewriteOptions load_config_file(const std::string& path, RewriteOptions base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), base);
}

}  // namespace pathforge
