#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace faultplan::detail {

/// (name, JSON text) of every scenario under scenarios/, embedded at build time.
const std::vector<std::pair<std::string_view, std::string_view>>& bundled_scenarios();

}  // namespace faultplan::detail
