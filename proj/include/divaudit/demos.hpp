#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace divaudit {

std::vector<std::string> demo_names();
std::optional<std::string> demo_text(std::string_view name);

}  // namespace divaudit
