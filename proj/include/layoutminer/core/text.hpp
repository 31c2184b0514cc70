#pragma once

#include <string>
#include <string_view>

namespace layoutminer {

std::string_view trim(std::string_view text) noexcept;
std::string to_lower(std::string_view text);

// Trim, ASCII-lowercase and collapse internal whitespace runs to one space.
std::string normalize_label(std::string_view text);

bool icontains(std::string_view haystack, std::string_view needle);
bool istarts_with(std::string_view text, std::string_view prefix);

}  // namespace layoutminer
