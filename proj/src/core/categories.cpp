#include "layoutminer/core/categories.hpp"

#include <algorithm>
#include <fstream>

#include "layoutminer/core/error.hpp"
#include "layoutminer/core/text.hpp"

namespace layoutminer {

CategoryList::CategoryList(std::vector<std::string> labels) : labels_(std::move(labels)) {}

const CategoryList& CategoryList::app_store() {
  static const CategoryList list({
      "Books",        "Business",         "Developer Tools",
      "Education",    "Entertainment",    "Finance",
      "Food & Drink", "Games",            "Graphics & Design",
      "Health & Fitness", "Kids",         "Lifestyle",
      "Magazines & Newspapers", "Medical", "Music",
      "Navigation",   "News",             "Photo & Video",
      "Productivity", "Reference",        "Safari Extensions",
      "Shopping",     "Social Networking", "Sports",
      "Travel",       "Utilities",        "Weather",
  });
  return list;
}

CategoryList CategoryList::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read category list " + path.string());
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    auto label = trim(line);
    if (label.empty() || label.front() == '#') continue;
    labels.emplace_back(label);
  }
  if (labels.empty()) throw Error(ErrorCode::InvalidArgument, "empty category list " + path.string());
  return CategoryList(std::move(labels));
}

bool CategoryList::contains(std::string_view label) const noexcept {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

}  // namespace layoutminer
