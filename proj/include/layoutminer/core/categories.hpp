#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace layoutminer {

// The closed set of widget category labels. Defaults to the 27 App Store
// categories (see docs/categories.md); a deployment may load its own list.
class CategoryList {
 public:
  explicit CategoryList(std::vector<std::string> labels);

  static const CategoryList& app_store();
  // One label per line; blank lines and lines starting with '#' are skipped.
  static CategoryList from_file(const std::filesystem::path& path);

  bool contains(std::string_view label) const noexcept;
  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  std::vector<std::string> labels_;
};

}  // namespace layoutminer
