#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "layoutminer/core/types.hpp"

namespace layoutminer {

// Content-addressed blob storage. The key of a blob is the SHA-256 of its
// bytes, so storing the same bytes twice yields the same key and one copy.
//
// With a root directory, blobs live in <root>/<hash> and are written with
// tmp+rename; without one they are kept in memory. Thread-safe.
class BlobStore {
 public:
  BlobStore(std::optional<std::filesystem::path> root, bool sync,
            std::optional<std::uint64_t> capacity_bytes);

  // Throws Error(InvalidArgument) on empty input, Error(StorageFull) when the
  // capacity would be exceeded.
  BlobHash put(std::string_view bytes);
  std::optional<std::string> get(const BlobHash& hash) const;
  bool contains(const BlobHash& hash) const;
  std::vector<BlobHash> list() const;
  std::uint64_t total_bytes() const;

 private:
  std::optional<std::filesystem::path> root_;
  bool sync_;
  std::optional<std::uint64_t> capacity_;
  mutable std::mutex mutex_;
  std::map<BlobHash, std::uint64_t> sizes_;
  std::map<BlobHash, std::string> memory_;
  std::uint64_t total_ = 0;
};

}  // namespace layoutminer
