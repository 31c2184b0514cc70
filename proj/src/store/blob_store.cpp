#include "layoutminer/store/blob_store.hpp"

#include "append_file.hpp"
#include "layoutminer/core/error.hpp"
#include "layoutminer/store/hash.hpp"

namespace layoutminer {

namespace fs = std::filesystem;

namespace {
bool looks_like_hash(const std::string& name) {
  if (name.size() != 64) return false;
  for (char c : name) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}
}  // namespace

BlobStore::BlobStore(std::optional<fs::path> root, bool sync,
                     std::optional<std::uint64_t> capacity_bytes)
    : root_(std::move(root)), sync_(sync), capacity_(capacity_bytes) {
  if (!root_) return;
  fs::create_directories(*root_);
  for (const auto& entry : fs::directory_iterator(*root_)) {
    const auto name = entry.path().filename().string();
    if (!entry.is_regular_file()) continue;
    if (!looks_like_hash(name)) {
      // Leftover of an interrupted tmp+rename.
      if (entry.path().extension() == ".tmp") fs::remove(entry.path());
      continue;
    }
    const auto size = entry.file_size();
    sizes_[name] = size;
    total_ += size;
  }
}

BlobHash BlobStore::put(std::string_view bytes) {
  if (bytes.empty()) throw Error(ErrorCode::InvalidArgument, "blob must not be empty");
  auto hash = sha256_hex(bytes);
  std::lock_guard lock(mutex_);
  if (sizes_.contains(hash)) return hash;
  if (capacity_ && total_ + bytes.size() > *capacity_) {
    throw Error(ErrorCode::StorageFull, "blob capacity of " + std::to_string(*capacity_) +
                                            " bytes exceeded");
  }
  if (root_) {
    detail::write_file_atomic(*root_ / hash, bytes, sync_);
  } else {
    memory_.emplace(hash, std::string(bytes));
  }
  sizes_[hash] = bytes.size();
  total_ += bytes.size();
  return hash;
}

std::optional<std::string> BlobStore::get(const BlobHash& hash) const {
  std::lock_guard lock(mutex_);
  if (!sizes_.contains(hash)) return std::nullopt;
  if (!root_) return memory_.at(hash);
  return detail::read_file(*root_ / hash);
}

bool BlobStore::contains(const BlobHash& hash) const {
  std::lock_guard lock(mutex_);
  return sizes_.contains(hash);
}

std::vector<BlobHash> BlobStore::list() const {
  std::lock_guard lock(mutex_);
  std::vector<BlobHash> out;
  out.reserve(sizes_.size());
  for (const auto& [hash, size] : sizes_) out.push_back(hash);
  return out;
}

std::uint64_t BlobStore::total_bytes() const {
  std::lock_guard lock(mutex_);
  return total_;
}

}  // namespace layoutminer
