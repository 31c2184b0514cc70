#include "append_file.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "layoutminer/core/error.hpp"

namespace layoutminer::detail {

namespace {

[[noreturn]] void io_failure(const std::string& what, int err) {
  if (err == ENOSPC || err == EDQUOT) {
    throw Error(ErrorCode::StorageFull, what + ": " + std::strerror(err));
  }
  throw Error(ErrorCode::IoError, what + ": " + std::strerror(err));
}

void write_all(int fd, std::string_view bytes, const std::string& path) {
  while (!bytes.empty()) {
    const ssize_t n = ::write(fd, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      io_failure("write " + path, errno);
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace

AppendFile::AppendFile(const std::filesystem::path& path, bool sync)
    : sync_(sync), path_(path.string()) {
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) io_failure("open " + path_, errno);
}

AppendFile::AppendFile(AppendFile&& other) noexcept
    : fd_(other.fd_), sync_(other.sync_), path_(std::move(other.path_)) {
  other.fd_ = -1;
}

AppendFile& AppendFile::operator=(AppendFile&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.fd_;
    sync_ = other.sync_;
    path_ = std::move(other.path_);
    other.fd_ = -1;
  }
  return *this;
}

AppendFile::~AppendFile() {
  if (fd_ >= 0) ::close(fd_);
}

void AppendFile::append(std::string_view bytes) {
  write_all(fd_, bytes, path_);
  if (sync_ && ::fdatasync(fd_) != 0) io_failure("fdatasync " + path_, errno);
}

std::vector<std::string> read_journal_lines(const std::filesystem::path& path,
                                            bool (*accept)(std::string_view line)) {
  std::vector<std::string> lines;
  if (!std::filesystem::exists(path)) return lines;
  const std::string content = read_file(path);
  std::size_t start = 0;
  std::size_t valid_end = 0;
  while (start < content.size()) {
    const auto nl = content.find('\n', start);
    if (nl == std::string::npos) break;
    lines.emplace_back(content.substr(start, nl - start));
    start = nl + 1;
    valid_end = start;
  }
  if (!lines.empty() && !accept(lines.back())) {
    valid_end -= lines.back().size() + 1;
    lines.pop_back();
  }
  if (valid_end != content.size()) {
    if (::truncate(path.c_str(), static_cast<off_t>(valid_end)) != 0) {
      io_failure("truncate " + path.string(), errno);
    }
  }
  return lines;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes, bool sync) {
  auto tmp = path;
  tmp += ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) io_failure("open " + tmp.string(), errno);
  try {
    write_all(fd, bytes, tmp.string());
    if (sync && ::fsync(fd) != 0) io_failure("fsync " + tmp.string(), errno);
  } catch (...) {
    ::close(fd);
    ::unlink(tmp.c_str());
    throw;
  }
  ::close(fd);
  if (::rename(tmp.c_str(), path.c_str()) != 0) io_failure("rename " + path.string(), errno);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

}  // namespace layoutminer::detail
