#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace layoutminer::detail {

// Append-only file handle. Each append is a single write of one complete
// record line, optionally followed by fdatasync.
class AppendFile {
 public:
  AppendFile() = default;
  AppendFile(const std::filesystem::path& path, bool sync);
  AppendFile(AppendFile&& other) noexcept;
  AppendFile& operator=(AppendFile&& other) noexcept;
  AppendFile(const AppendFile&) = delete;
  AppendFile& operator=(const AppendFile&) = delete;
  ~AppendFile();

  bool is_open() const noexcept { return fd_ >= 0; }
  void append(std::string_view bytes);

 private:
  int fd_ = -1;
  bool sync_ = false;
  std::string path_;
};

// Reads newline-terminated lines. A trailing fragment without a newline, or
// a final line rejected by `accept`, is a torn write: it is cut off the file
// so later appends start on a clean boundary.
std::vector<std::string> read_journal_lines(const std::filesystem::path& path,
                                            bool (*accept)(std::string_view line));

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes, bool sync);
std::string read_file(const std::filesystem::path& path);

}  // namespace layoutminer::detail
