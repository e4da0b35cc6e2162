#pragma once

// Output files of one CLI run. Files land under their final names only after
// a full write; anything written is removed again unless the run commits.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dysoncli {

std::string sha256_hex(std::string_view data);

struct FileEntry {
  std::string name;
  std::uintmax_t bytes = 0;
  std::string sha256;
};

class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir);
  ~ArtifactWriter();
  ArtifactWriter(const ArtifactWriter&) = delete;
  ArtifactWriter& operator=(const ArtifactWriter&) = delete;

  void write(const std::string& name, std::string_view content);
  const std::vector<FileEntry>& files() const noexcept { return files_; }
  const std::filesystem::path& dir() const noexcept { return dir_; }
  void commit() noexcept { committed_ = true; }

 private:
  std::filesystem::path dir_;
  std::vector<FileEntry> files_;
  bool created_dir_ = false;
  bool committed_ = false;
};

}  // namespace dysoncli
