#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace thinplate::cli {

/// 17 significant digits, enough to round-trip any double.
std::string fmt17(double v);

/// A header plus rows of numbers or text, rendered with fmt17.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<double>& values);
  void add_text_row(const std::vector<std::string>& cells);
  std::size_t rows() const { return rows_; }
  std::string str() const;

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string body_;
};

/// Writes to a sibling temporary file and renames it over the target.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// SHA-1 of "blob <size>\0" + content, as git hash-object computes it.
std::string git_blob_sha1(std::string_view content);

}  // namespace thinplate::cli
