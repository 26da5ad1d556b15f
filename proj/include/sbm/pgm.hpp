#pragma once

// Portable graymap I/O. Binary 8-bit graymaps (P5) are the native format;
// plain graymaps (P2) and binary pixmaps (P6) are also read, the latter
// converted with integer luma weights (299 R + 587 G + 114 B + 500) / 1000.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "sbm/image.hpp"

namespace sbm {

enum class ImageErrorCode {
  kMissingFile,
  kMalformedHeader,
  kUnsupportedDepth,
  kTruncated,
  kWriteFailed,
};

class ImageError : public std::runtime_error {
 public:
  ImageError(ImageErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ImageErrorCode code() const noexcept { return code_; }

 private:
  ImageErrorCode code_;
};

GrayImage read_pnm(std::istream& in);
GrayImage load_image(const std::filesystem::path& path);

void write_pgm(std::ostream& out, const GrayImage& image);
void save_pgm(const std::filesystem::path& path, const GrayImage& image);

}  // namespace sbm
