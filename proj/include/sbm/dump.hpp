#pragma once

// Binary per-pixel distribution dump. All integers little-endian.
//
//   offset  size  field
//   0       4     magic "SBMD"
//   4       2     version (1)
//   6       2     flags; bit 0 set when values are quantized reference scores
//   8       4     region width
//   12      4     region height
//   16      4     region origin x (feature-map coordinates)
//   20      4     region origin y
//   24      4     d_max
//   28      4     n_max (65535 for quantized reference scores)
//   32            invalid bitmap, ceil(width * height / 8) bytes
//                 no-match bitmap, same size
//                 timeout bitmap, same size
//                 per non-invalid pixel, row-major: d_max + 2 uint16 counts,
//                 the last one being the no-match channel
//
// Bitmaps are row-major over the region, bit i at byte i / 8, bit i % 8.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "sbm/disparity_result.hpp"

namespace sbm {

inline constexpr std::uint16_t kDumpVersion = 1;
inline constexpr std::uint16_t kDumpFlagReference = 1;
inline constexpr std::uint32_t kReferenceScale = 65535;

class DumpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DumpHeader {
  std::uint16_t version = kDumpVersion;
  std::uint16_t flags = 0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t origin_x = 0;
  std::uint32_t origin_y = 0;
  std::uint32_t d_max = 0;
  std::uint32_t n_max = 0;

  friend bool operator==(const DumpHeader&, const DumpHeader&) = default;
};

/// Stochastic results store their counts verbatim; reference results store
/// round(value * 65535).
void write_dump(std::ostream& out, const DisparityResult& result);
void save_dump(const std::filesystem::path& path, const DisparityResult& result);

DumpHeader read_dump_header(std::istream& in);

/// Rebuilds a result: distributions are counts / n_max and matched pixels
/// take the lowest index holding the largest count. Cycle counts are not stored.
DisparityResult read_dump(std::istream& in, DumpHeader* header = nullptr);
DisparityResult load_dump(const std::filesystem::path& path, DumpHeader* header = nullptr);

}  // namespace sbm
