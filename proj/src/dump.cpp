#include "sbm/dump.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace sbm {

namespace {

constexpr char kMagic[4] = {'S', 'B', 'M', 'D'};

void put_u16(std::vector<char>& buf, std::uint16_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::vector<char>& buf, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) buf.push_back(static_cast<char>((v >> s) & 0xff));
}

std::uint32_t get_le(const unsigned char* p, int bytes) {
  std::uint32_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void read_exact(std::istream& in, void* dst, std::size_t n) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw DumpError("dump: truncated file");
}

bool bit(const std::vector<unsigned char>& map, std::size_t i) { return (map[i >> 3] >> (i & 7)) & 1; }

}  // namespace

void write_dump(std::ostream& out, const DisparityResult& result) {
  const bool reference = !result.is_stochastic();
  if (result.n_max > 0xffff) throw DumpError("dump: n_max exceeds 16 bits");
  const std::size_t area = result.region.area();
  const std::size_t channels = result.channels();

  std::vector<char> buf(kMagic, kMagic + 4);
  put_u16(buf, kDumpVersion);
  put_u16(buf, reference ? kDumpFlagReference : 0);
  put_u32(buf, static_cast<std::uint32_t>(result.region.width));
  put_u32(buf, static_cast<std::uint32_t>(result.region.height));
  put_u32(buf, static_cast<std::uint32_t>(result.region.x0));
  put_u32(buf, static_cast<std::uint32_t>(result.region.y0));
  put_u32(buf, result.d_max);
  put_u32(buf, reference ? kReferenceScale : result.n_max);

  const std::size_t map_bytes = (area + 7) / 8;
  std::vector<unsigned char> invalid(map_bytes, 0), nomatch(map_bytes, 0), timeout(map_bytes, 0);
  for (std::size_t i = 0; i < area; ++i) {
    const auto mask = static_cast<unsigned char>(1U << (i & 7));
    switch (result.pixels[i].state) {
      case PixelState::kInvalid: invalid[i >> 3] |= mask; break;
      case PixelState::kNoMatch: nomatch[i >> 3] |= mask; break;
      case PixelState::kTimeout: timeout[i >> 3] |= mask; break;
      case PixelState::kMatched: break;
    }
  }
  for (const auto* map : {&invalid, &nomatch, &timeout}) buf.insert(buf.end(), map->begin(), map->end());

  for (std::size_t i = 0; i < area; ++i) {
    if (result.pixels[i].state == PixelState::kInvalid) continue;
    for (std::size_t j = 0; j < channels; ++j) {
      std::uint32_t v;
      if (reference) {
        v = static_cast<std::uint32_t>(std::lround(result.distribution(i)[j] * kReferenceScale));
      } else {
        v = result.pixel_counts(i)[j];
      }
      put_u16(buf, static_cast<std::uint16_t>(std::min<std::uint32_t>(v, 0xffff)));
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw DumpError("dump: write failed");
}

void save_dump(const std::filesystem::path& path, const DisparityResult& result) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DumpError("dump: cannot create " + path.string());
  write_dump(out, result);
  out.flush();
  if (!out) throw DumpError("dump: write failed for " + path.string());
}

DumpHeader read_dump_header(std::istream& in) {
  unsigned char raw[32];
  read_exact(in, raw, sizeof raw);
  if (!std::equal(kMagic, kMagic + 4, reinterpret_cast<const char*>(raw))) throw DumpError("dump: bad magic");
  DumpHeader h;
  h.version = static_cast<std::uint16_t>(get_le(raw + 4, 2));
  h.flags = static_cast<std::uint16_t>(get_le(raw + 6, 2));
  h.width = get_le(raw + 8, 4);
  h.height = get_le(raw + 12, 4);
  h.origin_x = get_le(raw + 16, 4);
  h.origin_y = get_le(raw + 20, 4);
  h.d_max = get_le(raw + 24, 4);
  h.n_max = get_le(raw + 28, 4);
  if (h.version != kDumpVersion) throw DumpError("dump: unsupported version " + std::to_string(h.version));
  if (h.n_max == 0 || h.n_max > 0xffff || h.d_max == 0) throw DumpError("dump: bad header values");
  return h;
}

DisparityResult read_dump(std::istream& in, DumpHeader* header_out) {
  const DumpHeader h = read_dump_header(in);
  const bool reference = (h.flags & kDumpFlagReference) != 0;
  Region region{h.origin_x, h.origin_y, h.width, h.height};
  DisparityResult result(region, h.d_max, reference ? 0 : h.n_max);
  const std::size_t area = region.area();
  const std::size_t map_bytes = (area + 7) / 8;
  std::vector<unsigned char> invalid(map_bytes), nomatch(map_bytes), timeout(map_bytes);
  read_exact(in, invalid.data(), map_bytes);
  read_exact(in, nomatch.data(), map_bytes);
  read_exact(in, timeout.data(), map_bytes);

  const std::size_t channels = result.channels();
  std::vector<unsigned char> raw(channels * 2);
  std::vector<std::uint32_t> counts(channels);
  for (std::size_t i = 0; i < area; ++i) {
    PixelOutcome& px = result.pixels[i];
    if (bit(invalid, i)) continue;
    read_exact(in, raw.data(), raw.size());
    for (std::size_t j = 0; j < channels; ++j) counts[j] = get_le(raw.data() + 2 * j, 2);
    auto dist = result.distribution(i);
    for (std::size_t j = 0; j < channels; ++j) dist[j] = static_cast<double>(counts[j]) / h.n_max;
    if (!reference) std::copy(counts.begin(), counts.end(), result.counts.begin() + static_cast<std::ptrdiff_t>(i * channels));
    if (bit(timeout, i)) {
      px.state = PixelState::kTimeout;
    } else if (bit(nomatch, i)) {
      px.state = PixelState::kNoMatch;
    } else {
      px.state = PixelState::kMatched;
      const auto best = std::max_element(counts.begin(), counts.end() - 1);
      px.disparity = static_cast<std::uint32_t>(best - counts.begin());
    }
  }
  if (header_out) *header_out = h;
  return result;
}

DisparityResult load_dump(const std::filesystem::path& path, DumpHeader* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DumpError("dump: cannot open " + path.string());
  return read_dump(in, header);
}

}  // namespace sbm
