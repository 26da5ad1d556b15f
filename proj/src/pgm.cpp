#include "sbm/pgm.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <vector>

namespace sbm {

namespace {

void skip_space_and_comments(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

std::size_t read_header_field(std::istream& in, const char* name) {
  skip_space_and_comments(in);
  if (!std::isdigit(in.peek())) {
    throw ImageError(ImageErrorCode::kMalformedHeader, std::string("pnm: missing ") + name);
  }
  std::size_t value = 0;
  in >> value;
  if (!in) throw ImageError(ImageErrorCode::kMalformedHeader, std::string("pnm: bad ") + name);
  return value;
}

}  // namespace

GrayImage read_pnm(std::istream& in) {
  char magic[2] = {0, 0};
  if (!in.read(magic, 2) || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5' && magic[1] != '6')) {
    throw ImageError(ImageErrorCode::kMalformedHeader, "pnm: expected P2, P5 or P6 magic");
  }
  const std::size_t width = read_header_field(in, "width");
  const std::size_t height = read_header_field(in, "height");
  const std::size_t maxval = read_header_field(in, "maxval");
  if (width == 0 || height == 0) throw ImageError(ImageErrorCode::kMalformedHeader, "pnm: zero dimension");
  if (maxval == 0 || maxval > 255) {
    throw ImageError(ImageErrorCode::kUnsupportedDepth,
                     "pnm: maxval " + std::to_string(maxval) + " is not an 8-bit depth");
  }
  GrayImage image(width, height);
  auto pixels = image.data();

  if (magic[1] == '2') {
    for (auto& px : pixels) {
      skip_space_and_comments(in);
      if (in.peek() == EOF) throw ImageError(ImageErrorCode::kTruncated, "pnm: truncated pixel data");
      unsigned value = 0;
      if (!(in >> value)) throw ImageError(ImageErrorCode::kMalformedHeader, "pnm: bad pixel value");
      if (value > maxval) throw ImageError(ImageErrorCode::kMalformedHeader, "pnm: pixel above maxval");
      px = static_cast<std::uint8_t>(value);
    }
    return image;
  }

  // Exactly one whitespace byte separates the header from binary data.
  if (!std::isspace(in.get())) throw ImageError(ImageErrorCode::kMalformedHeader, "pnm: missing separator");
  const std::size_t channels = magic[1] == '6' ? 3 : 1;
  std::vector<char> raw(width * height * channels);
  in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw ImageError(ImageErrorCode::kTruncated, "pnm: truncated pixel data");
  }
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    if (channels == 1) {
      pixels[i] = static_cast<std::uint8_t>(raw[i]);
    } else {
      const unsigned r = static_cast<std::uint8_t>(raw[3 * i]);
      const unsigned g = static_cast<std::uint8_t>(raw[3 * i + 1]);
      const unsigned b = static_cast<std::uint8_t>(raw[3 * i + 2]);
      pixels[i] = static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
    }
  }
  return image;
}

GrayImage load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError(ImageErrorCode::kMissingFile, "cannot open " + path.string());
  return read_pnm(in);
}

void write_pgm(std::ostream& out, const GrayImage& image) {
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  const auto pixels = image.data();
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

void save_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ImageError(ImageErrorCode::kWriteFailed, "cannot create " + path.string());
  write_pgm(out, image);
  out.flush();
  if (!out) throw ImageError(ImageErrorCode::kWriteFailed, "write failed for " + path.string());
}

}  // namespace sbm
