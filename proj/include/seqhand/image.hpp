#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace seqhand {

// 8-bit interleaved image, row-major, channels = 1 (gray) or 3 (RGB).
struct Image {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<std::uint8_t> data;

  Image() = default;
  Image(int w, int h, int c) : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, 0) {}

  std::uint8_t* pixel(int x, int y) {
    return data.data() + (static_cast<std::size_t>(y) * width + x) * channels;
  }
  const std::uint8_t* pixel(int x, int y) const {
    return data.data() + (static_cast<std::size_t>(y) * width + x) * channels;
  }
  bool operator==(const Image&) const = default;
};

void write_png(const std::filesystem::path& path, const Image& image);
// Decodes to RGB (channels = 3) or, when `gray` is set, to 8-bit gray.
Image read_png(const std::filesystem::path& path, bool gray = false);

}  // namespace seqhand
