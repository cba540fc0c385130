#pragma once

#include <vector>

#include "seqhand/camera.hpp"
#include "seqhand/hand_model.hpp"
#include "seqhand/image.hpp"

namespace seqhand {

struct Raster {
  int width = 0;
  int height = 0;
  Image rgb;                       // 3 channels; black where the mask is false
  std::vector<std::uint8_t> mask;  // 1 where any fragment was written
  std::vector<double> depth;       // +inf where the mask is false

  bool covered(int x, int y) const {
    return mask[static_cast<std::size_t>(y) * width + x] != 0;
  }
  std::size_t coverage() const;
  Image mask_image() const;  // 0 / 255 gray
};

// Flat-shaded z-buffer rasterization under the weak-perspective camera.
// Pixel centres sit on integer coordinates; a centre on a triangle edge counts
// as inside. Depth is the rotated z, nearer (smaller) wins, first write wins
// on equal depth.
Raster rasterize(const HandMesh& mesh, const CameraParams& cam, int width, int height);

// Same, for already projected vertices with explicit depth.
Raster rasterize_projected(std::span<const Vec2> points, std::span<const double> depth,
                           std::span<const std::array<int, 3>> faces,
                           std::span<const std::array<std::uint8_t, 3>> colors, int width, int height);

// Hand pixels over the background crop whose top-left corner is `offset`.
Image composite(const Raster& raster, const Image& background, int offset_x, int offset_y);

}  // namespace seqhand
