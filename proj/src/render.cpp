#include "seqhand/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seqhand/error.hpp"

namespace seqhand {

std::size_t Raster::coverage() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

Image Raster::mask_image() const {
  Image out(width, height, 1);
  for (std::size_t i = 0; i < mask.size(); ++i) out.data[i] = mask[i] ? 255 : 0;
  return out;
}

Raster rasterize_projected(std::span<const Vec2> points, std::span<const double> depth,
                           std::span<const std::array<int, 3>> faces,
                           std::span<const std::array<std::uint8_t, 3>> colors, int width, int height) {
  if (width <= 0 || height <= 0) fail(ErrorKind::InvalidArgument, "raster size must be positive");
  if (depth.size() != points.size() || colors.size() != points.size()) {
    fail(ErrorKind::InvalidArgument, "per-vertex arrays differ in length");
  }
  Raster r;
  r.width = width;
  r.height = height;
  r.rgb = Image(width, height, 3);
  r.mask.assign(static_cast<std::size_t>(width) * height, 0);
  r.depth.assign(r.mask.size(), std::numeric_limits<double>::infinity());

  for (const auto& f : faces) {
    for (const int v : f) {
      if (v < 0 || static_cast<std::size_t>(v) >= points.size()) {
        fail(ErrorKind::InvalidArgument, "face references a missing vertex");
      }
    }
    const Vec2& a = points[static_cast<std::size_t>(f[0])];
    const Vec2& b = points[static_cast<std::size_t>(f[1])];
    const Vec2& c = points[static_cast<std::size_t>(f[2])];
    const double area = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    if (area == 0.0 || !std::isfinite(area)) continue;

    const double min_x = std::min({a.x(), b.x(), c.x()});
    const double max_x = std::max({a.x(), b.x(), c.x()});
    const double min_y = std::min({a.y(), b.y(), c.y()});
    const double max_y = std::max({a.y(), b.y(), c.y()});
    const int x0 = std::max(0, static_cast<int>(std::ceil(min_x)));
    const int x1 = std::min(width - 1, static_cast<int>(std::floor(max_x)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(min_y)));
    const int y1 = std::min(height - 1, static_cast<int>(std::floor(max_y)));
    if (x0 > x1 || y0 > y1) continue;

    const double za = depth[static_cast<std::size_t>(f[0])];
    const double zb = depth[static_cast<std::size_t>(f[1])];
    const double zc = depth[static_cast<std::size_t>(f[2])];
    std::array<std::uint8_t, 3> color{};
    for (std::size_t ch = 0; ch < 3; ++ch) {
      const int sum = colors[static_cast<std::size_t>(f[0])][ch] + colors[static_cast<std::size_t>(f[1])][ch] +
                      colors[static_cast<std::size_t>(f[2])][ch];
      color[ch] = static_cast<std::uint8_t>((sum + 1) / 3);
    }

    const double inv_area = 1.0 / area;
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const Vec2 p(x, y);
        // Each edge function on its own, so pixel centres on a shared edge test
        // as exactly zero; sign-normalised by the triangle orientation.
        const double wa = ((b - p).x() * (c - p).y() - (b - p).y() * (c - p).x()) * inv_area;
        const double wb = ((c - p).x() * (a - p).y() - (c - p).y() * (a - p).x()) * inv_area;
        const double wc = ((a - p).x() * (b - p).y() - (a - p).y() * (b - p).x()) * inv_area;
        if (wa < 0.0 || wb < 0.0 || wc < 0.0) continue;
        const double z = wa * za + wb * zb + wc * zc;
        const std::size_t idx = static_cast<std::size_t>(y) * width + x;
        if (z < r.depth[idx]) {
          r.depth[idx] = z;
          r.mask[idx] = 1;
          std::copy(color.begin(), color.end(), r.rgb.pixel(x, y));
        }
      }
    }
  }
  return r;
}

Raster rasterize(const HandMesh& mesh, const CameraParams& cam, int width, int height) {
  if (!cam.valid()) fail(ErrorKind::InvalidArgument, "invalid camera parameters");
  if (mesh.colors.size() != mesh.vertices.size()) {
    fail(ErrorKind::InvalidArgument, "mesh has no per-vertex colours");
  }
  const auto points = project_weak(std::span<const Vec3>(mesh.vertices), cam);
  const auto depth = camera_depth(std::span<const Vec3>(mesh.vertices), cam);
  return rasterize_projected(points, depth, mesh.faces, mesh.colors, width, height);
}

Image composite(const Raster& raster, const Image& background, int offset_x, int offset_y) {
  if (background.channels != 3) fail(ErrorKind::InvalidArgument, "background must be RGB");
  if (offset_x < 0 || offset_y < 0 || offset_x + raster.width > background.width ||
      offset_y + raster.height > background.height) {
    fail(ErrorKind::InvalidArgument, "background crop out of bounds");
  }
  Image out(raster.width, raster.height, 3);
  for (int y = 0; y < raster.height; ++y) {
    for (int x = 0; x < raster.width; ++x) {
      const std::uint8_t* src = raster.covered(x, y) ? raster.rgb.pixel(x, y)
                                                     : background.pixel(x + offset_x, y + offset_y);
      std::copy(src, src + 3, out.pixel(x, y));
    }
  }
  return out;
}

}  // namespace seqhand
