#include "seqhand/image.hpp"

#include <cstring>

#include <png.h>

#include "seqhand/error.hpp"

namespace seqhand {

void write_png(const std::filesystem::path& path, const Image& image) {
  if (image.channels != 1 && image.channels != 3) {
    fail(ErrorKind::InvalidArgument, "PNG output needs 1 or 3 channels");
  }
  png_image desc;
  std::memset(&desc, 0, sizeof desc);
  desc.version = PNG_IMAGE_VERSION;
  desc.width = static_cast<png_uint_32>(image.width);
  desc.height = static_cast<png_uint_32>(image.height);
  desc.format = image.channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&desc, path.c_str(), 0, image.data.data(), 0, nullptr)) {
    const std::string msg = desc.message;
    png_image_free(&desc);
    fail(ErrorKind::Io, "cannot write " + path.string() + ": " + msg);
  }
}

Image read_png(const std::filesystem::path& path, bool gray) {
  png_image desc;
  std::memset(&desc, 0, sizeof desc);
  desc.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&desc, path.c_str())) {
    const std::string msg = desc.message;
    png_image_free(&desc);
    fail(ErrorKind::Io, "cannot read " + path.string() + ": " + msg);
  }
  desc.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  Image out(static_cast<int>(desc.width), static_cast<int>(desc.height), gray ? 1 : 3);
  if (!png_image_finish_read(&desc, nullptr, out.data.data(), 0, nullptr)) {
    const std::string msg = desc.message;
    png_image_free(&desc);
    fail(ErrorKind::Io, "cannot decode " + path.string() + ": " + msg);
  }
  return out;
}

}  // namespace seqhand
