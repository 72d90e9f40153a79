#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mazebench/geometry.hpp"
#include "mazebench/scene.hpp"

namespace mazebench {

class ImageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// 8-bit RGBA raster, row-major, origin top-left.
class Image {
public:
  Image() = default;
  Image(int width, int height, Rgba fill = {0, 0, 0, 255});

  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  Rgba get(int x, int y) const;
  void set(int x, int y, Rgba c);
  // Source-over blend using c.a.
  void blend(int x, int y, Rgba c);

  const std::uint8_t* data() const { return pixels_.data(); }
  std::uint8_t* data() { return pixels_.data(); }
  std::size_t byte_size() const { return pixels_.size(); }

  bool operator==(const Image&) const = default;

  // drawing
  void fill(Rgba c);
  void fill_rect(const RectI& r, Rgba c);
  void fill_circle(Vec2 center, double radius, Rgba c);
  void draw_line(Vec2 a, Vec2 b, double width, Rgba c);
  void draw_polyline(const std::vector<Vec2>& pts, double width, Rgba c);
  void fill_polygon(const std::vector<Vec2>& pts, Rgba c);
  void draw_rect_outline(const RectI& r, int thickness, Rgba c);

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

double grayscale(Rgba c);

void write_png(const Image& img, const std::string& path);
Image read_png(const std::string& path);

}  // namespace mazebench
