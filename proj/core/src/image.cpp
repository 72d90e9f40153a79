#include "mazebench/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include <png.h>

namespace mazebench {

Image::Image(int width, int height, Rgba fill)
    : width_(width), height_(height),
      pixels_(static_cast<std::size_t>(width) * height * 4) {
  this->fill(fill);
}

Rgba Image::get(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 4;
  return {pixels_[i], pixels_[i + 1], pixels_[i + 2], pixels_[i + 3]};
}

void Image::set(int x, int y, Rgba c) {
  if (!in_bounds(x, y)) return;
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 4;
  pixels_[i] = c.r;
  pixels_[i + 1] = c.g;
  pixels_[i + 2] = c.b;
  pixels_[i + 3] = c.a;
}

void Image::blend(int x, int y, Rgba c) {
  if (!in_bounds(x, y) || c.a == 0) return;
  if (c.a == 255) {
    set(x, y, c);
    return;
  }
  Rgba dst = get(x, y);
  const int a = c.a;
  auto mix = [a](int s, int d) {
    return static_cast<std::uint8_t>((s * a + d * (255 - a)) / 255);
  };
  set(x, y, {mix(c.r, dst.r), mix(c.g, dst.g), mix(c.b, dst.b), 255});
}

void Image::fill(Rgba c) {
  for (std::size_t i = 0; i < pixels_.size(); i += 4) {
    pixels_[i] = c.r;
    pixels_[i + 1] = c.g;
    pixels_[i + 2] = c.b;
    pixels_[i + 3] = c.a;
  }
}

void Image::fill_rect(const RectI& r, Rgba c) {
  const int x0 = std::max(0, r.x), y0 = std::max(0, r.y);
  const int x1 = std::min(width_, r.x + r.w), y1 = std::min(height_, r.y + r.h);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) blend(x, y, c);
}

void Image::fill_circle(Vec2 center, double radius, Rgba c) {
  const int x0 = std::max(0, static_cast<int>(std::floor(center.x - radius)));
  const int x1 = std::min(width_ - 1, static_cast<int>(std::ceil(center.x + radius)));
  const int y0 = std::max(0, static_cast<int>(std::floor(center.y - radius)));
  const int y1 = std::min(height_ - 1, static_cast<int>(std::ceil(center.y + radius)));
  const double r2 = radius * radius;
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const double dx = x + 0.5 - center.x, dy = y + 0.5 - center.y;
      if (dx * dx + dy * dy <= r2) blend(x, y, c);
    }
}

void Image::draw_line(Vec2 a, Vec2 b, double width, Rgba c) {
  const double half = width / 2.0;
  const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - half)));
  const int x1 = std::min(width_ - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + half)));
  const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - half)));
  const int y1 = std::min(height_ - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + half)));
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const Vec2 p{x + 0.5, y + 0.5};
      double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
      if (distance(p, a + ab * t) <= half) blend(x, y, c);
    }
}

void Image::draw_polyline(const std::vector<Vec2>& pts, double width, Rgba c) {
  for (std::size_t i = 1; i < pts.size(); ++i)
    draw_line(pts[i - 1], pts[i], width, c);
}

void Image::fill_polygon(const std::vector<Vec2>& pts, Rgba c) {
  if (pts.size() < 3) return;
  double miny = pts[0].y, maxy = pts[0].y;
  for (const Vec2& p : pts) {
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  const int y0 = std::max(0, static_cast<int>(std::floor(miny)));
  const int y1 = std::min(height_ - 1, static_cast<int>(std::ceil(maxy)));
  for (int y = y0; y <= y1; ++y) {
    const double yc = y + 0.5;
    std::vector<double> xs;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec2 a = pts[i], b = pts[(i + 1) % pts.size()];
      if ((a.y <= yc && b.y > yc) || (b.y <= yc && a.y > yc))
        xs.push_back(a.x + (yc - a.y) / (b.y - a.y) * (b.x - a.x));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
      const int xa = std::max(0, static_cast<int>(std::ceil(xs[i] - 0.5)));
      const int xb = std::min(width_ - 1, static_cast<int>(std::floor(xs[i + 1] - 0.5)));
      for (int x = xa; x <= xb; ++x) blend(x, y, c);
    }
  }
}

void Image::draw_rect_outline(const RectI& r, int thickness, Rgba c) {
  fill_rect({r.x, r.y, r.w, thickness}, c);
  fill_rect({r.x, r.y + r.h - thickness, r.w, thickness}, c);
  fill_rect({r.x, r.y, thickness, r.h}, c);
  fill_rect({r.x + r.w - thickness, r.y, thickness, r.h}, c);
}

double grayscale(Rgba c) {
  return 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
}

void write_png(const Image& img, const std::string& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(
      std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!fp) throw ImageError("cannot open for write: " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw ImageError("png write failed: " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_RGBA,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  // frames are large flat-color rasters; fast settings compress them fine
  png_set_compression_level(png, 1);
  png_set_filter(png, 0, PNG_FILTER_SUB);
  png_write_info(png, info);
  std::vector<png_bytep> rows(img.height());
  for (int y = 0; y < img.height(); ++y)
    rows[y] = const_cast<png_bytep>(img.data() + static_cast<std::size_t>(y) *
                                                     img.width() * 4);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

Image read_png(const std::string& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(
      std::fopen(path.c_str(), "rb"), &std::fclose);
  if (!fp) throw ImageError("cannot open png: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                           nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ImageError("corrupt png: " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  png_set_expand(png);
  png_set_strip_16(png);
  png_set_gray_to_rgb(png);
  png_set_filler(png, 0xFF, PNG_FILLER_AFTER);
  png_read_update_info(png, info);

  Image img(static_cast<int>(png_get_image_width(png, info)),
            static_cast<int>(png_get_image_height(png, info)));
  std::vector<png_bytep> rows(img.height());
  for (int y = 0; y < img.height(); ++y)
    rows[y] = img.data() + static_cast<std::size_t>(y) * img.width() * 4;
  png_read_image(png, rows.data());
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

}  // namespace mazebench
