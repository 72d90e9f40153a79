#include "mazebench/track.hpp"

#include <algorithm>
#include <cmath>

namespace mazebench {

Trajectory Trajectory::to_unit() const {
  if (space == TrajectorySpace::Unit) return *this;
  Trajectory out = *this;
  out.space = TrajectorySpace::Unit;
  for (Vec2& p : out.points) {
    p.x /= width;
    p.y /= height;
  }
  return out;
}

namespace {

double color_dist(Rgba a, Rgba b) {
  const double dr = double(a.r) - b.r, dg = double(a.g) - b.g,
               db = double(a.b) - b.b;
  return std::sqrt(dr * dr + dg * dg + db * db);
}

}  // namespace

Trajectory track(const FrameSequence& video, const RectI& init_bbox,
                 const TrackerConfig& cfg) {
  if (video.frames.empty()) throw TrackInitFailed("empty video");
  const Image& first = video.frames.front();
  if (init_bbox.x < 0 || init_bbox.y < 0 || init_bbox.w <= 0 ||
      init_bbox.h <= 0 || init_bbox.x + init_bbox.w > first.width() ||
      init_bbox.y + init_bbox.h > first.height())
    throw TrackInitFailed("init bbox outside frame 0");

  // Template = mean color of the central half of the init bbox.
  const int cx0 = init_bbox.x + init_bbox.w / 4;
  const int cy0 = init_bbox.y + init_bbox.h / 4;
  const int cx1 = init_bbox.x + init_bbox.w - init_bbox.w / 4;
  const int cy1 = init_bbox.y + init_bbox.h - init_bbox.h / 4;
  double sr = 0, sg = 0, sb = 0;
  int count = 0;
  for (int y = cy0; y < cy1; ++y)
    for (int x = cx0; x < cx1; ++x) {
      Rgba c = first.get(x, y);
      sr += c.r;
      sg += c.g;
      sb += c.b;
      ++count;
    }
  const Rgba tmpl{static_cast<std::uint8_t>(sr / count),
                  static_cast<std::uint8_t>(sg / count),
                  static_cast<std::uint8_t>(sb / count), 255};

  // The init region must actually look like the template.
  int matched = 0, total = 0;
  for (int y = init_bbox.y; y < init_bbox.y + init_bbox.h; ++y)
    for (int x = init_bbox.x; x < init_bbox.x + init_bbox.w; ++x) {
      ++total;
      if (color_dist(first.get(x, y), tmpl) <= cfg.color_threshold) ++matched;
    }
  if (matched < cfg.min_init_fraction * total)
    throw TrackInitFailed("no region matching the color template in frame 0");

  const double radius = std::max(init_bbox.w, init_bbox.h) / 2.0;
  const double window = std::max(cfg.window_scale * radius, cfg.min_window_px);

  Trajectory traj;
  traj.space = TrajectorySpace::Pixel;
  traj.width = first.width();
  traj.height = first.height();
  traj.sample_period_frames = cfg.sample_period_frames;

  std::vector<std::size_t> samples;
  for (std::size_t f = 0; f < video.frames.size(); f += cfg.sample_period_frames)
    samples.push_back(f);
  if (samples.back() != video.frames.size() - 1)
    samples.push_back(video.frames.size() - 1);

  Vec2 last = init_bbox.center();
  for (std::size_t f : samples) {
    const Image& img = video.frames[f];
    const int x0 = std::max(0, static_cast<int>(std::floor(last.x - window)));
    const int x1 = std::min(img.width() - 1, static_cast<int>(std::ceil(last.x + window)));
    const int y0 = std::max(0, static_cast<int>(std::floor(last.y - window)));
    const int y1 = std::min(img.height() - 1, static_cast<int>(std::ceil(last.y + window)));
    double cx = 0, cy = 0;
    int hits = 0;
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x)
        if (color_dist(img.get(x, y), tmpl) <= cfg.color_threshold) {
          cx += x + 0.5;
          cy += y + 0.5;
          ++hits;
        }
    if (hits > 0) last = {cx / hits, cy / hits};
    // else: tracking failed on this sample; reuse the last valid center
    traj.points.push_back(last);
  }
  return traj;
}

}  // namespace mazebench
