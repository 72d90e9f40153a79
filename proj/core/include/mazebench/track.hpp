#pragma once

#include <stdexcept>
#include <vector>

#include "mazebench/render.hpp"
#include "mazebench/scene.hpp"

namespace mazebench {

class TrackInitFailed : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class TrajectorySpace { Pixel, Unit };

// Time-ordered polyline of object centers.
struct Trajectory {
  std::vector<Vec2> points;
  TrajectorySpace space = TrajectorySpace::Pixel;
  int width = 0, height = 0;  // pixel-space frame size
  int sample_period_frames = 1;

  double arc_length() const { return polyline_length(points); }
  Trajectory to_unit() const;
};

struct TrackerConfig {
  int sample_period_frames = 4;  // 6 samples/s at 24 fps
  double color_threshold = 60.0; // max per-pixel distance to the template
  double window_scale = 2.0;     // search radius = scale * object radius
  double min_window_px = 64.0;   // floor so fast objects stay inside the window
  double min_init_fraction = 0.2;
};

// Color-template tracker: matches the mean color of the init bbox within a
// window around the last center; repeats the last center on failure. This is
// the default backend; heavier trackers can be plugged in behind the same
// signature.
Trajectory track(const FrameSequence& video, const RectI& init_bbox,
                 const TrackerConfig& cfg = {});

}  // namespace mazebench
