#pragma once

#include <string>
#include <vector>

#include "mazebench/image.hpp"
#include "mazebench/scene.hpp"

namespace mazebench {

class PathOutOfBounds : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct FrameSequence {
  std::vector<Image> frames;
  int fps = 24;
  double duration_s() const {
    return fps > 0 ? static_cast<double>(frames.size()) / fps : 0.0;
  }
};

// Agent-center pixel positions, one per frame, arc-length uniform so the
// agent moves at constant speed.
struct RenderPlan {
  std::vector<Vec2> waypoints_px;
  double agent_radius_px = 0.0;
  std::vector<Vec2> box_waypoints_px;  // Sokoban only, time-aligned
};

RenderPlan make_render_plan(const SceneInstance& scene, const Solution& sol);

// Scene without the movable objects; identical across all video frames.
Image render_background(const SceneInstance& scene);

// Frame 0: background plus agent (and Sokoban box) at their start positions.
Image render_static(const SceneInstance& scene);

// fps/frame_count from scene.render_spec (24 fps, 192 frames by default).
FrameSequence render_solution_video(const SceneInstance& scene, const Solution& sol);

// Isometric cube composite; painter's order back-to-front, ladders on top.
Image composite_3d(const Scene3D& scene, const Skin& skin, const RenderSpec& rs);

// Resample a polyline to n arc-length-equidistant points.
std::vector<Vec2> resample_equidistant(const std::vector<Vec2>& pts, int n);

// Frame-directory format: frame_00000.png ... plus video.json
// {fps, frame_count, width, height, scene_id}.
void write_frame_dir(const FrameSequence& seq, const std::string& scene_id,
                     const std::string& dir);

struct LoadedVideo {
  FrameSequence seq;
  std::string scene_id;
};

// Reads the layout above; also accepts any directory of numbered PNGs with a
// video.json beside them.
LoadedVideo load_frame_dir(const std::string& dir);

// 5x7 uppercase bitmap text, scaled by `scale`.
void draw_text(Image& img, const std::string& text, Vec2 center, int scale, Rgba c);

}  // namespace mazebench
