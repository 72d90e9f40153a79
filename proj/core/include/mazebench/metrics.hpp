#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mazebench/render.hpp"
#include "mazebench/scene.hpp"
#include "mazebench/track.hpp"

namespace mazebench {

class DegenerateTrajectory : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Discrete layout coordinates (or node indices) the trajectory passes through,
// start position excluded.
struct StepSequence {
  PathPoint start{};  // snapped start cell (not part of steps)
  std::vector<PathPoint> steps;
};

struct MetricReport {
  std::string scene_id;
  int em = 0;
  int sr = 0;
  double pr = 0.0;
  std::optional<double> sd;  // undefined when sr == 0
  std::optional<double> mf;
  std::optional<int> vlm_score;
  int matched_gt_index = 0;
  std::string diagnostics;  // overlay image path, if written
  std::string error;        // per-instance failure annotation
};

inline constexpr int kResamplePoints = 64;
inline constexpr double kMfTau = 25.0;
inline constexpr int kMfSamples = 8;

// Both trajectories into Unit space; gt resampled to n equidistant points,
// gen interpolated at the same cumulative distances clipped to its length.
std::pair<Trajectory, Trajectory> normalize_and_resample(const Trajectory& gen,
                                                         const Trajectory& gt,
                                                         int n_points = kResamplePoints);

// Snap a pixel trajectory onto the scene's discrete layout. Emits a step when
// the nearest cell changes and the point is within the hysteresis radius
// (0.35 cell) of that center.
StepSequence discretize(const Trajectory& traj, const SceneInstance& scene);

// Pixel-space polyline through the snapped start and each step, using the
// scene's rendered edge geometry (curved edges on graphs). Its arc length is
// the L_gen estimator for GT selection and SD: raw tracker polylines cut
// corners, which biases length comparisons against the rendered path.
Trajectory step_path_trajectory(const StepSequence& steps,
                                const SceneInstance& scene);

// argmax of 1 / (1 + |L_gen - L_gt|) over candidates, lowest index on ties.
int select_gt(const Trajectory& gen, const std::vector<Solution>& gts);

// EM/SR/PR/SD. `sr_traj` is the trajectory whose endpoint defines SR
// (Sokoban: the box track); defaults to gen_traj.
MetricReport compute_metrics(const StepSequence& gen_steps,
                             const Trajectory& gen_traj, const Solution& gt,
                             const RectI& goal_bbox, const RenderSpec& rs,
                             const Trajectory* sr_traj = nullptr);

// Mean fraction of background pixels stable (|gray diff| <= tau) across M
// sampled frames relative to frame 0. Regions within dilate_radius_px of any
// tracked object center (frame 0 or frame i) are excluded from N_i.
double maze_fidelity(const FrameSequence& video,
                     const std::vector<Trajectory>& moving_tracks,
                     int m_samples, double tau, double dilate_radius_px);

// GT polyline green, generated blue, start bbox yellow, goal bbox red.
Image render_overlay(const Image& first_frame, const Trajectory& gen,
                     const Trajectory& gt, const RectI& start_bbox,
                     const RectI& goal_bbox);

}  // namespace mazebench
