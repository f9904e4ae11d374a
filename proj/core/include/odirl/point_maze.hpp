#pragma once

#include <optional>

#include "odirl/env.hpp"

namespace odirl::env {

struct Box {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
  bool intersects(const Box& o) const { return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1; }
  double cx() const { return 0.5 * (x0 + x1); }
  double cy() const { return 0.5 * (y0 + y1); }
};

// Position-controlled point mass in the unit square. A vertical wall hangs from
// the top edge at wall_x and covers wall_length of the arena height.
struct PointMazeConfig {
  double wall_x = 0.5;
  double wall_thickness = 0.04;
  double wall_length = 0.5;
  Box start_region{0.1, 0.8, 0.2, 0.9};
  Box goal_region{0.8, 0.8, 0.9, 0.9};
  double goal_radius = 0.1;
  double noise_std = 0.01;
  double max_step = 0.1;  // displacement per unit action
  int horizon = 50;

  Box wall() const {
    return {wall_x - 0.5 * wall_thickness, 1.0 - wall_length, wall_x + 0.5 * wall_thickness, 1.0};
  }
  void validate() const;
};

PointMazeConfig point_maze_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PointMazeConfig& c);

// Parameter t in [0, 1] at which the segment p -> p + d first enters the open
// interior of `box`, with the axis (0 = x, 1 = y) of the entered face.
struct SegmentHit {
  double t;
  int axis;
};
std::optional<SegmentHit> segment_box_entry(double px, double py, double dx, double dy,
                                            const Box& box);

class PointMaze final : public Environment {
 public:
  PointMaze(PointMazeConfig config, Domain domain);

  const EnvSpec& spec() const override { return spec_; }
  Domain domain() const override { return domain_; }
  std::string task_name() const override { return "pointmaze"; }
  Vec reset(Rng& rng) const override;
  StepResult step(const Vec& state, const Vec& action, Rng& rng) const override;
  Vec position(const Vec& state) const override { return state.head(2); }
  nlohmann::json config_json() const override;

  const PointMazeConfig& config() const { return config_; }
  // Strict interior of the wall rectangle.
  bool inside_wall(const Vec& state) const;

 private:
  PointMazeConfig config_;
  Domain domain_;
  EnvSpec spec_;
};

}  // namespace odirl::env
