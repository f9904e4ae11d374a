#include "odirl/point_maze.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace odirl::env {

namespace {

Box box_from_json(const nlohmann::json& j, const Box& fallback) {
  if (j.is_null()) return fallback;
  auto v = j.get<std::vector<double>>();
  if (v.size() != 4) throw Error("pointmaze: region must be [x0, y0, x1, y1]");
  return {v[0], v[1], v[2], v[3]};
}

nlohmann::json box_to_json(const Box& b) { return {b.x0, b.y0, b.x1, b.y1}; }

bool box_inside_arena(const Box& b) {
  return b.x0 >= 0 && b.y0 >= 0 && b.x1 <= 1 && b.y1 <= 1 && b.x0 <= b.x1 && b.y0 <= b.y1;
}

}  // namespace

void PointMazeConfig::validate() const {
  if (!(wall_length > 0.0 && wall_length <= 1.0)) throw Error("pointmaze: wall_length must be in (0, 1]");
  if (!(wall_thickness > 0.0)) throw Error("pointmaze: wall_thickness must be positive");
  const Box w = wall();
  if (!(w.x0 > 0.0 && w.x1 < 1.0)) throw Error("pointmaze: wall must lie strictly inside the arena");
  if (!box_inside_arena(start_region) || !box_inside_arena(goal_region)) {
    throw Error("pointmaze: start/goal regions must lie inside the unit square");
  }
  if (start_region.intersects(w) || goal_region.intersects(w)) {
    throw Error("pointmaze: start and goal regions must not overlap the wall");
  }
  if (!(goal_radius > 0.0) || !(noise_std >= 0.0) || !(max_step > 0.0)) {
    throw Error("pointmaze: goal_radius and max_step must be positive, noise_std non-negative");
  }
  if (horizon < 1) throw Error("pointmaze: horizon must be >= 1");
}

PointMazeConfig point_maze_config_from_json(const nlohmann::json& j) {
  PointMazeConfig c;
  c.wall_x = j.value("wall_x", c.wall_x);
  c.wall_thickness = j.value("wall_thickness", c.wall_thickness);
  c.wall_length = j.value("wall_length", c.wall_length);
  c.start_region = box_from_json(j.value("start_region", nlohmann::json()), c.start_region);
  c.goal_region = box_from_json(j.value("goal_region", nlohmann::json()), c.goal_region);
  c.goal_radius = j.value("goal_radius", c.goal_radius);
  c.noise_std = j.value("noise_std", c.noise_std);
  c.max_step = j.value("max_step", c.max_step);
  c.horizon = j.value("horizon", c.horizon);
  return c;
}

nlohmann::json to_json(const PointMazeConfig& c) {
  return {{"wall_x", c.wall_x},
          {"wall_thickness", c.wall_thickness},
          {"wall_length", c.wall_length},
          {"start_region", box_to_json(c.start_region)},
          {"goal_region", box_to_json(c.goal_region)},
          {"goal_radius", c.goal_radius},
          {"noise_std", c.noise_std},
          {"max_step", c.max_step},
          {"horizon", c.horizon}};
}

std::optional<SegmentHit> segment_box_entry(double px, double py, double dx, double dy,
                                            const Box& box) {
  double t_enter = -std::numeric_limits<double>::infinity();
  double t_exit = std::numeric_limits<double>::infinity();
  int axis = -1;
  const double p[2] = {px, py};
  const double d[2] = {dx, dy};
  const double lo[2] = {box.x0, box.y0};
  const double hi[2] = {box.x1, box.y1};
  for (int k = 0; k < 2; ++k) {
    if (d[k] == 0.0) {
      if (p[k] <= lo[k] || p[k] >= hi[k]) return std::nullopt;
      continue;
    }
    double t0 = (lo[k] - p[k]) / d[k];
    double t1 = (hi[k] - p[k]) / d[k];
    if (t0 > t1) std::swap(t0, t1);
    if (t0 > t_enter) {
      t_enter = t0;
      axis = k;
    }
    t_exit = std::min(t_exit, t1);
  }
  if (!(t_enter < t_exit) || t_exit <= 0.0 || t_enter >= 1.0) return std::nullopt;
  // A start strictly inside cannot happen for valid states; treat it as blocked.
  return SegmentHit{std::max(t_enter, 0.0), axis};
}

PointMaze::PointMaze(PointMazeConfig config, Domain domain)
    : config_(std::move(config)), domain_(domain) {
  config_.validate();
  spec_.state_dim = 2;
  spec_.action_dim = 2;
  spec_.action_low = Vec::Constant(2, -1.0);
  spec_.action_high = Vec::Constant(2, 1.0);
  spec_.horizon = config_.horizon;
  spec_.goal = Vec(2);
  spec_.goal << config_.goal_region.cx(), config_.goal_region.cy();
  spec_.goal_radius = config_.goal_radius;
}

Vec PointMaze::reset(Rng& rng) const {
  std::uniform_real_distribution<double> ux(config_.start_region.x0, config_.start_region.x1);
  std::uniform_real_distribution<double> uy(config_.start_region.y0, config_.start_region.y1);
  Vec s(2);
  s[0] = ux(rng);
  s[1] = uy(rng);
  return s;
}

StepResult PointMaze::step(const Vec& state, const Vec& action, Rng& rng) const {
  if (state.size() != 2) throw Error("pointmaze: state dimension mismatch");
  if (!state.allFinite()) throw Error("pointmaze: simulator diverged (non-finite state)");
  const Vec a = clip_action(action);
  double dx = config_.max_step * a[0];
  double dy = config_.max_step * a[1];
  if (config_.noise_std > 0.0) {
    std::normal_distribution<double> n(0.0, config_.noise_std);
    dx += n(rng);
    dy += n(rng);
  }
  // The wall hangs from the top edge; extending it upward keeps moves along
  // y = 1 from slipping past its end.
  Box w = config_.wall();
  w.y1 = std::numeric_limits<double>::infinity();
  double x = state[0] + dx;
  double y = state[1] + dy;
  if (auto hit = segment_box_entry(state[0], state[1], dx, dy, w)) {
    x = state[0] + hit->t * dx;
    y = state[1] + hit->t * dy;
    // Snap onto the entered face so rounding can never leave the point inside.
    if (hit->axis == 0) {
      x = dx > 0 ? w.x0 : w.x1;
    } else {
      y = dy > 0 ? w.y0 : w.y1;
    }
  }
  StepResult r;
  r.next_state = Vec(2);
  r.next_state[0] = std::clamp(x, 0.0, 1.0);
  r.next_state[1] = std::clamp(y, 0.0, 1.0);
  r.done = in_goal(r.next_state);
  return r;
}

bool PointMaze::inside_wall(const Vec& state) const {
  const Box w = config_.wall();
  return state[0] > w.x0 && state[0] < w.x1 && state[1] > w.y0 && state[1] < w.y1;
}

nlohmann::json PointMaze::config_json() const {
  auto j = to_json(config_);
  j["task"] = "pointmaze";
  j["domain"] = std::string(to_string(domain_));
  return j;
}

}  // namespace odirl::env
