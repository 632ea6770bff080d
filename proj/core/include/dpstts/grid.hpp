#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "dpstts/errors.hpp"

namespace dpstts {

/// One GPS sample: longitude/latitude in degrees, time in seconds.
struct RawPoint {
  double lon = 0.0;
  double lat = 0.0;
  double time = 0.0;

  friend bool operator==(const RawPoint&, const RawPoint&) = default;
};

/// Continuous bounding box plus time window. The box is closed on all sides;
/// points exactly on the right/top/e_time boundary belong to the last cell.
struct SpatioTemporalDomain {
  double left = 0.0;    // min longitude
  double right = 0.0;   // max longitude
  double bottom = 0.0;  // min latitude
  double top = 0.0;     // max latitude
  double s_time = 0.0;  // window start, seconds
  double e_time = 0.0;  // window end, seconds

  void validate() const;  // throws InvalidConfig
  bool contains(const RawPoint& p) const;

  friend bool operator==(const SpatioTemporalDomain&,
                         const SpatioTemporalDomain&) = default;
};

/// Uniform g_w x g_h x g_t cube decomposition of a domain. `v` bounds the
/// same-cell dwell jump: a cube is a neighbor of itself shifted by up to v
/// time steps.
struct GridSpec {
  std::int32_t g_w = 1;
  std::int32_t g_h = 1;
  std::int32_t g_t = 1;
  std::int32_t v = 1;

  void validate() const;  // throws InvalidConfig
  std::int64_t cube_count() const {
    return static_cast<std::int64_t>(g_w) * g_h * g_t;
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Integer grid indices of one spatiotemporal cube.
struct Cube {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t t = 0;

  friend auto operator<=>(const Cube&, const Cube&) = default;
};

/// Cube sequence with collapsed repeats and a terminator flag (the stop
/// symbol appended after the last cube).
struct CubeTrajectory {
  std::vector<Cube> cubes;
  bool terminated = false;

  friend bool operator==(const CubeTrajectory&, const CubeTrajectory&) = default;
};

double cell_width(const SpatioTemporalDomain& dom, const GridSpec& g);
double cell_height(const SpatioTemporalDomain& dom, const GridSpec& g);
double cell_duration(const SpatioTemporalDomain& dom, const GridSpec& g);

bool in_grid(const Cube& c, const GridSpec& g);

/// Linear cube id; x varies fastest, then y, then t.
std::uint32_t cube_id(const Cube& c, const GridSpec& g);
Cube cube_from_id(std::uint32_t id, const GridSpec& g);

/// Maps a point to its cube by floor division; boundary values clamp to the
/// last index. Throws PointOutOfDomain for points outside the closed box.
Cube discretize_point(const RawPoint& p, const SpatioTemporalDomain& dom,
                      const GridSpec& g);

/// Center point of a cube. Throws CubeOutOfGrid.
RawPoint cube_center(const Cube& c, const SpatioTemporalDomain& dom,
                     const GridSpec& g);

/// True iff `to` is reachable from `from` in one step: a spatially adjacent
/// cell with time advance 0 or 1, or the same cell with time advance in
/// [1, v]. Never true for from == to.
bool is_neighbor(const Cube& from, const Cube& to, const GridSpec& g);

/// All in-grid neighbors of `c`, in ascending cube-id order.
std::vector<Cube> neighbors(const Cube& c, const GridSpec& g);

/// Intermediate cubes of the stepping path from `from` to `to`, excluding
/// both endpoints. Each step moves every still-differing coordinate one unit
/// toward the target, so every hop lands on a neighbor. Empty when the cubes
/// are already neighbors. Throws NonMonotonicTime if to.t < from.t.
std::vector<Cube> interpolate_gap(const Cube& from, const Cube& to,
                                  const GridSpec& g);

/// Full discretization pipeline for one trajectory: drop out-of-domain
/// points, map the rest to cubes, collapse consecutive repeats, insert
/// interpolation cubes between non-neighbor pairs, and terminate. Throws
/// UnsortedTimestamps if input times are not strictly increasing and
/// EmptyAfterFiltering if no point lies inside the domain.
CubeTrajectory discretize_trajectory(std::span<const RawPoint> points,
                                     const SpatioTemporalDomain& dom,
                                     const GridSpec& g);

}  // namespace dpstts
