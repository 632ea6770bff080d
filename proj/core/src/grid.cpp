#include "dpstts/grid.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

namespace dpstts {

namespace {

std::string point_str(const RawPoint& p) {
  return "(" + std::to_string(p.lon) + ", " + std::to_string(p.lat) + ", " +
         std::to_string(p.time) + ")";
}

std::int32_t floor_index(double value, double origin, double cell,
                         std::int32_t count) {
  auto idx = static_cast<std::int32_t>(std::floor((value - origin) / cell));
  return std::clamp(idx, 0, count - 1);
}

int step_toward(std::int32_t from, std::int32_t to) {
  return (to > from) - (to < from);
}

}  // namespace

void SpatioTemporalDomain::validate() const {
  if (!(left < right) || !(bottom < top) || !(s_time < e_time)) {
    throw InvalidConfig("domain requires left < right, bottom < top, s_time < e_time");
  }
}

bool SpatioTemporalDomain::contains(const RawPoint& p) const {
  return p.lon >= left && p.lon <= right && p.lat >= bottom && p.lat <= top &&
         p.time >= s_time && p.time <= e_time;
}

void GridSpec::validate() const {
  if (g_w < 1 || g_h < 1 || g_t < 1 || v < 1) {
    throw InvalidConfig("grid requires g_w, g_h, g_t, v >= 1");
  }
}

double cell_width(const SpatioTemporalDomain& dom, const GridSpec& g) {
  return (dom.right - dom.left) / g.g_w;
}

double cell_height(const SpatioTemporalDomain& dom, const GridSpec& g) {
  return (dom.top - dom.bottom) / g.g_h;
}

double cell_duration(const SpatioTemporalDomain& dom, const GridSpec& g) {
  return (dom.e_time - dom.s_time) / g.g_t;
}

bool in_grid(const Cube& c, const GridSpec& g) {
  return c.x >= 0 && c.x < g.g_w && c.y >= 0 && c.y < g.g_h && c.t >= 0 &&
         c.t < g.g_t;
}

std::uint32_t cube_id(const Cube& c, const GridSpec& g) {
  assert(in_grid(c, g));
  return static_cast<std::uint32_t>(
      c.x + static_cast<std::int64_t>(g.g_w) * (c.y + static_cast<std::int64_t>(g.g_h) * c.t));
}

Cube cube_from_id(std::uint32_t id, const GridSpec& g) {
  Cube c;
  c.x = static_cast<std::int32_t>(id % static_cast<std::uint32_t>(g.g_w));
  const std::uint32_t rest = id / static_cast<std::uint32_t>(g.g_w);
  c.y = static_cast<std::int32_t>(rest % static_cast<std::uint32_t>(g.g_h));
  c.t = static_cast<std::int32_t>(rest / static_cast<std::uint32_t>(g.g_h));
  assert(in_grid(c, g));
  return c;
}

Cube discretize_point(const RawPoint& p, const SpatioTemporalDomain& dom,
                      const GridSpec& g) {
  if (!dom.contains(p)) {
    throw PointOutOfDomain("point " + point_str(p) + " outside domain");
  }
  return Cube{
      floor_index(p.lon, dom.left, cell_width(dom, g), g.g_w),
      floor_index(p.lat, dom.bottom, cell_height(dom, g), g.g_h),
      floor_index(p.time, dom.s_time, cell_duration(dom, g), g.g_t),
  };
}

RawPoint cube_center(const Cube& c, const SpatioTemporalDomain& dom,
                     const GridSpec& g) {
  if (!in_grid(c, g)) {
    throw CubeOutOfGrid("cube (" + std::to_string(c.x) + ", " +
                        std::to_string(c.y) + ", " + std::to_string(c.t) +
                        ") outside grid");
  }
  const double dw = cell_width(dom, g);
  const double dh = cell_height(dom, g);
  const double dt = cell_duration(dom, g);
  return RawPoint{dom.left + c.x * dw + dw / 2, dom.bottom + c.y * dh + dh / 2,
                  dom.s_time + c.t * dt + dt / 2};
}

bool is_neighbor(const Cube& from, const Cube& to, const GridSpec& g) {
  assert(in_grid(from, g) && in_grid(to, g));
  const std::int32_t dx = to.x - from.x;
  const std::int32_t dy = to.y - from.y;
  const std::int32_t dt = to.t - from.t;
  const bool adjacent = std::abs(dx) <= 1 && std::abs(dy) <= 1 && dt >= 0 &&
                        dt <= 1 && !(dx == 0 && dy == 0 && dt == 0);
  const bool dwell = dx == 0 && dy == 0 && dt >= 1 && dt <= g.v;
  return adjacent || dwell;
}

std::vector<Cube> neighbors(const Cube& c, const GridSpec& g) {
  std::vector<Cube> out;
  const std::int32_t t_hi = std::min(c.t + g.v, g.g_t - 1);
  for (std::int32_t t = c.t; t <= t_hi; ++t) {
    for (std::int32_t y = std::max(c.y - 1, 0); y <= std::min(c.y + 1, g.g_h - 1); ++y) {
      for (std::int32_t x = std::max(c.x - 1, 0); x <= std::min(c.x + 1, g.g_w - 1); ++x) {
        const Cube cand{x, y, t};
        if (is_neighbor(c, cand, g)) {
          out.push_back(cand);
        }
      }
    }
  }
  return out;  // t outer, y, x inner: ascending cube id
}

std::vector<Cube> interpolate_gap(const Cube& from, const Cube& to,
                                  const GridSpec& g) {
  assert(in_grid(from, g) && in_grid(to, g));
  (void)g;
  if (to.t < from.t) {
    throw NonMonotonicTime("interpolation target precedes source in time");
  }
  std::vector<Cube> inserted;
  Cube cur = from;
  while (true) {
    cur.x += step_toward(cur.x, to.x);
    cur.y += step_toward(cur.y, to.y);
    cur.t += step_toward(cur.t, to.t);
    if (cur == to) {
      break;
    }
    inserted.push_back(cur);
  }
  return inserted;
}

CubeTrajectory discretize_trajectory(std::span<const RawPoint> points,
                                     const SpatioTemporalDomain& dom,
                                     const GridSpec& g) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].time > points[i - 1].time)) {
      throw UnsortedTimestamps("timestamps not strictly increasing at point " +
                               std::to_string(i));
    }
  }

  std::vector<Cube> cubes;
  for (const RawPoint& p : points) {
    if (!dom.contains(p)) {
      continue;  // out-of-domain points are dropped, not an error
    }
    const Cube c = discretize_point(p, dom, g);
    if (cubes.empty() || cubes.back() != c) {
      cubes.push_back(c);
    }
  }
  if (cubes.empty()) {
    throw EmptyAfterFiltering("no point inside the domain");
  }

  std::vector<Cube> chained;
  chained.reserve(cubes.size());
  chained.push_back(cubes.front());
  for (std::size_t i = 1; i < cubes.size(); ++i) {
    if (!is_neighbor(chained.back(), cubes[i], g)) {
      for (const Cube& mid : interpolate_gap(chained.back(), cubes[i], g)) {
        if (chained.back() != mid) {
          chained.push_back(mid);
        }
      }
    }
    if (chained.back() != cubes[i]) {
      chained.push_back(cubes[i]);
    }
  }
  return CubeTrajectory{std::move(chained), true};
}

}  // namespace dpstts
