#pragma once

#include <array>
#include <vector>

#include "spacespec/spaceform.hpp"

namespace spacespec::detail {

// Delaunay triangulation of distinct points by incremental insertion with
// Lawson flips. Returns counter-clockwise triangles over point indices;
// the triangulation covers the convex hull.
std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& points);

double orient2d(const Vec2& a, const Vec2& b, const Vec2& c);
// Positive when d lies inside the circle through counter-clockwise a, b, c.
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

}  // namespace spacespec::detail
