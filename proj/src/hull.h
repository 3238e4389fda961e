#pragma once

#include <array>
#include <span>
#include <vector>

#include "dcsplit/types.h"

namespace dcsplit::detail {

struct Hull {
  std::vector<Vec> vertices;
  std::vector<std::array<int, 3>> faces;  // 3-D boundary triangles, outward
  Mat normals;
  Vec offsets;
};

// Affine rank of a point set, relative threshold on singular values.
int affine_rank(std::span<const Vec> points);

// Convex hull in 1, 2 or 3 dimensions. Input must have full affine rank.
Hull convex_hull(std::span<const Vec> points);

// 2-D hull, counter-clockwise, collinear points dropped, starting at the
// lexicographically smallest point. Returns indices into `points`.
std::vector<int> planar_hull(std::span<const Eigen::Vector2d> points, double tol);

}  // namespace dcsplit::detail
