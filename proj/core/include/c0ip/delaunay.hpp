#pragma once

#include <vector>

#include "c0ip/geometry.hpp"
#include "c0ip/mesh.hpp"

namespace c0ip {

// Bowyer-Watson Delaunay triangulation of a point cloud.  Duplicate points
// (within 1e-12) are merged, keeping the first occurrence; cocircular ties
// are resolved by insertion order.  Throws GeometryError when all points are
// collinear.  The result covers the convex hull of the cloud.
Triangulation delaunay_triangulate(const std::vector<Point2>& points);

// The fixed point cloud used for unstructured-mesh studies on the unit
// square: the four corners, boundary points at spacing 1/8, and a jittered
// 7x7 interior grid from a fixed-seed generator.  The jitter is small
// enough to guarantee a minimum point separation, keeping the triangulation
// free of slivers.
std::vector<Point2> unit_square_cloud();

} // namespace c0ip
