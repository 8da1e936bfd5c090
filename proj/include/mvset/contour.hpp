#pragma once

#include <vector>

#include "mvset/field_io.hpp"
#include "mvset/grid.hpp"

namespace mvset {

/// Boundary of a node set traced by marching squares on its 0/1 indicator at
/// level 1/2. Vertices sit at edge midpoints; loops are oriented with the set
/// on the left, saddle cells keep diagonal members apart (4-connectivity).
/// Chains that run into the grid edge are returned open.
struct Contour {
    std::vector<Polyline> loops;
    std::vector<bool> closed;

    double signed_area() const;  ///< sum of shoelace areas of closed loops
    double perimeter() const;
    std::size_t vertex_count() const;
};

Contour trace_boundary(const NodeSet& s);

/// Smallest Euclidean distance between the segments of two contours.
double contour_distance(const Contour& a, const Contour& b);

/// Distance from p to the nearest point on a segment of c (infinity if empty).
double distance_to_contour(const Contour& c, Point p);

}  // namespace mvset
