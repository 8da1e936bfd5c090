#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mvset/grid.hpp"

namespace mvset {

/// Fixed `%.12e` formatting used by every CSV writer.
std::string format_real(double v);

/// `i,j,x,y,value` with a header line, one row per node in index order.
void write_field_csv(std::ostream& os, const ScalarField& f);
void write_field_csv(const std::string& path, const ScalarField& f);

/// Plain (P2) 16-bit PGM, min-max normalised; row 0 of the image is the top (max y).
void write_field_pgm(std::ostream& os, const ScalarField& f);
void write_field_pgm(const std::string& path, const ScalarField& f);

using Polyline = std::vector<Point>;

/// `loop,x,y` with a header line; closed loops repeat no vertex.
void write_polylines_csv(std::ostream& os, const std::vector<Polyline>& loops);
void write_polylines_csv(const std::string& path, const std::vector<Polyline>& loops);

/// Reads back a field CSV written by write_field_csv onto `grid`.
ScalarField read_field_csv(const std::string& path, const Grid& grid);

}  // namespace mvset
