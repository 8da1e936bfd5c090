#include "mvset/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mvset/error.hpp"

namespace mvset {

namespace {

std::ofstream open_for_write(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open output file " + path);
    return os;
}

}  // namespace

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

void write_field_csv(std::ostream& os, const ScalarField& f) {
    const Grid& g = f.grid();
    os << "i,j,x,y,value\n";
    for (int j = 0; j < g.n_side(); ++j) {
        for (int i = 0; i < g.n_side(); ++i) {
            const Point p = g.coord(i, j);
            os << i << ',' << j << ',' << format_real(p.x) << ',' << format_real(p.y) << ','
               << format_real(f.at(i, j)) << '\n';
        }
    }
}

void write_field_csv(const std::string& path, const ScalarField& f) {
    auto os = open_for_write(path);
    write_field_csv(os, f);
}

void write_field_pgm(std::ostream& os, const ScalarField& f) {
    const Grid& g = f.grid();
    const int n = g.n_side();
    const double lo = f.min();
    const double hi = f.max();
    const double span = hi > lo ? hi - lo : 1.0;
    os << "P2\n" << n << ' ' << n << "\n65535\n";
    for (int j = n - 1; j >= 0; --j) {
        for (int i = 0; i < n; ++i) {
            const long level = std::lround((f.at(i, j) - lo) / span * 65535.0);
            os << std::clamp<long>(level, 0, 65535) << (i + 1 < n ? ' ' : '\n');
        }
    }
}

void write_field_pgm(const std::string& path, const ScalarField& f) {
    auto os = open_for_write(path);
    write_field_pgm(os, f);
}

void write_polylines_csv(std::ostream& os, const std::vector<Polyline>& loops) {
    os << "loop,x,y\n";
    for (std::size_t l = 0; l < loops.size(); ++l)
        for (const Point& p : loops[l]) os << l << ',' << format_real(p.x) << ',' << format_real(p.y) << '\n';
}

void write_polylines_csv(const std::string& path, const std::vector<Polyline>& loops) {
    auto os = open_for_write(path);
    write_polylines_csv(os, loops);
}

ScalarField read_field_csv(const std::string& path, const Grid& grid) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open field file " + path);
    std::string line;
    std::getline(is, line);
    if (line != "i,j,x,y,value") throw ConfigError("unexpected field CSV header in " + path);
    ScalarField out(grid);
    std::size_t seen = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int i = 0;
        int j = 0;
        double x = 0;
        double y = 0;
        double v = 0;
        char c = 0;
        if (!(ls >> i >> c >> j >> c >> x >> c >> y >> c >> v) || !grid.contains({i, j}))
            throw ConfigError("malformed field CSV row: " + line);
        out.at(i, j) = v;
        ++seen;
    }
    if (seen != grid.size()) throw ConfigError("field CSV does not cover the grid: " + path);
    return out;
}

}  // namespace mvset
