#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "firmin/types.hpp"

namespace firmin::detail {

struct Extremum {
    double omega = 0.0;     // refined location (radians)
    double value = 0.0;     // refined sample value
    std::size_t index = 0;  // grid index of the unrefined candidate
    bool at_edge = false;   // segment endpoint
};

// Local extrema (maxima and minima) of sampled values over one grid
// segment. Segment endpoints always qualify as candidates. Interior
// candidates are refined by fitting a parabola through the three
// surrounding samples; endpoints keep their exact sampled value.
std::vector<Extremum> segment_extrema(std::span<const double> omegas, std::span<const double> values,
                                      std::size_t begin, std::size_t end, bool refine = true);

// Extrema over every segment of a grid, concatenated in frequency order.
std::vector<Extremum> grid_extrema(const FrequencyGrid& grid, std::span<const double> values,
                                   bool refine = true);

// Vertex of the parabola through (x0,y0), (x1,y1), (x2,y2), clamped to
// [x0, x2]. Falls back to the middle point when the fit degenerates.
void parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2,
                     double& x_out, double& y_out);

// Bounded 1-D maximizer (golden section with parabolic acceleration).
// Returns the argmax; f is evaluated at most max_evals times.
double maximize_on_interval(const std::function<double(double)>& f, double lo, double hi,
                            double x_tol = 1e-12, int max_evals = 80);

}  // namespace firmin::detail
