#include "firmin/detail/extrema.hpp"

#include <algorithm>
#include <cmath>

namespace firmin::detail {

void parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2,
                     double& x_out, double& y_out)
{
    const double d0 = x0 - x1;
    const double d2 = x2 - x1;
    const double det = d0 * d0 * d2 - d2 * d2 * d0;
    x_out = x1;
    y_out = y1;
    if (det == 0.0) return;
    const double a = (d2 * (y0 - y1) - d0 * (y2 - y1)) / det;
    const double b = (d0 * d0 * (y2 - y1) - d2 * d2 * (y0 - y1)) / det;
    if (a == 0.0) return;
    double xv = x1 - 0.5 * b / a;
    xv = std::clamp(xv, std::min(x0, x2), std::max(x0, x2));
    const double dx = xv - x1;
    x_out = xv;
    y_out = y1 + b * dx + a * dx * dx;
}

std::vector<Extremum> segment_extrema(std::span<const double> omegas, std::span<const double> values,
                                      std::size_t begin, std::size_t end, bool refine)
{
    std::vector<Extremum> out;
    if (begin >= end) return out;
    const std::size_t n = end - begin;
    if (n == 1) {
        out.push_back(Extremum{omegas[begin], values[begin], begin, true});
        return out;
    }
    out.push_back(Extremum{omegas[begin], values[begin], begin, true});
    for (std::size_t i = begin + 1; i + 1 < end; ++i) {
        const double dl = values[i] - values[i - 1];
        const double dr = values[i + 1] - values[i];
        const bool local_max = (dl > 0.0 && dr <= 0.0) || (dl >= 0.0 && dr < 0.0);
        const bool local_min = (dl < 0.0 && dr >= 0.0) || (dl <= 0.0 && dr > 0.0);
        if (!local_max && !local_min) continue;
        Extremum e{omegas[i], values[i], i, false};
        if (refine) {
            parabola_vertex(omegas[i - 1], values[i - 1], omegas[i], values[i], omegas[i + 1],
                            values[i + 1], e.omega, e.value);
        }
        out.push_back(e);
    }
    out.push_back(Extremum{omegas[end - 1], values[end - 1], end - 1, true});
    return out;
}

std::vector<Extremum> grid_extrema(const FrequencyGrid& grid, std::span<const double> values, bool refine)
{
    if (values.size() != grid.size()) throw InvalidInput("grid_extrema: sample count mismatch");
    std::vector<Extremum> out;
    for (const auto& seg : grid.segments()) {
        auto part = segment_extrema(grid.omegas(), values, seg.begin, seg.end, refine);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

double maximize_on_interval(const std::function<double(double)>& f, double lo, double hi,
                            double x_tol, int max_evals)
{
    if (!(lo <= hi)) throw InvalidInput("maximize_on_interval: empty interval");
    if (lo == hi) return lo;

    // Brent's method on -f.
    const double golden = 0.3819660112501051;
    double a = lo, b = hi;
    double x = a + golden * (b - a);
    double w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    int evals = 1;
    double d = 0.0, e = 0.0;

    while (evals < max_evals) {
        const double m = 0.5 * (a + b);
        const double tol = x_tol + 1e-15 * std::abs(x);
        if (std::abs(x - m) <= 2.0 * tol - 0.5 * (b - a)) break;

        bool use_golden = true;
        if (std::abs(e) > tol) {
            // Parabolic fit through x, w, v (maximization flips signs).
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_old = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_old) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                double u = x + d;
                if (u - a < 2.0 * tol || b - u < 2.0 * tol) d = (m > x) ? tol : -tol;
                use_golden = false;
            }
        }
        if (use_golden) {
            e = (x < m) ? b - x : a - x;
            d = golden * e;
        }
        const double u = (std::abs(d) >= tol) ? x + d : x + ((d > 0.0) ? tol : -tol);
        const double fu = f(u);
        ++evals;
        if (fu >= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu >= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu >= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return x;
}

}  // namespace firmin::detail
