#include "firmin/chebyshev.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "firmin/detail/extrema.hpp"
#include "firmin/spectrum.hpp"

namespace firmin {

namespace {

std::string freqs_to_string(std::span<const double> refs, std::size_t limit = 8)
{
    std::string s;
    char buf[64];
    for (std::size_t i = 0; i < refs.size() && i < limit; ++i) {
        std::snprintf(buf, sizeof(buf), "%s%.6f", i ? ", " : "", refs[i] / pi);
        s += buf;
    }
    if (refs.size() > limit) s += ", ...";
    return s;
}

// ---------------------------------------------------------------------------
// Reference solvers. Both expose: solve(refs) -> signed delta, plus G(w)
// evaluation and coefficient extraction for the converged reference set.
// ---------------------------------------------------------------------------

// Cosine basis: G is a degree-M polynomial in x = cos(w). The reference
// system is solved in barycentric form; weights are accumulated in log
// space so large M stays clear of under/overflow.
class CosineSolver {
public:
    CosineSolver(const BandSpec& bands, double k, int m) : bands_(&bands), k_(k), m_(m) {}

    void solve(std::span<const double> refs)
    {
        const std::size_t r = refs.size();
        x_.resize(r);
        for (std::size_t i = 0; i < r; ++i) x_[i] = std::cos(refs[i]);

        std::vector<double> lw(r, 0.0);
        for (std::size_t i = 0; i < r; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < r; ++j) {
                if (j == i) continue;
                const double d = std::abs(x_[i] - x_[j]);
                if (d == 0.0) {
                    throw InvalidInput("solve_reference_system: repeated reference node at w/pi = " +
                                       std::to_string(refs[i] / pi));
                }
                acc -= std::log(d);
            }
            lw[i] = acc;
        }
        const double mx = *std::max_element(lw.begin(), lw.end());

        double num = 0.0, den = 0.0;
        std::vector<double> a(r);
        for (std::size_t i = 0; i < r; ++i) {
            const double mag = std::exp(lw[i] - mx);
            a[i] = (i % 2 == 0) ? mag : -mag;  // x descending: sign of prod is (-1)^i
            const double d = bands_->desired_at(refs[i]);
            const double w = bands_->weight_at(refs[i], k_);
            num += a[i] * d;
            den += mag / w;  // a_i * sigma_i = |a_i|
        }
        delta_ = -num / den;

        // Interpolate through the first r-1 nodes; the dropped node is
        // matched automatically by the choice of delta. Its target value
        // is kept so evaluation at that node is exact too.
        y_.resize(r);
        wsub_.resize(r - 1);
        for (std::size_t i = 0; i < r; ++i) {
            const double sigma = (i % 2 == 0) ? 1.0 : -1.0;
            y_[i] = bands_->desired_at(refs[i]) + sigma * delta_ / bands_->weight_at(refs[i], k_);
            if (i + 1 < r) wsub_[i] = a[i] * (x_[i] - x_[r - 1]);
        }
    }

    double delta() const { return delta_; }

    double eval(double omega) const { return eval_x(std::cos(omega)); }

    std::vector<cdouble> coefficients() const
    {
        // Sample G on a uniform circle grid and invert the transform; a
        // degree-M cosine polynomial is exactly determined by L >= 2M+1
        // samples. Mirror symmetry halves the evaluations.
        const int l = 2 * m_ + 2;
        std::vector<double> g(static_cast<std::size_t>(l / 2) + 1);
        for (int j = 0; j <= l / 2; ++j) {
            g[static_cast<std::size_t>(j)] = eval_x(std::cos(2.0 * pi * j / l));
        }
        std::vector<cdouble> c(static_cast<std::size_t>(m_) + 1);
        for (int n = 0; n <= m_; ++n) {
            double acc = g[0] + ((n % 2 == 0) ? g[static_cast<std::size_t>(l / 2)]
                                              : -g[static_cast<std::size_t>(l / 2)]);
            for (int j = 1; j < l / 2; ++j) {
                acc += 2.0 * g[static_cast<std::size_t>(j)] * std::cos(2.0 * pi * j * n / l);
            }
            c[static_cast<std::size_t>(n)] = acc / l;
        }
        return c;
    }

private:
    double eval_x(double x) const
    {
        if (std::abs(x - x_.back()) < 1e-15 * (1.0 + std::abs(x))) return y_.back();
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < wsub_.size(); ++i) {
            const double dx = x - x_[i];
            if (std::abs(dx) < 1e-15 * (1.0 + std::abs(x))) return y_[i];
            const double t = wsub_[i] / dx;
            num += t * y_[i];
            den += t;
        }
        return num / den;
    }

    const BandSpec* bands_;
    double k_;
    int m_;
    std::vector<double> x_, y_, wsub_;
    double delta_ = 0.0;
};

// Cosine+sine basis: the full (2M+2)-unknown linear system per reference
// set. The basis is Haar on the circle but has no barycentric shortcut.
class TrigSolver {
public:
    TrigSolver(const BandSpec& bands, double k, int m) : bands_(&bands), k_(k), m_(m) {}

    void solve(std::span<const double> refs)
    {
        const int r = static_cast<int>(refs.size());
        const int n_unknowns = 2 * m_ + 2;  // alpha_0..M, beta_1..M, delta
        Eigen::MatrixXd mat(r, n_unknowns);
        Eigen::VectorXd rhs(r);
        for (int i = 0; i < r; ++i) {
            const double w = refs[static_cast<std::size_t>(i)];
            mat(i, 0) = 1.0;
            for (int n = 1; n <= m_; ++n) {
                mat(i, n) = std::cos(n * w);
                mat(i, m_ + n) = std::sin(n * w);
            }
            const double sigma = (i % 2 == 0) ? 1.0 : -1.0;
            mat(i, n_unknowns - 1) = -sigma / bands_->weight_at(w, k_);
            rhs(i) = bands_->desired_at(w);
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(mat);
        if (qr.rank() < n_unknowns) {
            throw InvalidInput("solve_reference_system: singular reference system at w/pi = {" +
                               freqs_to_string(refs) + "}");
        }
        Eigen::VectorXd sol = qr.solve(rhs);
        alpha_.assign(sol.data(), sol.data() + m_ + 1);
        beta_.assign(sol.data() + m_ + 1, sol.data() + 2 * m_ + 1);
        delta_ = sol(n_unknowns - 1);
    }

    double delta() const { return delta_; }

    double eval(double omega) const
    {
        double acc = alpha_[0];
        for (int n = 1; n <= m_; ++n) {
            acc += alpha_[static_cast<std::size_t>(n)] * std::cos(n * omega) +
                   beta_[static_cast<std::size_t>(n - 1)] * std::sin(n * omega);
        }
        return acc;
    }

    std::vector<cdouble> coefficients() const
    {
        std::vector<cdouble> c(static_cast<std::size_t>(m_) + 1);
        c[0] = alpha_[0];
        for (int n = 1; n <= m_; ++n) {
            c[static_cast<std::size_t>(n)] =
                cdouble(alpha_[static_cast<std::size_t>(n)] / 2.0,
                        beta_[static_cast<std::size_t>(n - 1)] / 2.0);
        }
        return c;
    }

private:
    const BandSpec* bands_;
    double k_;
    int m_;
    std::vector<double> alpha_, beta_;
    double delta_ = 0.0;
};

// ---------------------------------------------------------------------------
// Multiple exchange on sampled weighted error.
// ---------------------------------------------------------------------------

struct Candidate {
    std::size_t index;
    double value;  // signed E
};

std::vector<std::size_t> exchange_indices(const FrequencyGrid& grid, std::span<const double> err,
                                          double level, std::size_t required, int iterations_done,
                                          double last_delta)
{
    std::vector<Candidate> cand;
    for (const auto& seg : grid.segments()) {
        auto exts = detail::segment_extrema(grid.omegas(), err, seg.begin, seg.end, /*refine=*/false);
        for (const auto& e : exts) cand.push_back(Candidate{e.index, e.value});
    }

    // Slack covers evaluation jitter of the sampled error at the current
    // reference points; genuine extrema sit at or above the level.
    const double cutoff = level * (1.0 - 1e-7);
    std::erase_if(cand, [&](const Candidate& c) { return std::abs(c.value) < cutoff; });

    // Merge consecutive same-sign candidates, keeping the stronger one.
    std::vector<Candidate> alt;
    for (const auto& c : cand) {
        if (!alt.empty() && std::signbit(alt.back().value) == std::signbit(c.value)) {
            if (std::abs(c.value) > std::abs(alt.back().value)) alt.back() = c;
        } else {
            alt.push_back(c);
        }
    }

    if (alt.size() < required) {
        throw NonConvergence("exchange_step: only " + std::to_string(alt.size()) +
                                 " alternating extrema found, need " + std::to_string(required),
                             iterations_done, last_delta);
    }

    auto weakest = [&](std::size_t lo, std::size_t hi) {  // inclusive range
        std::size_t best = lo;
        for (std::size_t i = lo + 1; i <= hi; ++i) {
            if (std::abs(alt[i].value) < std::abs(alt[best].value)) best = i;
        }
        return best;
    };

    while (alt.size() > required) {
        if (alt.size() - required == 1) {
            // Parity fix: drop the weaker endpoint.
            const std::size_t victim =
                (std::abs(alt.front().value) <= std::abs(alt.back().value)) ? 0 : alt.size() - 1;
            alt.erase(alt.begin() + static_cast<std::ptrdiff_t>(victim));
            continue;
        }
        const std::size_t i = weakest(0, alt.size() - 1);
        if (i == 0 || i == alt.size() - 1) {
            alt.erase(alt.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            // Dropping an interior extremum leaves equal signs adjacent;
            // drop its weaker neighbour with it.
            const std::size_t j =
                (std::abs(alt[i - 1].value) <= std::abs(alt[i + 1].value)) ? i - 1 : i + 1;
            const auto lohi = std::minmax(i, j);
            alt.erase(alt.begin() + static_cast<std::ptrdiff_t>(lohi.second));
            alt.erase(alt.begin() + static_cast<std::ptrdiff_t>(lohi.first));
        }
    }

    std::vector<std::size_t> refs(alt.size());
    for (std::size_t i = 0; i < alt.size(); ++i) refs[i] = alt[i].index;
    return refs;
}

// ---------------------------------------------------------------------------
// Remez loop, generic over the reference solver.
// ---------------------------------------------------------------------------

template <class Solver>
ZeroPhaseDesign run_remez(Solver solver, const BandSpec& bands, double k, BasisKind basis,
                          const FrequencyGrid& grid, const RemezOptions& opts)
{
    const std::size_t n_points = grid.size();
    const std::size_t required = static_cast<std::size_t>(basis.references());
    if (static_cast<std::size_t>(basis.size()) + 2 > n_points) {
        throw InvalidInput("design_zero_phase: grid must have at least basis size + 2 points");
    }

    std::vector<double> d(n_points), w(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        d[i] = grid.role(i) == BandRole::Pass ? 1.0 : 0.0;
        w[i] = grid.role(i) == BandRole::Pass ? 1.0 : k;
    }

    std::vector<std::size_t> refs_idx(required);
    for (std::size_t j = 0; j < required; ++j) {
        refs_idx[j] = (j * (n_points - 1)) / (required - 1);
    }

    std::vector<double> refs(required), err(n_points);
    double delta_prev = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;

    auto sample_error = [&]() {
        for (std::size_t i = 0; i < n_points; ++i) {
            err[i] = w[i] * (solver.eval(grid.omega(i)) - d[i]);
        }
    };

    auto polish = [&]() {
        if (!opts.polish) return;
        double delta_before = std::abs(solver.delta());
        for (int round = 0; round < 16; ++round) {
            double moved = 0.0;
            std::vector<double> next(refs);
            for (std::size_t i = 0; i < required; ++i) {
                const int band = bands.interval_index(refs[i]);
                const auto& iv = bands.intervals()[static_cast<std::size_t>(band)];
                double lo = iv.lo_rad(), hi = iv.hi_rad();
                if (i > 0 && bands.interval_index(refs[i - 1]) == band) {
                    lo = std::max(lo, 0.5 * (refs[i - 1] + refs[i]));
                }
                if (i + 1 < required && bands.interval_index(refs[i + 1]) == band) {
                    hi = std::min(hi, 0.5 * (refs[i] + refs[i + 1]));
                }
                const double sign = ((i % 2 == 0) ? 1.0 : -1.0) * (solver.delta() >= 0.0 ? 1.0 : -1.0);
                const double wgt = bands.weight_at(refs[i], k);
                const double des = bands.desired_at(refs[i]);
                auto objective = [&](double omega) {
                    return sign * wgt * (solver.eval(omega) - des);
                };
                next[i] = detail::maximize_on_interval(objective, lo, hi, 1e-13, 60);
                moved = std::max(moved, std::abs(next[i] - refs[i]));
            }
            refs = std::move(next);
            solver.solve(refs);
            const double delta_now = std::abs(solver.delta());
            const bool settled =
                std::abs(delta_now - delta_before) <= 1e-13 * delta_now && moved <= 1e-11;
            delta_before = delta_now;
            if (settled) break;
        }
    };

    for (int attempt = 0; attempt < 4; ++attempt) {
        bool grid_converged = false;
        while (iterations < opts.max_iterations) {
            ++iterations;
            for (std::size_t j = 0; j < required; ++j) refs[j] = grid.omega(refs_idx[j]);
            solver.solve(refs);
            const double delta = std::abs(solver.delta());
            sample_error();
            refs_idx = exchange_indices(grid, err, delta, required, iterations, delta);

            double emax = 0.0, emin = std::numeric_limits<double>::infinity();
            for (std::size_t idx : refs_idx) {
                emax = std::max(emax, std::abs(err[idx]));
                emin = std::min(emin, std::abs(err[idx]));
            }
            const bool delta_settled =
                !std::isnan(delta_prev) && std::abs(delta - delta_prev) <= opts.delta_rel_tol * delta;
            const bool spread_settled = (emax - emin) <= opts.spread_rel_tol * delta;
            delta_prev = delta;
            if (delta_settled || spread_settled) {
                grid_converged = true;
                break;
            }
        }
        if (!grid_converged) {
            throw NonConvergence("design_zero_phase: no convergence after " +
                                     std::to_string(iterations) + " iterations",
                                 iterations, delta_prev);
        }

        for (std::size_t j = 0; j < required; ++j) refs[j] = grid.omega(refs_idx[j]);
        solver.solve(refs);
        polish();

        // Accept only if no refined grid extremum exceeds the attained level.
        sample_error();
        double worst = 0.0;
        for (const auto& e : detail::grid_extrema(grid, err, /*refine=*/true)) {
            worst = std::max(worst, std::abs(e.value));
        }
        const double delta = std::abs(solver.delta());
        if (worst <= delta * (1.0 + 1e-6) || iterations >= opts.max_iterations) {
            if (worst > delta * (1.0 + 1e-6)) {
                throw NonConvergence("design_zero_phase: residual extremum above equiripple level",
                                     iterations, delta);
            }
            break;
        }
        // Fold the offending oscillation back in through another grid pass.
        delta_prev = std::numeric_limits<double>::quiet_NaN();
    }

    ZeroPhaseDesign design;
    design.one_sided = solver.coefficients();
    design.basis = basis;
    design.applied_weight = k;
    design.delta_p = std::abs(solver.delta());
    design.extremal_freqs = refs;
    design.iterations = iterations;
    return design;
}

}  // namespace

FrequencyGrid build_grid(const BandSpec& bands, int basis_size, int density)
{
    if (basis_size < 1) throw InvalidInput("build_grid: basis size must be positive");
    if (density < 4) throw InvalidInput("build_grid: density must be at least 4");

    const double total_measure = bands.total_measure_rad();
    const int target = basis_size * density;

    std::vector<double> omegas;
    std::vector<int> band_index;
    for (std::size_t b = 0; b < bands.size(); ++b) {
        const auto& iv = bands.intervals()[b];
        if (iv.measure_rad() == 0.0) {
            omegas.push_back(iv.lo_rad());
            band_index.push_back(static_cast<int>(b));
            continue;
        }
        int n = 2;
        if (total_measure > 0.0) {
            n = std::max(2, static_cast<int>(std::lround(target * iv.measure_rad() / total_measure)));
        }
        const double mid = 0.5 * (iv.lo_rad() + iv.hi_rad());
        const double half = 0.5 * iv.measure_rad();
        for (int j = 0; j < n; ++j) {
            double omega = mid - half * std::cos(pi * j / (n - 1));
            if (j == 0) omega = iv.lo_rad();
            if (j == n - 1) omega = iv.hi_rad();
            omegas.push_back(omega);
            band_index.push_back(static_cast<int>(b));
        }
    }
    return FrequencyGrid(std::move(omegas), std::move(band_index), bands);
}

ReferenceSolution solve_reference_system(std::span<const double> refs_rad, const BandSpec& bands,
                                         double k, BasisKind basis)
{
    if (static_cast<int>(refs_rad.size()) != basis.references()) {
        throw InvalidInput("solve_reference_system: need exactly " +
                           std::to_string(basis.references()) + " references, got " +
                           std::to_string(refs_rad.size()));
    }
    for (std::size_t i = 0; i < refs_rad.size(); ++i) {
        if (i > 0 && !(refs_rad[i - 1] < refs_rad[i])) {
            throw InvalidInput("solve_reference_system: references must be strictly increasing");
        }
        if (!bands.contains(refs_rad[i])) {
            throw InvalidInput("solve_reference_system: reference outside bands at w/pi = " +
                               std::to_string(refs_rad[i] / pi));
        }
    }
    if (basis.kind() == BasisKind::Kind::CosineOnly) {
        CosineSolver solver(bands, k, basis.m());
        solver.solve(refs_rad);
        return ReferenceSolution{solver.coefficients(), solver.delta()};
    }
    TrigSolver solver(bands, k, basis.m());
    solver.solve(refs_rad);
    return ReferenceSolution{solver.coefficients(), solver.delta()};
}

std::vector<double> exchange_step(const ZeroPhaseDesign& design, const FrequencyGrid& grid)
{
    const auto g = zero_phase_value(design.one_sided, design.basis.domain(), grid);
    std::vector<double> err(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = grid.role(i) == BandRole::Pass ? 1.0 : 0.0;
        const double w = grid.role(i) == BandRole::Pass ? 1.0 : design.applied_weight;
        err[i] = w * (g[i] - d);
    }
    auto idx = exchange_indices(grid, err, design.delta_p, static_cast<std::size_t>(design.basis.references()),
                                design.iterations, design.delta_p);
    std::vector<double> freqs(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) freqs[i] = grid.omega(idx[i]);
    return freqs;
}

ZeroPhaseDesign design_zero_phase(const BandSpec& bands, double k, BasisKind basis,
                                  const FrequencyGrid& grid, const RemezOptions& opts)
{
    if (!(k > 0.0)) throw InvalidInput("design_zero_phase: weight must be positive");
    if (basis.kind() == BasisKind::Kind::CosineOnly) {
        return run_remez(CosineSolver(bands, k, basis.m()), bands, k, basis, grid, opts);
    }
    return run_remez(TrigSolver(bands, k, basis.m()), bands, k, basis, grid, opts);
}

}  // namespace firmin
