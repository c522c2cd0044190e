#include "firmin/weight_solver.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace firmin {

double delta_s_target(double k, double k_des)
{
    if (!(k > 0.0) || !(k_des > 0.0)) throw InvalidInput("delta_s_target: nonpositive input");
    const double k2 = k_des * k_des;
    const double denom = k * k + 16.0 * k2 * k2 - 8.0 * k2;
    if (!(denom > 0.0)) throw InvalidInput("delta_s_target: nonpositive denominator");
    return 8.0 * k2 / denom;
}

double delta_p_target(double k, double k_des)
{
    return k * delta_s_target(k, k_des);
}

double k_lower_bound(double k_des)
{
    if (!(k_des > 0.0)) throw InvalidInput("k_lower_bound: k_des must be positive");
    return 4.0 * k_des * (k_des + 1.0);
}

std::pair<double, double> lift_coefficients(double k, double k_des, double delta_p_res)
{
    if (!(k > 0.0) || !(k_des > 0.0) || !(delta_p_res > 0.0)) {
        throw InvalidInput("lift_coefficients: nonpositive input");
    }
    const double k2 = 8.0 * k_des * k_des;
    const double b = k2 / (k * k);
    const double a = k2 / (k * delta_p_res);
    return {a, b};
}

namespace {

BasisKind basis_for(const DesignSpec& spec)
{
    // The zero-phase intermediate has order 2N, i.e. one-sided length N+1.
    return spec.domain == CoeffDomain::Real ? BasisKind::cosine(spec.order)
                                            : BasisKind::cosine_and_sine(spec.order);
}

}  // namespace

WeightSolution solve_weight(const DesignSpec& spec, const FrequencyGrid& grid,
                            const WeightSolverOptions& opts)
{
    const BasisKind basis = basis_for(spec);
    WeightSolution out;

    struct Eval {
        double k = 0.0;
        double f = 0.0;         // delta_p_res - delta_p_target
        double rel = 0.0;       // residual relative to the target
        ZeroPhaseDesign design;
        double target = 0.0;
    };

    auto evaluate = [&](double k) {
        Eval e;
        e.k = k;
        e.design = design_zero_phase(spec.bands, k, basis, grid, opts.remez);
        e.target = delta_p_target(k, spec.k_des);
        e.f = e.design.delta_p - e.target;
        e.rel = std::abs(e.f) / e.target;
        out.bracket_history.push_back(BracketStep{k, e.design.delta_p, e.target});
        return e;
    };

    auto finish = [&](Eval e) {
        out.k_star = e.k;
        out.design = std::move(e.design);
        out.target_delta_p = e.target;
        out.residual = e.rel;
        return std::move(out);
    };

    const double k_lo = k_lower_bound(spec.k_des);
    Eval lo = evaluate(k_lo);
    if (lo.rel <= opts.tol) return finish(std::move(lo));
    if (lo.f > 0.0) {
        throw NonConvergence(
            "solve_weight: resulting deviation already exceeds the target at the lower bound K = " +
                std::to_string(k_lo),
            0, lo.design.delta_p);
    }

    // Double the upper end until the difference changes sign.
    constexpr double k_cap = 1e12;
    Eval hi = lo;
    for (double k = 4.0 * k_lo;; k *= 2.0) {
        hi = evaluate(k);
        if (hi.rel <= opts.tol) return finish(std::move(hi));
        if (hi.f > 0.0) break;
        lo = hi;
        if (k > k_cap) {
            throw NonConvergence("solve_weight: no sign change up to K = " + std::to_string(k_cap),
                                 static_cast<int>(out.bracket_history.size()), hi.design.delta_p);
        }
    }

    Eval best = (std::abs(lo.f) < std::abs(hi.f)) ? lo : hi;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        double k_next = 0.5 * (lo.k + hi.k);
        if (opts.secant_accel && hi.f != lo.f) {
            const double k_secant = hi.k - hi.f * (hi.k - lo.k) / (hi.f - lo.f);
            if (k_secant > lo.k && k_secant < hi.k && std::isfinite(k_secant)) k_next = k_secant;
        }
        Eval mid = evaluate(k_next);
        if (std::abs(mid.f) < std::abs(best.f)) best = mid;
        if (mid.rel <= opts.tol) return finish(std::move(mid));
        if (mid.f > 0.0) {
            hi = std::move(mid);
        } else {
            lo = std::move(mid);
        }
        if (hi.k - lo.k <= 1e-15 * hi.k) break;
    }
    throw NonConvergence("solve_weight: residual " + std::to_string(best.rel) +
                             " above tolerance after bisection budget",
                         opts.max_iter, best.design.delta_p);
}

WeightSolution solve_weight(const DesignSpec& spec, const WeightSolverOptions& opts)
{
    const BasisKind basis = basis_for(spec);
    FrequencyGrid grid = build_grid(spec.bands, basis.size(), opts.grid_density);
    return solve_weight(spec, grid, opts);
}

}  // namespace firmin
