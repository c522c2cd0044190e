#pragma once

#include <utility>
#include <vector>

#include "firmin/chebyshev.hpp"
#include "firmin/types.hpp"

namespace firmin {

// Target stopband deviation of the autocorrelation-domain design at
// weight K:  8 k_des^2 / (K^2 + 16 k_des^4 - 8 k_des^2).
double delta_s_target(double k, double k_des);

// Target passband deviation, K * delta_s_target. Strictly decreasing in
// K above the lower bound.
double delta_p_target(double k, double k_des);

// Smallest physically meaningful weight: 4 k_des (k_des + 1).
double k_lower_bound(double k_des);

// Scale/shift pair mapping the zero-phase design onto an autocorrelation:
// b = 8 k_des^2 / K^2,  a = 8 k_des^2 / (K * delta_p_res).
std::pair<double, double> lift_coefficients(double k, double k_des, double delta_p_res);

struct WeightSolverOptions {
    double tol = 1e-8;        // relative residual on delta_p
    int max_iter = 60;        // bisection steps after bracketing
    bool secant_accel = false;  // secant proposals inside the bracket
    int grid_density = 16;
    RemezOptions remez;
};

struct BracketStep {
    double k = 0.0;
    double delta_p_res = 0.0;
    double delta_p_target = 0.0;
};

struct WeightSolution {
    double k_star = 0.0;
    ZeroPhaseDesign design;          // converged design at k_star
    double target_delta_p = 0.0;     // delta_p_target(k_star)
    double residual = 0.0;           // |delta_p_res - target| / target
    std::vector<BracketStep> bracket_history;
};

// Solves delta_p_res(K) = delta_p_target(K) by bracketed bisection. The
// two curves are strictly increasing/decreasing, so the bracket is found
// by doubling the upper end until the sign of the difference flips.
WeightSolution solve_weight(const DesignSpec& spec, const FrequencyGrid& grid,
                            const WeightSolverOptions& opts = {});
WeightSolution solve_weight(const DesignSpec& spec, const WeightSolverOptions& opts = {});

}  // namespace firmin
