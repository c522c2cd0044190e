#pragma once

#include <span>
#include <vector>

#include "firmin/types.hpp"

namespace firmin {

// Measured deviations of a filter against a spec. delta_s is
// delta_p / k_des by definition.
struct DeviationReport {
    double delta_p = 0.0;
    double delta_s = 0.0;
    double arg_max_freq = 0.0;  // radians, location of the maximum weighted error
};

// Stopband targets of the adjusted weighted error: D' = delta_s / 2,
// W' = 2 k_des. Passband values stay 1 and 1.
struct AdjustedTargets {
    double d_prime_stop = 0.0;
    double w_prime_stop = 0.0;
};

struct Certificate {
    int required_alternations = 0;  // N+2 real, 2N+2 complex
    int found_alternations = 0;
    std::vector<double> alternation_freqs;  // radians
    bool ratio_ok = false;  // practical check: per-band deviation ratio equals k_des
    bool optimal = false;   // found >= required
    DeviationReport deviations;
    AdjustedTargets targets;
};

struct CertifyOptions {
    int grid_density = 32;              // points per degree of freedom
    double alternation_rel_tol = 1e-4;  // extremal-attainment tolerance relative to delta_p
    double ratio_rel_tol = 1e-3;        // tolerance on the practical ratio check
};

// delta_p = max over the bands of |W_des (|H| - D)|; extrema are located
// on |H|^2 (smooth) and refined before taking the square root.
DeviationReport measure_deviations(const FirFilter& h, const DesignSpec& spec,
                                   const FrequencyGrid& grid);

AdjustedTargets adjusted_targets(const DesignSpec& spec, const DeviationReport& dev);

// E'_W(w) = W'_des(w) (|H| - D'(w)) sampled on the grid.
std::vector<double> adjusted_error(const FirFilter& h, const DesignSpec& spec,
                                   const AdjustedTargets& adj, const FrequencyGrid& grid);

// Longest alternating subsequence of grid points where the samples attain
// +-level within rel_tol. Consecutive same-sign attainments merge into
// one; band edges participate like any other extremum.
struct AlternationCount {
    int count = 0;
    std::vector<double> locations;  // radians
};

AlternationCount count_alternations(const FrequencyGrid& grid, std::span<const double> samples,
                                    double level, double rel_tol);

// Full Theorem-1 style certificate for h against spec.
Certificate certify(const FirFilter& h, const DesignSpec& spec, const CertifyOptions& opts = {});

}  // namespace firmin
