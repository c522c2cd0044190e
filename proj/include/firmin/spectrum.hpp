#pragma once

#include <optional>
#include <span>
#include <vector>

#include "firmin/types.hpp"

namespace firmin {

// H(e^{j omega}) = sum_n h[n] e^{-j omega n}, one value per grid point.
std::vector<cdouble> evaluate_frequency_response(const FirFilter& h, std::span<const double> omegas_rad);
std::vector<cdouble> evaluate_frequency_response(const FirFilter& h, const FrequencyGrid& grid);

// |H(e^{j omega})| pointwise.
std::vector<double> magnitude_response(const FirFilter& h, std::span<const double> omegas_rad);
std::vector<double> magnitude_response(const FirFilter& h, const FrequencyGrid& grid);

// |H(e^{j omega})|^2 pointwise (nonnegative by construction).
std::vector<double> power_response(const FirFilter& h, std::span<const double> omegas_rad);

struct GroupDelayOptions {
    // Points where |H| falls below floor_rel * max|H| are reported as
    // undefined instead of a number; stopband nulls would otherwise
    // produce meaningless values.
    double floor_rel = 1e-8;
};

// -d(arg H)/d omega in samples, via Re{ (sum n h[n] e^{-j omega n}) / H }.
std::vector<std::optional<double>> group_delay(const FirFilter& h, std::span<const double> omegas_rad,
                                               const GroupDelayOptions& opts = {});
std::vector<std::optional<double>> group_delay(const FirFilter& h, const FrequencyGrid& grid,
                                               const GroupDelayOptions& opts = {});

// One-sided autocorrelation r[0..N], r[m] = sum_n h[n+m] conj(h[n]).
// The full sequence follows from r[-m] = conj(r[m]).
std::vector<cdouble> autocorrelation_of(const FirFilter& h);

// Real-valued transform of a conjugate-symmetric one-sided sequence:
//   Real domain:    c[0] + sum_n 2 c[n] cos(n omega)
//   Complex domain: c[0] + sum_n 2 Re(c[n]) cos(n omega) + 2 Im(c[n]) sin(n omega)
// c[0] must be real.
std::vector<double> zero_phase_value(std::span<const cdouble> one_sided, CoeffDomain domain,
                                     std::span<const double> omegas_rad);
std::vector<double> zero_phase_value(std::span<const cdouble> one_sided, CoeffDomain domain,
                                     const FrequencyGrid& grid);
double zero_phase_value_at(std::span<const cdouble> one_sided, CoeffDomain domain, double omega_rad);

}  // namespace firmin
