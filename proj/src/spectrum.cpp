#include "firmin/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace firmin {

namespace {

// Horner evaluation of sum_n h[n] z^n at z = e^{-j omega}; |z| = 1 keeps
// the recurrence well conditioned.
cdouble horner_at(std::span<const cdouble> h, double omega)
{
    const cdouble z = std::polar(1.0, -omega);
    cdouble acc = h.back();
    for (std::size_t n = h.size() - 1; n-- > 0;) {
        acc = acc * z + h[n];
    }
    return acc;
}

void require_nonempty(const FirFilter& h)
{
    if (h.coeffs().empty()) throw InvalidInput("empty coefficient vector");
}

}  // namespace

std::vector<cdouble> evaluate_frequency_response(const FirFilter& h, std::span<const double> omegas_rad)
{
    require_nonempty(h);
    std::vector<cdouble> out(omegas_rad.size());
    for (std::size_t k = 0; k < omegas_rad.size(); ++k) {
        out[k] = horner_at(h.coeffs(), omegas_rad[k]);
    }
    return out;
}

std::vector<cdouble> evaluate_frequency_response(const FirFilter& h, const FrequencyGrid& grid)
{
    return evaluate_frequency_response(h, std::span<const double>(grid.omegas()));
}

std::vector<double> magnitude_response(const FirFilter& h, std::span<const double> omegas_rad)
{
    auto resp = evaluate_frequency_response(h, omegas_rad);
    std::vector<double> out(resp.size());
    for (std::size_t k = 0; k < resp.size(); ++k) out[k] = std::abs(resp[k]);
    return out;
}

std::vector<double> magnitude_response(const FirFilter& h, const FrequencyGrid& grid)
{
    return magnitude_response(h, std::span<const double>(grid.omegas()));
}

std::vector<double> power_response(const FirFilter& h, std::span<const double> omegas_rad)
{
    auto resp = evaluate_frequency_response(h, omegas_rad);
    std::vector<double> out(resp.size());
    for (std::size_t k = 0; k < resp.size(); ++k) out[k] = std::norm(resp[k]);
    return out;
}

std::vector<std::optional<double>> group_delay(const FirFilter& h, std::span<const double> omegas_rad,
                                               const GroupDelayOptions& opts)
{
    require_nonempty(h);
    const auto& c = h.coeffs();
    std::vector<cdouble> ramped(c.size());
    for (std::size_t n = 0; n < c.size(); ++n) {
        ramped[n] = static_cast<double>(n) * c[n];
    }

    std::vector<std::optional<double>> out(omegas_rad.size());
    std::vector<cdouble> resp(omegas_rad.size());
    double max_mag = 0.0;
    for (std::size_t k = 0; k < omegas_rad.size(); ++k) {
        resp[k] = horner_at(c, omegas_rad[k]);
        max_mag = std::max(max_mag, std::abs(resp[k]));
    }
    const double floor = opts.floor_rel * max_mag;
    for (std::size_t k = 0; k < omegas_rad.size(); ++k) {
        if (std::abs(resp[k]) <= floor) {
            out[k] = std::nullopt;
            continue;
        }
        const cdouble num = horner_at(ramped, omegas_rad[k]);
        out[k] = (num / resp[k]).real();
    }
    return out;
}

std::vector<std::optional<double>> group_delay(const FirFilter& h, const FrequencyGrid& grid,
                                               const GroupDelayOptions& opts)
{
    return group_delay(h, std::span<const double>(grid.omegas()), opts);
}

std::vector<cdouble> autocorrelation_of(const FirFilter& h)
{
    const auto& c = h.coeffs();
    const std::size_t n = c.size();
    std::vector<cdouble> r(n);
    for (std::size_t m = 0; m < n; ++m) {
        cdouble acc = 0.0;
        for (std::size_t k = 0; k + m < n; ++k) {
            acc += c[k + m] * std::conj(c[k]);
        }
        r[m] = acc;
    }
    r[0] = cdouble(r[0].real(), 0.0);  // exactly real by construction
    return r;
}

double zero_phase_value_at(std::span<const cdouble> one_sided, CoeffDomain domain, double omega_rad)
{
    if (one_sided.empty()) throw InvalidInput("zero_phase_value: empty sequence");
    if (one_sided[0].imag() != 0.0) throw InvalidInput("zero_phase_value: c[0] must be real");
    double acc = one_sided[0].real();
    if (domain == CoeffDomain::Real) {
        for (std::size_t n = 1; n < one_sided.size(); ++n) {
            acc += 2.0 * one_sided[n].real() * std::cos(static_cast<double>(n) * omega_rad);
        }
    } else {
        for (std::size_t n = 1; n < one_sided.size(); ++n) {
            const double t = static_cast<double>(n) * omega_rad;
            acc += 2.0 * one_sided[n].real() * std::cos(t) + 2.0 * one_sided[n].imag() * std::sin(t);
        }
    }
    return acc;
}

std::vector<double> zero_phase_value(std::span<const cdouble> one_sided, CoeffDomain domain,
                                     std::span<const double> omegas_rad)
{
    std::vector<double> out(omegas_rad.size());
    for (std::size_t k = 0; k < omegas_rad.size(); ++k) {
        out[k] = zero_phase_value_at(one_sided, domain, omegas_rad[k]);
    }
    return out;
}

std::vector<double> zero_phase_value(std::span<const cdouble> one_sided, CoeffDomain domain,
                                     const FrequencyGrid& grid)
{
    return zero_phase_value(one_sided, domain, std::span<const double>(grid.omegas()));
}

}  // namespace firmin
