#include "firmin/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "firmin/chebyshev.hpp"
#include "firmin/detail/extrema.hpp"
#include "firmin/spectrum.hpp"

namespace firmin {

namespace {

// Certification works on P(w) = |H(w)|^2 rather than |H| directly: P is
// a smooth trigonometric polynomial everywhere, while |H| has kinks at
// its zero touches that defeat local refinement. Extrema of the adjusted
// error within a band coincide with extrema of P because the per-band
// adjusted error is a monotone transform of P.
struct PowerExtremum {
    double omega = 0.0;
    double power = 0.0;
    BandRole role = BandRole::Pass;
};

double power_at(const FirFilter& h, double omega)
{
    const cdouble z = std::polar(1.0, -omega);
    cdouble acc = h.coeffs().back();
    for (std::size_t n = h.coeffs().size() - 1; n-- > 0;) acc = acc * z + h.coeffs()[n];
    return std::norm(acc);
}

std::vector<PowerExtremum> power_extrema(const FirFilter& h, const FrequencyGrid& grid)
{
    const auto samples = power_response(h, grid.omegas());
    std::vector<PowerExtremum> out;
    for (const auto& seg : grid.segments()) {
        out.push_back(PowerExtremum{grid.omega(seg.begin), samples[seg.begin], seg.role});
        for (std::size_t i = seg.begin + 1; i + 1 < seg.end; ++i) {
            const bool local_min = samples[i] <= samples[i - 1] && samples[i] <= samples[i + 1];
            const bool local_max = samples[i] >= samples[i - 1] && samples[i] >= samples[i + 1];
            if (!local_min && !local_max) continue;
            const double sign = local_min ? -1.0 : 1.0;
            const double at = detail::maximize_on_interval(
                [&](double w) { return sign * power_at(h, w); }, grid.omega(i - 1),
                grid.omega(i + 1), 1e-13, 60);
            out.push_back(PowerExtremum{at, power_at(h, at), seg.role});
        }
        if (seg.end - seg.begin > 1) {
            out.push_back(PowerExtremum{grid.omega(seg.end - 1), samples[seg.end - 1], seg.role});
        }
    }
    return out;
}

struct BandDeviations {
    double pass_dev = 0.0;      // max | |H| - 1 | over passbands
    double stop_dev = 0.0;      // max |H| over stopbands
    double weighted_max = 0.0;  // max |W_des (|H| - D)|
    double arg_max = 0.0;
};

BandDeviations band_deviations(const std::vector<PowerExtremum>& extrema, double k_des)
{
    BandDeviations out;
    for (const auto& e : extrema) {
        const double mag = std::sqrt(std::max(0.0, e.power));
        double weighted;
        if (e.role == BandRole::Pass) {
            const double dev = std::abs(mag - 1.0);
            out.pass_dev = std::max(out.pass_dev, dev);
            weighted = dev;
        } else {
            out.stop_dev = std::max(out.stop_dev, mag);
            weighted = k_des * mag;
        }
        if (weighted > out.weighted_max) {
            out.weighted_max = weighted;
            out.arg_max = e.omega;
        }
    }
    return out;
}

// Shared alternation counter: qualifying attainments of +-level with
// strictly alternating signs; consecutive same-sign attainments merge.
AlternationCount count_runs(const std::vector<std::pair<double, double>>& candidates, double level,
                            double rel_tol)
{
    const double cutoff = level * (1.0 - rel_tol);
    AlternationCount out;
    bool have_sign = false;
    bool last_positive = false;
    double best_in_run = 0.0;
    double best_omega = 0.0;

    auto flush = [&]() {
        if (have_sign) out.locations.push_back(best_omega);
    };

    for (const auto& [omega, value] : candidates) {
        if (std::abs(value) < cutoff) continue;
        const bool positive = value > 0.0;
        if (have_sign && positive == last_positive) {
            if (std::abs(value) > best_in_run) {
                best_in_run = std::abs(value);
                best_omega = omega;
            }
            continue;
        }
        flush();
        have_sign = true;
        last_positive = positive;
        best_in_run = std::abs(value);
        best_omega = omega;
        ++out.count;
    }
    flush();
    return out;
}

}  // namespace

DeviationReport measure_deviations(const FirFilter& h, const DesignSpec& spec,
                                   const FrequencyGrid& grid)
{
    const auto dev = band_deviations(power_extrema(h, grid), spec.k_des);
    DeviationReport report;
    report.delta_p = dev.weighted_max;
    report.delta_s = dev.weighted_max / spec.k_des;
    report.arg_max_freq = dev.arg_max;
    return report;
}

AdjustedTargets adjusted_targets(const DesignSpec& spec, const DeviationReport& dev)
{
    return AdjustedTargets{dev.delta_s / 2.0, 2.0 * spec.k_des};
}

std::vector<double> adjusted_error(const FirFilter& h, const DesignSpec& spec,
                                   const AdjustedTargets& adj, const FrequencyGrid& grid)
{
    (void)spec;
    const auto mag = magnitude_response(h, grid);
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out[i] = grid.role(i) == BandRole::Pass ? mag[i] - 1.0
                                                : adj.w_prime_stop * (mag[i] - adj.d_prime_stop);
    }
    return out;
}

AlternationCount count_alternations(const FrequencyGrid& grid, std::span<const double> samples,
                                    double level, double rel_tol)
{
    if (!(level > 0.0)) throw InvalidInput("count_alternations: level must be positive");
    std::vector<std::pair<double, double>> candidates;
    for (const auto& e : detail::grid_extrema(grid, samples, true)) {
        candidates.emplace_back(e.omega, e.value);
    }
    return count_runs(candidates, level, rel_tol);
}

Certificate certify(const FirFilter& h, const DesignSpec& spec, const CertifyOptions& opts)
{
    if (h.order() != spec.order) {
        throw InvalidInput("certify: filter order " + std::to_string(h.order()) +
                           " does not match spec order " + std::to_string(spec.order));
    }
    if (spec.domain == CoeffDomain::Real && h.domain() == CoeffDomain::Complex) {
        throw InvalidInput("certify: complex filter against a real-coefficient spec");
    }

    Certificate cert;
    cert.required_alternations =
        spec.domain == CoeffDomain::Real ? spec.order + 2 : 2 * spec.order + 2;

    const FrequencyGrid grid = build_grid(spec.bands, cert.required_alternations, opts.grid_density);
    const auto extrema = power_extrema(h, grid);

    const auto dev = band_deviations(extrema, spec.k_des);
    cert.deviations.delta_p = dev.weighted_max;
    cert.deviations.delta_s = dev.weighted_max / spec.k_des;
    cert.deviations.arg_max_freq = dev.arg_max;
    cert.targets = adjusted_targets(spec, cert.deviations);

    if (cert.deviations.delta_p > 0.0) {
        std::vector<std::pair<double, double>> candidates;
        candidates.reserve(extrema.size());
        for (const auto& e : extrema) {
            const double mag = std::sqrt(std::max(0.0, e.power));
            const double value = e.role == BandRole::Pass
                                     ? mag - 1.0
                                     : cert.targets.w_prime_stop * (mag - cert.targets.d_prime_stop);
            candidates.emplace_back(e.omega, value);
        }
        auto alt = count_runs(candidates, cert.deviations.delta_p, opts.alternation_rel_tol);
        cert.found_alternations = alt.count;
        cert.alternation_freqs = std::move(alt.locations);
    }

    // Practical check from the characterization: the per-band deviation
    // ratio must already equal k_des.
    cert.ratio_ok = dev.stop_dev > 0.0 &&
                    std::abs(dev.pass_dev / (dev.stop_dev * spec.k_des) - 1.0) <= opts.ratio_rel_tol;
    cert.optimal = cert.found_alternations >= cert.required_alternations;
    return cert;
}

}  // namespace firmin
