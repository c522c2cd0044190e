#include "firmin/autocorr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "firmin/detail/extrema.hpp"
#include "firmin/spectrum.hpp"

namespace firmin {

namespace {

// Uniform sweep over the whole admissible range for the domain; the
// spectrum must be nonnegative everywhere, including transition regions.
std::vector<double> full_range_sweep(CoeffDomain domain, int n_points)
{
    std::vector<double> omegas(static_cast<std::size_t>(n_points));
    const double lo = domain == CoeffDomain::Real ? 0.0 : -pi;
    const double hi = pi;
    for (int i = 0; i < n_points; ++i) {
        omegas[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n_points - 1);
    }
    return omegas;
}

// Local extrema of the continuous spectrum, polished to machine accuracy
// by bounded maximization between the bracketing samples. Parabolic
// fits are not good enough here: constraint (ii) parks the true minimum
// at exactly zero and fit noise would read as a negative spectrum.
struct SpectrumStats {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
};

SpectrumStats scan_extrema(std::span<const cdouble> one_sided, CoeffDomain domain,
                           std::span<const double> omegas, std::span<const double> values)
{
    SpectrumStats stats;
    for (std::size_t i = 0; i < values.size(); ++i) {
        stats.min = std::min(stats.min, values[i]);
        stats.max = std::max(stats.max, values[i]);
    }
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        const bool local_min = values[i] <= values[i - 1] && values[i] <= values[i + 1];
        const bool local_max = values[i] >= values[i - 1] && values[i] >= values[i + 1];
        if (!local_min && !local_max) continue;
        const double sign = local_min ? -1.0 : 1.0;
        const double at = detail::maximize_on_interval(
            [&](double w) { return sign * zero_phase_value_at(one_sided, domain, w); },
            omegas[i - 1], omegas[i + 1], 1e-13, 60);
        const double v = zero_phase_value_at(one_sided, domain, at);
        stats.min = std::min(stats.min, v);
        stats.max = std::max(stats.max, v);
    }
    return stats;
}

double spectrum_floor(const AutocorrSequence& p, int density)
{
    const int n_points = std::max(512, density * std::max(1, p.source.basis.size()));
    const auto omegas = full_range_sweep(p.domain(), n_points);
    const auto values = zero_phase_value(p.one_sided, p.domain(), omegas);
    return scan_extrema(p.one_sided, p.domain(), omegas, values).min;
}

}  // namespace

AutocorrSequence lift_to_autocorrelation(const ZeroPhaseDesign& g, double a, double b,
                                         const LiftOptions& opts)
{
    if (!(a > 0.0) || b < 0.0) {
        throw InvalidInput("lift_to_autocorrelation: need a > 0 and b >= 0");
    }
    if (g.one_sided.empty()) throw InvalidInput("lift_to_autocorrelation: empty design");

    AutocorrSequence p;
    p.one_sided = g.one_sided;
    for (auto& c : p.one_sided) c *= a;
    p.one_sided[0] = cdouble(p.one_sided[0].real() + b, 0.0);
    p.lift_a = a;
    p.lift_b = b;
    p.source = g;

    const double worst = spectrum_floor(p, opts.validation_density);
    const double floor = -opts.eps_psd_rel * p.p0();
    if (worst < floor) {
        throw FactorizationError("lift_to_autocorrelation: spectrum reaches " +
                                 std::to_string(worst) + ", below tolerance " +
                                 std::to_string(floor));
    }
    return p;
}

ConstraintReport validate_constraints(const AutocorrSequence& p, const DesignSpec& spec,
                                      const ConstraintTolerances& tol)
{
    ConstraintReport report;
    if (p.one_sided.empty()) return report;

    const int density = 64;
    const FrequencyGrid grid = build_grid(spec.bands, std::max(1, p.source.basis.size()), density);
    const auto values = zero_phase_value(p.one_sided, p.domain(), grid);

    double pass_max = -std::numeric_limits<double>::infinity();
    double pass_min = std::numeric_limits<double>::infinity();
    double stop_max = -std::numeric_limits<double>::infinity();
    for (const auto& seg : grid.segments()) {
        const auto stats = scan_extrema(
            p.one_sided, p.domain(),
            std::span<const double>(grid.omegas()).subspan(seg.begin, seg.end - seg.begin),
            std::span<const double>(values).subspan(seg.begin, seg.end - seg.begin));
        if (seg.role == BandRole::Pass) {
            pass_max = std::max(pass_max, stats.max);
            pass_min = std::min(pass_min, stats.min);
        } else {
            stop_max = std::max(stop_max, stats.max);
        }
    }

    report.min_spectrum = spectrum_floor(p, density);
    report.passband_max_sqrt = std::sqrt(std::max(0.0, pass_max));
    report.passband_min_sqrt = std::sqrt(std::max(0.0, pass_min));
    report.delta_s = std::sqrt(std::max(0.0, stop_max));
    report.delta_p = 0.5 * (report.passband_max_sqrt - report.passband_min_sqrt);

    const double hi_swing = report.passband_max_sqrt - 1.0;
    const double lo_swing = 1.0 - report.passband_min_sqrt;
    report.symmetric_ok = std::abs(hi_swing - lo_swing) <= tol.symmetry_abs;
    report.psd_ok = report.min_spectrum >= -tol.eps_psd_rel * p.p0();
    report.ratio = report.delta_s > 0.0 ? report.delta_p / report.delta_s
                                        : std::numeric_limits<double>::infinity();
    report.ratio_ok = std::abs(report.ratio - spec.k_des) <= tol.ratio_abs;
    return report;
}

}  // namespace firmin
