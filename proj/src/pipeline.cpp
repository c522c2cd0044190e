#include "firmin/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <string>
#include <type_traits>

namespace firmin {

namespace {

class StageTimer {
public:
    explicit StageTimer(std::map<std::string, double>& sink) : sink_(sink) {}

    template <class F>
    auto run(const std::string& stage, F&& fn) -> decltype(fn())
    {
        const auto start = std::chrono::steady_clock::now();
        auto finish = [&] {
            const auto stop = std::chrono::steady_clock::now();
            sink_[stage] = std::chrono::duration<double, std::milli>(stop - start).count();
        };
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            finish();
        } else {
            auto result = fn();
            finish();
            return result;
        }
    }

private:
    std::map<std::string, double>& sink_;
};

FirFilter reverse_to_maximum_phase(const FirFilter& min_phase)
{
    const auto& c = min_phase.coeffs();
    std::vector<cdouble> rev(c.rbegin(), c.rend());
    for (auto& v : rev) v = std::conj(v);
    if (std::abs(rev[0]) > 0.0) {
        const cdouble rot = std::conj(rev[0]) / std::abs(rev[0]);
        for (auto& v : rev) v *= rot;
        rev[0] = cdouble(rev[0].real(), 0.0);
    }
    return FirFilter(std::move(rev), min_phase.domain(), PhaseTag::Maximum);
}

}  // namespace

DesignResult design_filter(const DesignSpec& spec, const PhaseSelection& phase,
                           const DesignOptions& opts)
{
    std::map<std::string, double> timings;
    StageTimer timer(timings);

    WeightSolverOptions wopts;
    wopts.tol = opts.weight_tol;
    wopts.max_iter = opts.weight_max_iter;
    wopts.secant_accel = opts.secant_accel;
    wopts.grid_density = opts.grid_density;

    WeightSolution ws = timer.run("weight_solver", [&] { return solve_weight(spec, wopts); });

    AutocorrSequence p = timer.run("lift", [&] {
        const auto [a, b] = lift_coefficients(ws.k_star, spec.k_des, ws.design.delta_p);
        return lift_to_autocorrelation(ws.design, a, b, opts.lift);
    });

    FactorizationMethod method = opts.factorization;
    if (method == FactorizationMethod::Auto) {
        method = spec.order <= opts.factor.root_order_limit ? FactorizationMethod::Roots
                                                            : FactorizationMethod::Cepstral;
    }

    FirFilter h = timer.run("factorization", [&] {
        if (method == FactorizationMethod::Roots) {
            const ZeroSet zs = factor_roots(p, opts.factor);
            return select_phase(zs, phase);
        }
        const CepstralOptions& copts = opts.cepstral;
        switch (phase.kind) {
        case PhaseSelection::Kind::Minimum:
            return minimum_phase_cepstral(p, copts);
        case PhaseSelection::Kind::Maximum:
            return reverse_to_maximum_phase(minimum_phase_cepstral(p, copts));
        case PhaseSelection::Kind::Explicit:
        default:
            throw FactorizationError(
                "design_filter: explicit zero selection requires the root method");
        }
    });

    Certificate cert = timer.run("certify", [&] { return certify(h, spec, opts.certify); });
    if (!cert.optimal || !cert.ratio_ok) {
        throw InternalInconsistency(
            "design_filter: converged design failed self-certification (found " +
            std::to_string(cert.found_alternations) + " of " +
            std::to_string(cert.required_alternations) + " alternations, ratio_ok=" +
            (cert.ratio_ok ? "true" : "false") + "); this signals a tolerance bug");
    }

    return DesignResult{std::move(h), std::move(p), std::move(ws), std::move(cert),
                        std::move(timings)};
}

}  // namespace firmin
