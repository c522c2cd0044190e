#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "firmin/autocorr.hpp"
#include "firmin/spectrum.hpp"
#include "firmin/weight_solver.hpp"
#include "support/test_helpers.hpp"

using namespace firmin;
using doctest::Approx;

namespace {

ZeroPhaseDesign impulse_design(double value)
{
    ZeroPhaseDesign g;
    g.one_sided = {cdouble(value, 0.0)};
    g.basis = BasisKind::cosine(0);
    g.applied_weight = 1.0;
    g.delta_p = 1.0;
    return g;
}

AutocorrSequence designed_autocorr(const DesignSpec& spec, WeightSolution& ws_out)
{
    ws_out = solve_weight(spec);
    const auto [a, b] = lift_coefficients(ws_out.k_star, spec.k_des, ws_out.design.delta_p);
    return lift_to_autocorrelation(ws_out.design, a, b);
}

}  // namespace

TEST_CASE("lift: impulse case and symmetry preservation")
{
    const auto p = lift_to_autocorrelation(impulse_design(1.0), 2.0, 0.5);
    REQUIRE(p.one_sided.size() == 1);
    CHECK(p.p0() == Approx(2.5));

    // Lifting scales lags >= 1 and shifts only the origin; complex
    // structure is untouched.
    ZeroPhaseDesign g;
    g.one_sided = {cdouble(3.0, 0.0), cdouble(0.2, -0.1), cdouble(-0.05, 0.02)};
    g.basis = BasisKind::cosine_and_sine(2);
    g.applied_weight = 1.0;
    g.delta_p = 0.1;
    const auto q = lift_to_autocorrelation(g, 1.5, 0.25);
    CHECK(q.one_sided[0].real() == Approx(3.0 * 1.5 + 0.25));
    CHECK(q.one_sided[0].imag() == 0.0);
    CHECK(q.one_sided[1].real() == Approx(0.3));
    CHECK(q.one_sided[1].imag() == Approx(-0.15));
    CHECK(q.one_sided[2] == 1.5 * g.one_sided[2]);

    CHECK_THROWS_AS(lift_to_autocorrelation(g, -1.0, 0.0), InvalidInput);
}

TEST_CASE("lift: spectrum relation P = a G + b holds pointwise")
{
    const DesignSpec spec(8, BandSpec({{0.0, 0.35, BandRole::Pass}, {0.5, 1.0, BandRole::Stop}}),
                          2.0, CoeffDomain::Real);
    WeightSolution ws;
    const auto p = designed_autocorr(spec, ws);
    const auto omegas = testing::uniform_omegas(0.0, pi, 501);
    const auto pv = zero_phase_value(p.one_sided, p.domain(), omegas);
    const auto gv = zero_phase_value(ws.design.one_sided, p.domain(), omegas);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        CHECK(std::abs(pv[i] - (p.lift_a * gv[i] + p.lift_b)) <= 1e-12 * (1.0 + std::abs(pv[i])));
    }
}

TEST_CASE("lift rejects designs whose spectrum dips negative")
{
    // An unlifted stopband-oscillating design is not an autocorrelation.
    const DesignSpec spec(6, BandSpec({{0.0, 0.3, BandRole::Pass}, {0.45, 1.0, BandRole::Stop}}),
                          1.0, CoeffDomain::Real);
    const auto ws = solve_weight(spec);
    CHECK_THROWS_AS(lift_to_autocorrelation(ws.design, 1.0, 0.0), FactorizationError);
}

TEST_CASE("figure-2 layout: P touches zero from above")
{
    const DesignSpec spec(20, BandSpec({{0.0, 0.30, BandRole::Pass}, {0.35, 1.0, BandRole::Stop}}),
                          0.5, CoeffDomain::Real);
    WeightSolution ws;
    const auto p = designed_autocorr(spec, ws);
    const auto report = validate_constraints(p, spec);
    CHECK(report.min_spectrum >= -1e-9 * p.p0());
    CHECK(report.min_spectrum <= 1e-6);
    CHECK(report.psd_ok);
}

TEST_CASE("validate_constraints: sect-III design passes with the paper deviations")
{
    const DesignSpec spec(26, BandSpec({{0.0, 0.36, BandRole::Pass}, {0.42, 1.0, BandRole::Stop}}),
                          3.0, CoeffDomain::Real);
    WeightSolution ws;
    const auto p = designed_autocorr(spec, ws);
    const auto report = validate_constraints(p, spec);
    CHECK(report.symmetric_ok);
    CHECK(report.psd_ok);
    CHECK(report.ratio_ok);
    CHECK(report.all_ok());
    CHECK(report.delta_p == Approx(0.12).epsilon(0.05));
    CHECK(report.delta_s == Approx(0.04).epsilon(0.05));

    // Constraint (i) as an equality: swing above one equals swing below.
    CHECK(report.passband_max_sqrt - 1.0 ==
          Approx(1.0 - report.passband_min_sqrt).epsilon(1e-6));
    // Constraint (iii) restated: stopband max over half-swing is 1/k_des.
    CHECK(report.delta_s / report.delta_p == Approx(1.0 / spec.k_des).epsilon(1e-4));
}

TEST_CASE("validate_constraints: degenerate impulse reports instead of crashing")
{
    const DesignSpec spec(0, BandSpec({{0.0, 0.3, BandRole::Pass}, {0.5, 1.0, BandRole::Stop}}),
                          1.0, CoeffDomain::Real);
    AutocorrSequence p;
    p.one_sided = {cdouble(0.25, 0.0)};
    p.source = impulse_design(0.25);
    const auto bad = validate_constraints(p, spec);
    CHECK_FALSE(bad.symmetric_ok);

    p.one_sided = {cdouble(1.0, 0.0)};
    const auto centered = validate_constraints(p, spec);
    CHECK(centered.symmetric_ok);
}

TEST_CASE("a broken lift is caught by the constraint report")
{
    const DesignSpec spec(10, BandSpec({{0.0, 0.32, BandRole::Pass}, {0.46, 1.0, BandRole::Stop}}),
                          2.0, CoeffDomain::Real);
    const auto ws = solve_weight(spec);
    const auto [a, b] = lift_coefficients(ws.k_star, spec.k_des, ws.design.delta_p);

    const auto good = validate_constraints(lift_to_autocorrelation(ws.design, a, b), spec);
    CHECK(good.all_ok());

    // Halving b sinks the spectrum minimum below zero (or breaks the
    // passband symmetry); either way the report flags it.
    AutocorrSequence wrong;
    wrong.one_sided = ws.design.one_sided;
    for (auto& c : wrong.one_sided) c *= a;
    wrong.one_sided[0] += b / 2.0;
    wrong.lift_a = a;
    wrong.lift_b = b / 2.0;
    wrong.source = ws.design;
    const auto bad = validate_constraints(wrong, spec);
    CHECK_FALSE(bad.all_ok());
}
