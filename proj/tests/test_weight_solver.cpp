#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "firmin/weight_solver.hpp"

using namespace firmin;
using doctest::Approx;

namespace {

DesignSpec lowpass_spec(int order, double pass_hi, double stop_lo, double k_des)
{
    return DesignSpec(order,
                      BandSpec({{0.0, pass_hi, BandRole::Pass}, {stop_lo, 1.0, BandRole::Stop}}),
                      k_des, CoeffDomain::Real);
}

}  // namespace

TEST_CASE("delta_s_target: exact rational values and asymptotics")
{
    CHECK(delta_s_target(24.0, 2.0) == Approx(0.04).epsilon(1e-15));
    CHECK(delta_s_target(300.0, 3.0) == Approx(72.0 / 91224.0).epsilon(1e-15));
    CHECK(delta_s_target(1e9, 2.0) < 1e-16);
    CHECK_THROWS_AS(delta_s_target(-1.0, 2.0), InvalidInput);
}

TEST_CASE("delta_p_target: paper value, lower-bound identity, monotonicity")
{
    CHECK(delta_p_target(9801.96, 2.0) == Approx(3.2646e-3).epsilon(1e-4));
    CHECK(std::abs(delta_p_target(24.0, 2.0) - 0.96) <= 1e-12);
    CHECK(delta_p_target(300.0, 3.0) == Approx(0.23678).epsilon(1e-4));

    // Strictly decreasing above the lower bound; delta_s too.
    double prev_p = 2.0, prev_s = 2.0;
    for (double k = k_lower_bound(2.0); k < 1e6; k *= 1.7) {
        const double dp = delta_p_target(k, 2.0);
        const double ds = delta_s_target(k, 2.0);
        CHECK(dp > 0.0);
        CHECK(ds > 0.0);
        CHECK(dp < prev_p);
        CHECK(ds < prev_s);
        prev_p = dp;
        prev_s = ds;
    }
}

TEST_CASE("k_lower_bound")
{
    CHECK(k_lower_bound(2.0) == Approx(24.0));
    CHECK(k_lower_bound(3.0) == Approx(48.0));
    CHECK(k_lower_bound(1.0) == Approx(8.0));
}

TEST_CASE("lift_coefficients: both formulas agree")
{
    const auto [a, b] = lift_coefficients(300.0, 3.0, 0.23678);
    CHECK(b == Approx(8.0e-4).epsilon(1e-12));
    CHECK(a == Approx(1.0136).epsilon(1e-3));
    CHECK(a == Approx(1.0 + 0.12 * 0.12 - 0.04 * 0.04 / 2.0).epsilon(1e-4));

    // K -> infinity: (a, b) -> (1, 0).
    const double k_big = 1e9;
    const auto [a_inf, b_inf] = lift_coefficients(k_big, 3.0, delta_p_target(k_big, 3.0));
    CHECK(a_inf == Approx(1.0).epsilon(1e-6));
    CHECK(b_inf == Approx(0.0).epsilon(1e-12));

    const auto [a2, b2] = lift_coefficients(9801.96, 2.0, delta_p_target(9801.96, 2.0));
    CHECK(b2 == Approx(3.3307e-7).epsilon(1e-3));
    CHECK(a2 > 1.0);

    CHECK_THROWS_AS(lift_coefficients(300.0, 3.0, 0.0), InvalidInput);
}

TEST_CASE("solve_weight: sect-III spec lands near K = 300")
{
    const auto spec = lowpass_spec(26, 0.36, 0.42, 3.0);
    const auto ws = solve_weight(spec);
    CHECK(ws.k_star == Approx(300.0).epsilon(0.02));
    CHECK(ws.residual <= 1e-8);
    CHECK(ws.k_star >= k_lower_bound(3.0));

    // Converged relations: delta_s = 4 k_des / K*, delta_p = k_des delta_s,
    // and their sum stays below one.
    const double ds = 4.0 * spec.k_des / ws.k_star;
    const double dp = spec.k_des * ds;
    CHECK(dp + ds <= 1.0);

    // Filter- and autocorrelation-domain stopband deviations are tied by
    // the lift: ds^2 = a * Delta_S + b.
    const auto [a, b] = lift_coefficients(ws.k_star, spec.k_des, ws.design.delta_p);
    CHECK(ds * ds ==
          Approx(a * delta_s_target(ws.k_star, spec.k_des) + b).epsilon(1e-6));

    // Both lift formulas agree at convergence.
    const double a_alt = 1.0 + dp * dp - ds * ds / 2.0;
    CHECK(a == Approx(a_alt).epsilon(1e-6));
    CHECK(b == Approx(ds * ds / 2.0).epsilon(1e-6));
}

TEST_CASE("solve_weight matches a brute-force scan on a tiny spec")
{
    const auto spec = lowpass_spec(4, 0.3, 0.45, 1.5);
    const auto ws = solve_weight(spec);
    CHECK(ws.residual <= 1e-8);

    // Geometric scan for the sign change, then bisect to high precision.
    const BasisKind basis = BasisKind::cosine(spec.order);
    const FrequencyGrid grid = build_grid(spec.bands, basis.size(), 16);
    auto f = [&](double k) {
        const auto d = design_zero_phase(spec.bands, k, basis, grid);
        return d.delta_p - delta_p_target(k, spec.k_des);
    };
    double lo = k_lower_bound(spec.k_des);
    double hi = lo;
    REQUIRE(f(lo) < 0.0);
    for (double k = lo * 1.15;; k *= 1.15) {
        REQUIRE(k < 1e9);
        if (f(k) > 0.0) {
            hi = k;
            break;
        }
        lo = k;
    }
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    CHECK(ws.k_star == Approx(0.5 * (lo + hi)).epsilon(1e-6));

    // Bracket history bounds the answer.
    REQUIRE(!ws.bracket_history.empty());
    for (const auto& step : ws.bracket_history) {
        CHECK(step.k >= k_lower_bound(spec.k_des));
    }
}

TEST_CASE("solve_weight: secant acceleration agrees with plain bisection")
{
    const auto spec = lowpass_spec(8, 0.35, 0.5, 2.0);
    WeightSolverOptions plain;
    WeightSolverOptions accel;
    accel.secant_accel = true;
    const auto a = solve_weight(spec, plain);
    const auto b = solve_weight(spec, accel);
    CHECK(a.k_star == Approx(b.k_star).epsilon(1e-6));
    CHECK(b.bracket_history.size() <= a.bracket_history.size());
}
