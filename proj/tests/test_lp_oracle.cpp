#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "firmin/chebyshev.hpp"
#include "firmin/lp_oracle.hpp"

using namespace firmin;
using doctest::Approx;

namespace {

struct RandomSpec {
    BandSpec bands;
    BasisKind basis;
    double k;
};

RandomSpec random_spec(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> mdist(0, 8);
    const bool complex_basis = u(rng) < 0.3;
    const int m = mdist(rng);
    const double k = 0.5 + 4.5 * u(rng);

    if (!complex_basis) {
        const double pass_hi = 0.15 + 0.3 * u(rng);
        const double stop_lo = pass_hi + 0.1 + 0.2 * u(rng);
        const bool pass_first = u(rng) < 0.5;
        BandSpec bands({{0.0, pass_hi, pass_first ? BandRole::Pass : BandRole::Stop},
                        {stop_lo, 1.0, pass_first ? BandRole::Stop : BandRole::Pass}});
        return {std::move(bands), BasisKind::cosine(m), k};
    }
    const double a = -0.9 + 0.2 * u(rng);
    const double b = a + 0.3 + 0.2 * u(rng);
    const double c = b + 0.15 + 0.1 * u(rng);
    const double d = std::min(0.95, c + 0.3 + 0.2 * u(rng));
    BandSpec bands({{a, b, BandRole::Stop}, {c, d, BandRole::Pass}});
    return {std::move(bands), BasisKind::cosine_and_sine(std::max(1, m / 2)), k};
}

}  // namespace

TEST_CASE("lp oracle: analytic single-constant case")
{
    const BandSpec bands({{0.0, 0.4, BandRole::Pass}, {0.55, 1.0, BandRole::Stop}});
    const auto grid = build_grid(bands, 4, 16);
    const auto lp = lp_oracle_design(bands, 1.0, BasisKind::cosine(0), grid);
    CHECK(lp.one_sided[0].real() == Approx(0.5).epsilon(1e-9));
    CHECK(lp.delta == Approx(0.5).epsilon(1e-9));
}

TEST_CASE("lp oracle matches the exchange design on random small specs")
{
    std::mt19937_64 rng(2024);
    RemezOptions grid_only;  // the oracle solves the discrete problem; compare like for like
    grid_only.polish = false;
    int done = 0;
    while (done < 20) {
        const auto spec = random_spec(rng);
        const auto grid = build_grid(spec.bands, spec.basis.size(), 16);
        const auto remez = design_zero_phase(spec.bands, spec.k, spec.basis, grid, grid_only);
        const auto lp = lp_oracle_design(spec.bands, spec.k, spec.basis, grid);

        CHECK(std::abs(remez.delta_p - lp.delta) <= 1e-7 * (1.0 + lp.delta));
        REQUIRE(remez.one_sided.size() == lp.one_sided.size());
        for (std::size_t n = 0; n < lp.one_sided.size(); ++n) {
            CHECK(std::abs(remez.one_sided[n] - lp.one_sided[n]) <= 1e-6);
        }
        ++done;
    }
}

TEST_CASE("lp oracle preconditions")
{
    const BandSpec bands({{0.0, 0.4, BandRole::Pass}, {0.55, 1.0, BandRole::Stop}});
    const auto big_grid = build_grid(bands, 45, 48);  // > 2000 points
    CHECK(big_grid.size() > 2000);
    CHECK_THROWS_AS(lp_oracle_design(bands, 1.0, BasisKind::cosine(0), big_grid), InvalidInput);

    const auto grid = build_grid(bands, 4, 16);
    CHECK_THROWS_AS(lp_oracle_design(bands, 1.0, BasisKind::cosine(41), grid), InvalidInput);
}
