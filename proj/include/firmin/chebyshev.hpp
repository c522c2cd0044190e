#pragma once

#include <span>
#include <vector>

#include "firmin/types.hpp"

namespace firmin {

// Approximation basis for zero-phase responses: {cos(n w), n=0..M}, or
// additionally {sin(n w), n=1..M} when coefficients may be complex.
class BasisKind {
public:
    enum class Kind { CosineOnly, CosineAndSine };

    static BasisKind cosine(int m) { return BasisKind(Kind::CosineOnly, m); }
    static BasisKind cosine_and_sine(int m) { return BasisKind(Kind::CosineAndSine, m); }

    Kind kind() const { return kind_; }
    int m() const { return m_; }
    int size() const { return kind_ == Kind::CosineOnly ? m_ + 1 : 2 * m_ + 1; }
    int references() const { return size() + 1; }  // M+2 or 2M+2
    CoeffDomain domain() const
    {
        return kind_ == Kind::CosineOnly ? CoeffDomain::Real : CoeffDomain::Complex;
    }

private:
    BasisKind(Kind kind, int m) : kind_(kind), m_(m)
    {
        if (m < 0) throw InvalidInput("BasisKind: negative harmonic count");
    }
    Kind kind_;
    int m_;
};

// Converged weighted-minimax zero-phase design. one_sided uses the
// zero_phase_value convention (c[0] real; for the cosine basis all
// entries real).
struct ZeroPhaseDesign {
    std::vector<cdouble> one_sided;
    BasisKind basis = BasisKind::cosine(0);
    double applied_weight = 1.0;         // K used in W(w)
    double delta_p = 0.0;                // attained max weighted error
    std::vector<double> extremal_freqs;  // alternation frequencies, sorted
    int iterations = 0;
};

struct RemezOptions {
    int max_iterations = 100;
    double delta_rel_tol = 1e-12;   // relative change of delta between iterations
    double spread_rel_tol = 1e-8;   // extremal magnitude spread relative to delta
    bool polish = true;             // off-grid refinement of the reference set
};

// Dense design/evaluation grid: about density * basis_size points,
// distributed over the bands proportionally to band measure with
// Chebyshev-node spacing inside each band; every band edge included.
FrequencyGrid build_grid(const BandSpec& bands, int basis_size, int density);

// Coefficients and signed deviation solving the interpolation subproblem
//   W(w_i) (G(w_i) - D(w_i)) = (-1)^i delta
// exactly at the given reference frequencies.
struct ReferenceSolution {
    std::vector<cdouble> one_sided;
    double delta = 0.0;
};

ReferenceSolution solve_reference_system(std::span<const double> refs_rad, const BandSpec& bands,
                                         double k, BasisKind basis);

// One multiple-exchange step: local extrema of the current weighted error
// on the grid, reduced to an alternating set of basis.references() points
// containing the global maximum.
std::vector<double> exchange_step(const ZeroPhaseDesign& design, const FrequencyGrid& grid);

// Weighted-minimax (equiripple) approximation of D(w) with weight 1 on
// passbands and k on stopbands.
ZeroPhaseDesign design_zero_phase(const BandSpec& bands, double k, BasisKind basis,
                                  const FrequencyGrid& grid, const RemezOptions& opts = {});

}  // namespace firmin
