#pragma once

#include <vector>

#include "firmin/chebyshev.hpp"
#include "firmin/types.hpp"

namespace firmin {

// Valid (nonnegative-spectrum) autocorrelation sequence obtained by
// scaling and shifting a zero-phase design: p[0] = a g[0] + b, p[m] = a g[m].
struct AutocorrSequence {
    std::vector<cdouble> one_sided;  // p[0..N], p[0] real
    double lift_a = 1.0;
    double lift_b = 0.0;
    ZeroPhaseDesign source;

    CoeffDomain domain() const { return source.basis.domain(); }
    double p0() const { return one_sided.empty() ? 0.0 : one_sided[0].real(); }
    int order() const { return static_cast<int>(one_sided.size()) - 1; }
};

struct LiftOptions {
    double eps_psd_rel = 1e-9;   // tolerated spectral negativity, relative to p[0]
    int validation_density = 64;  // points per basis function on the validation sweep
};

// p[n] = a g[n] + b delta[n]; validates P(w) = a G(w) + b >= -eps over a
// dense sweep of the whole frequency range (transition regions included).
AutocorrSequence lift_to_autocorrelation(const ZeroPhaseDesign& g, double a, double b,
                                         const LiftOptions& opts = {});

struct ConstraintTolerances {
    double symmetry_abs = 1e-4;   // |(max sqrtP - 1) - (1 - min sqrtP)| in the passband
    double ratio_abs = 1e-4;      // |delta_p/delta_s - k_des|
    double eps_psd_rel = 1e-9;    // allowed negativity of min P, relative to p[0]
};

// Report for the three design constraints: (i) passband sqrt(P) swings
// symmetrically about 1, (ii) min P is (numerically) zero, (iii) the
// deviation ratio equals k_des.
struct ConstraintReport {
    double passband_max_sqrt = 0.0;
    double passband_min_sqrt = 0.0;
    double delta_p = 0.0;        // passband half swing of sqrt(P)
    double delta_s = 0.0;        // stopband max of sqrt(P)
    double min_spectrum = 0.0;   // over the full range, not just the bands
    double ratio = 0.0;          // delta_p / delta_s
    bool symmetric_ok = false;   // (i)
    bool psd_ok = false;         // (ii)
    bool ratio_ok = false;       // (iii)
    bool all_ok() const { return symmetric_ok && psd_ok && ratio_ok; }
};

ConstraintReport validate_constraints(const AutocorrSequence& p, const DesignSpec& spec,
                                      const ConstraintTolerances& tol = {});

}  // namespace firmin
