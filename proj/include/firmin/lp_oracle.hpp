#pragma once

#include "firmin/chebyshev.hpp"
#include "firmin/types.hpp"

namespace firmin {

struct LpOracleResult {
    std::vector<cdouble> one_sided;  // zero_phase_value convention
    double delta = 0.0;              // attained minimax deviation
};

// Independent test oracle: solves
//   min delta  s.t.  |W(w_i) (G(w_i) - D(w_i))| <= delta  for every grid point
// as a linear program over the basis coefficients, via a two-phase revised
// simplex on the dual. Verifies its own KKT residual before returning.
// Deliberately shares no code with the Remez exchange path.
LpOracleResult lp_oracle_design(const BandSpec& bands, double k, BasisKind basis,
                                const FrequencyGrid& grid);

}  // namespace firmin
