#pragma once

#include <map>
#include <string>

#include "firmin/autocorr.hpp"
#include "firmin/certificate.hpp"
#include "firmin/spectral_factor.hpp"
#include "firmin/types.hpp"
#include "firmin/weight_solver.hpp"

namespace firmin {

enum class FactorizationMethod { Roots, Cepstral, Auto };

struct DesignOptions {
    int grid_density = 16;
    double weight_tol = 1e-8;
    int weight_max_iter = 60;
    bool secant_accel = false;
    FactorizationMethod factorization = FactorizationMethod::Auto;
    FactorOptions factor;      // root-method settings
    CepstralOptions cepstral;  // cepstral settings
    LiftOptions lift;
    CertifyOptions certify;
};

struct DesignResult {
    FirFilter filter;
    AutocorrSequence autocorr;
    WeightSolution weight_solution;
    Certificate certificate;
    std::map<std::string, double> timings_ms;  // per stage
};

// End-to-end design: solve for K, design the zero-phase intermediate,
// lift it to an autocorrelation, factor with the requested phase, and
// self-certify. A returned result always carries an optimal certificate.
DesignResult design_filter(const DesignSpec& spec, const PhaseSelection& phase,
                           const DesignOptions& opts = {});

}  // namespace firmin
