#pragma once

#include <cstdint>
#include <vector>

#include "firmin/autocorr.hpp"
#include "firmin/types.hpp"

namespace firmin {

// Zeros of z^N P(z), grouped into (z, 1/conj(z)) pairs. On-circle zeros
// appear with even multiplicity and pair with their own duplicate.
struct ZeroPair {
    cdouble inside;    // |inside| <= |outside|
    cdouble outside;   // 1/conj(inside) up to pairing tolerance
    bool on_circle = false;
};

struct ZeroSet {
    std::vector<ZeroPair> pairs;  // sorted by angle of the inside zero
    CoeffDomain domain = CoeffDomain::Real;
    double p0 = 0.0;              // retained for gain recovery
};

// Which zero of each pair goes into the filter. Explicit selects by
// bitmask: bit i set picks the outside member of pair i (pairs beyond 64
// are not addressable and fall back to the inside member).
struct PhaseSelection {
    enum class Kind { Minimum, Maximum, Explicit };
    Kind kind = Kind::Minimum;
    std::uint64_t mask = 0;

    static PhaseSelection minimum() { return {Kind::Minimum, 0}; }
    static PhaseSelection maximum() { return {Kind::Maximum, 0}; }
    static PhaseSelection explicit_mask(std::uint64_t mask) { return {Kind::Explicit, mask}; }
};

struct FactorOptions {
    double pairing_tol = 1e-7;    // relative reciprocal-conjugate matching
    int root_order_limit = 128;   // factor_roots refuses above this order
};

// Roots of the degree-2N Laurent polynomial z^N P(z), paired by
// reciprocal-conjugate matching (balanced companion-matrix eigenvalues).
ZeroSet factor_roots(const AutocorrSequence& p, const FactorOptions& opts = {});

// Builds h from the selected zeros, scaled by a positive real gain so
// that autocorrelation_of(h) reproduces p. The leading coefficient of h
// is real and positive.
FirFilter select_phase(const ZeroSet& zeros, const PhaseSelection& sel);

struct CepstralOptions {
    int fft_len = 0;             // 0: smallest power of two >= 64 (2N+1)
    double floor_rel = 1e-9;     // spectral floor for the logarithm, relative to p[0]
    double residual_tol = 1e-6;  // round-trip residual, relative to p[0]
    int max_retries = 2;         // fft_len doublings on residual failure
};

// Minimum-phase factor via the real-cepstrum construction
// (log-spectrum -> causal folding -> exponentiation); the practical route
// for orders where polynomial root finding is off the table.
FirFilter minimum_phase_cepstral(const AutocorrSequence& p, const CepstralOptions& opts = {});

struct FactorizationReport {
    double residual = 0.0;        // max |autocorrelation_of(h) - p|
    bool residual_ok = false;
    bool phase_class_ok = true;   // zeros of h agree with its provenance tag
    double worst_zero_modulus = 0.0;
};

FactorizationReport verify_factorization(const FirFilter& h, const AutocorrSequence& p, double tol);

}  // namespace firmin
