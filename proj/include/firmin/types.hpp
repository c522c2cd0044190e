#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace firmin {

using cdouble = std::complex<double>;

inline constexpr double pi = std::numbers::pi_v<double>;

// Thrown when an argument violates a documented precondition.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when an iterative solver exhausts its budget. Carries the last
// deviation level reached so callers can report how close it got.
struct NonConvergence : std::runtime_error {
    NonConvergence(const std::string& what, int iterations_done, double last_deviation)
        : std::runtime_error(what), iterations(iterations_done), last_delta(last_deviation) {}
    int iterations = 0;
    double last_delta = 0.0;
};

// Thrown when recovering filter coefficients from an autocorrelation fails.
struct FactorizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a converged design fails its own certificate; signals a
// tolerance bug in this library rather than a caller error.
struct InternalInconsistency : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class CoeffDomain { Real, Complex };

enum class BandRole { Pass, Stop };

// One closed frequency interval with its ideal response value.
// Edges are in units of pi: 0.36 means 0.36*pi rad.
struct BandInterval {
    double lo_pi = 0.0;
    double hi_pi = 0.0;
    BandRole role = BandRole::Pass;

    double lo_rad() const { return lo_pi * pi; }
    double hi_rad() const { return hi_pi * pi; }
    double measure_rad() const { return hi_rad() - lo_rad(); }
    double desired() const { return role == BandRole::Pass ? 1.0 : 0.0; }
};

// Pass/stop band layout. Intervals are closed, sorted, pairwise disjoint,
// and live in (-1, 1] (units of pi). At least one passband and one stopband.
class BandSpec {
public:
    explicit BandSpec(std::vector<BandInterval> intervals);

    const std::vector<BandInterval>& intervals() const { return intervals_; }
    std::size_t size() const { return intervals_.size(); }

    double min_edge_pi() const { return intervals_.front().lo_pi; }
    double max_edge_pi() const { return intervals_.back().hi_pi; }
    double total_measure_rad() const;

    // Index of the interval containing omega (radians), or -1 if omega
    // falls in a transition region.
    int interval_index(double omega_rad) const;
    bool contains(double omega_rad) const { return interval_index(omega_rad) >= 0; }

    // D(omega): 1 on passbands, 0 on stopbands. omega must lie in a band.
    double desired_at(double omega_rad) const;
    // W(omega; k): 1 on passbands, k on stopbands. omega must lie in a band.
    double weight_at(double omega_rad, double k) const;

private:
    std::vector<BandInterval> intervals_;
};

// Complete design problem: filter order, band layout, desired
// passband/stopband deviation ratio, and coefficient domain.
struct DesignSpec {
    int order = 0;                          // N; the filter has N+1 taps
    BandSpec bands;
    double k_des = 1.0;
    CoeffDomain domain = CoeffDomain::Real;

    DesignSpec(int order_n, BandSpec band_spec, double k_desired, CoeffDomain coeff_domain);
};

enum class PhaseTag { Unknown, Minimum, Maximum, Explicit };

// FIR filter h[0..N]. Coefficients are stored as complex; for
// CoeffDomain::Real every imaginary part is exactly zero. The order is
// nominal: trailing zero taps are allowed and still count toward N.
class FirFilter {
public:
    FirFilter(std::vector<cdouble> coeffs, CoeffDomain domain, PhaseTag provenance = PhaseTag::Unknown);

    static FirFilter from_real(std::vector<double> coeffs, PhaseTag provenance = PhaseTag::Unknown);

    const std::vector<cdouble>& coeffs() const { return coeffs_; }
    CoeffDomain domain() const { return domain_; }
    PhaseTag provenance() const { return provenance_; }
    int order() const { return static_cast<int>(coeffs_.size()) - 1; }

    std::vector<double> real_coeffs() const;  // requires Real domain

private:
    std::vector<cdouble> coeffs_;
    CoeffDomain domain_;
    PhaseTag provenance_;
};

// Dense evaluation grid. Frequencies are radians, strictly increasing,
// every point inside some band and every band edge present exactly once.
class FrequencyGrid {
public:
    struct Segment {
        std::size_t begin = 0;  // half-open [begin, end) point range
        std::size_t end = 0;
        int band = -1;
        BandRole role = BandRole::Pass;
    };

    FrequencyGrid(std::vector<double> omegas_rad, std::vector<int> band_index, const BandSpec& bands);

    std::size_t size() const { return omegas_.size(); }
    const std::vector<double>& omegas() const { return omegas_; }
    double omega(std::size_t i) const { return omegas_[i]; }
    int band_index(std::size_t i) const { return band_index_[i]; }
    BandRole role(std::size_t i) const { return roles_[i]; }
    const std::vector<Segment>& segments() const { return segments_; }

private:
    std::vector<double> omegas_;
    std::vector<int> band_index_;
    std::vector<BandRole> roles_;
    std::vector<Segment> segments_;
};

}  // namespace firmin
