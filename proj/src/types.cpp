#include "firmin/types.hpp"

#include <algorithm>
#include <cmath>

namespace firmin {

namespace {

constexpr double kEdgeSlack = 1e-12;  // tolerance when testing band membership

}  // namespace

BandSpec::BandSpec(std::vector<BandInterval> intervals) : intervals_(std::move(intervals)) {
    if (intervals_.empty()) {
        throw InvalidInput("BandSpec: no intervals");
    }
    bool has_pass = false;
    bool has_stop = false;
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        const auto& b = intervals_[i];
        if (!(b.lo_pi <= b.hi_pi)) {
            throw InvalidInput("BandSpec: interval with lo > hi");
        }
        if (b.lo_pi <= -1.0 || b.hi_pi > 1.0) {
            throw InvalidInput("BandSpec: interval outside (-1, 1] (units of pi)");
        }
        if (i > 0 && !(intervals_[i - 1].hi_pi < b.lo_pi)) {
            throw InvalidInput("BandSpec: intervals must be sorted and disjoint");
        }
        (b.role == BandRole::Pass ? has_pass : has_stop) = true;
    }
    if (!has_pass || !has_stop) {
        throw InvalidInput("BandSpec: need at least one passband and one stopband");
    }
}

double BandSpec::total_measure_rad() const {
    double total = 0.0;
    for (const auto& b : intervals_) total += b.measure_rad();
    return total;
}

int BandSpec::interval_index(double omega_rad) const {
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        const auto& b = intervals_[i];
        if (omega_rad >= b.lo_rad() - kEdgeSlack && omega_rad <= b.hi_rad() + kEdgeSlack) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

double BandSpec::desired_at(double omega_rad) const {
    const int i = interval_index(omega_rad);
    if (i < 0) throw InvalidInput("BandSpec: frequency outside every band");
    return intervals_[static_cast<std::size_t>(i)].desired();
}

double BandSpec::weight_at(double omega_rad, double k) const {
    const int i = interval_index(omega_rad);
    if (i < 0) throw InvalidInput("BandSpec: frequency outside every band");
    return intervals_[static_cast<std::size_t>(i)].role == BandRole::Pass ? 1.0 : k;
}

DesignSpec::DesignSpec(int order_n, BandSpec band_spec, double k_desired, CoeffDomain coeff_domain)
    : order(order_n), bands(std::move(band_spec)), k_des(k_desired), domain(coeff_domain) {
    if (order < 0) throw InvalidInput("DesignSpec: order must be >= 0");
    if (!(k_des > 0.0)) throw InvalidInput("DesignSpec: k_des must be positive");
    if (domain == CoeffDomain::Real && bands.min_edge_pi() < 0.0) {
        throw InvalidInput("DesignSpec: real-coefficient bands must lie in [0, 1] (units of pi)");
    }
}

FirFilter::FirFilter(std::vector<cdouble> coeffs, CoeffDomain domain, PhaseTag provenance)
    : coeffs_(std::move(coeffs)), domain_(domain), provenance_(provenance) {
    if (coeffs_.empty()) {
        throw InvalidInput("FirFilter: empty coefficient vector");
    }
    if (domain_ == CoeffDomain::Real) {
        for (const auto& c : coeffs_) {
            if (c.imag() != 0.0) {
                throw InvalidInput("FirFilter: real-domain filter with nonzero imaginary part");
            }
        }
    }
}

FirFilter FirFilter::from_real(std::vector<double> coeffs, PhaseTag provenance) {
    std::vector<cdouble> c(coeffs.begin(), coeffs.end());
    return FirFilter(std::move(c), CoeffDomain::Real, provenance);
}

std::vector<double> FirFilter::real_coeffs() const {
    if (domain_ != CoeffDomain::Real) {
        throw InvalidInput("FirFilter: real_coeffs on a complex-domain filter");
    }
    std::vector<double> out(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = coeffs_[i].real();
    return out;
}

FrequencyGrid::FrequencyGrid(std::vector<double> omegas_rad, std::vector<int> band_index,
                             const BandSpec& bands)
    : omegas_(std::move(omegas_rad)), band_index_(std::move(band_index)) {
    if (omegas_.empty()) throw InvalidInput("FrequencyGrid: empty");
    if (omegas_.size() != band_index_.size()) {
        throw InvalidInput("FrequencyGrid: omega/band tag size mismatch");
    }
    const auto& bs = bands.intervals();
    roles_.resize(omegas_.size());
    for (std::size_t i = 0; i < omegas_.size(); ++i) {
        if (i > 0 && !(omegas_[i - 1] < omegas_[i])) {
            throw InvalidInput("FrequencyGrid: frequencies must be strictly increasing");
        }
        const int b = band_index_[i];
        if (b < 0 || b >= static_cast<int>(bs.size())) {
            throw InvalidInput("FrequencyGrid: band index out of range");
        }
        const auto& band = bs[static_cast<std::size_t>(b)];
        if (omegas_[i] < band.lo_rad() - kEdgeSlack || omegas_[i] > band.hi_rad() + kEdgeSlack) {
            throw InvalidInput("FrequencyGrid: point outside its band");
        }
        roles_[i] = band.role;
    }
    // Every band edge must appear exactly once. Strict monotonicity already
    // rules out duplicates, so presence is the remaining check.
    for (const auto& band : bs) {
        for (double edge : {band.lo_rad(), band.hi_rad()}) {
            auto it = std::lower_bound(omegas_.begin(), omegas_.end(), edge - kEdgeSlack);
            if (it == omegas_.end() || std::abs(*it - edge) > kEdgeSlack) {
                throw InvalidInput("FrequencyGrid: missing band edge");
            }
        }
    }
    std::size_t start = 0;
    for (std::size_t i = 1; i <= omegas_.size(); ++i) {
        if (i == omegas_.size() || band_index_[i] != band_index_[start]) {
            segments_.push_back(Segment{start, i, band_index_[start], roles_[start]});
            start = i;
        }
    }
}

}  // namespace firmin
