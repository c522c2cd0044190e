#include "firmin/spectral_factor.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <span>
#include <string>

#include "firmin/spectrum.hpp"

namespace firmin {

namespace {

// --- polynomial roots ------------------------------------------------------

// Parlett-Reinsch balancing (radix-2, no permutations); companion
// matrices benefit substantially before the QR eigensolver runs.
void balance_in_place(Eigen::MatrixXcd& a)
{
    const Eigen::Index n = a.rows();
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    bool done = false;
    for (int sweep = 0; sweep < 100 && !done; ++sweep) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                const double ginv = 1.0 / f;
                a.row(i) *= ginv;
                a.col(i) *= f;
            }
        }
    }
}

// Roots of sum_j coeffs[j] z^j (leading coefficient nonzero).
std::vector<cdouble> polynomial_roots(std::span<const cdouble> coeffs)
{
    const std::size_t degree = coeffs.size() - 1;
    if (degree == 0) return {};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(degree),
                                                        static_cast<Eigen::Index>(degree));
    const cdouble lead = coeffs[degree];
    for (std::size_t j = 0; j + 1 < degree; ++j) {
        companion(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(j)) = 1.0;
    }
    for (std::size_t j = 0; j < degree; ++j) {
        companion(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(degree - 1)) =
            -coeffs[j] / lead;
    }
    balance_in_place(companion);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw FactorizationError("polynomial_roots: eigenvalue iteration failed");
    }
    std::vector<cdouble> roots(degree);
    for (std::size_t j = 0; j < degree; ++j) {
        roots[j] = solver.eigenvalues()(static_cast<Eigen::Index>(j));
    }
    return roots;
}

std::vector<cdouble> filter_zeros(const FirFilter& h)
{
    // h(z) = z^-N sum h[n] z^{N-n}; zeros are the roots of the reversed
    // coefficient polynomial.
    const auto& c = h.coeffs();
    std::vector<cdouble> poly(c.rbegin(), c.rend());
    while (poly.size() > 1 && std::abs(poly.back()) == 0.0) poly.pop_back();
    return polynomial_roots(poly);
}

double arg_key(const cdouble& z)
{
    double a = std::arg(z);
    if (a >= pi - 1e-15) a -= 2.0 * pi;  // fold +pi onto -pi for a stable sort
    return a;
}

// --- cepstral machinery ----------------------------------------------------

std::mutex fftw_plan_mutex;

class Fft {
public:
    explicit Fft(int n) : n_(n)
    {
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(n)));
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Fft()
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    // In-place DFT of `data` (length n), forward: sum x[n] e^{-j 2 pi k n / N}.
    void forward(std::vector<cdouble>& data) { execute(data, fwd_, 1.0); }
    // Unitary inverse: (1/N) sum X[k] e^{+j 2 pi k n / N}.
    void inverse(std::vector<cdouble>& data) { execute(data, bwd_, 1.0 / n_); }

private:
    void execute(std::vector<cdouble>& data, fftw_plan plan, double scale)
    {
        auto* b = reinterpret_cast<cdouble*>(buf_);
        std::copy(data.begin(), data.end(), b);
        fftw_execute(plan);
        for (int i = 0; i < n_; ++i) data[static_cast<std::size_t>(i)] = b[i] * scale;
    }

    int n_;
    fftw_complex* buf_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

int next_pow2(int n)
{
    int p = 1;
    while (p < n) p *= 2;
    return p;
}

FirFilter finish_min_phase(std::vector<cdouble> taps, CoeffDomain domain)
{
    // Leading-coefficient convention: real and positive.
    if (domain == CoeffDomain::Real) {
        std::vector<cdouble> realified(taps.size());
        for (std::size_t i = 0; i < taps.size(); ++i) realified[i] = cdouble(taps[i].real(), 0.0);
        return FirFilter(std::move(realified), CoeffDomain::Real, PhaseTag::Minimum);
    }
    cdouble lead = taps[0];
    if (std::abs(lead) > 0.0) {
        const cdouble rot = std::conj(lead) / std::abs(lead);
        for (auto& t : taps) t *= rot;
    }
    taps[0] = cdouble(taps[0].real(), 0.0);
    return FirFilter(std::move(taps), CoeffDomain::Complex, PhaseTag::Minimum);
}

double roundtrip_residual(const FirFilter& h, const AutocorrSequence& p)
{
    const auto r = autocorrelation_of(h);
    const std::size_t n = std::max(r.size(), p.one_sided.size());
    double worst = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const cdouble a = m < r.size() ? r[m] : cdouble(0.0);
        const cdouble b = m < p.one_sided.size() ? p.one_sided[m] : cdouble(0.0);
        worst = std::max(worst, std::abs(a - b));
    }
    return worst;
}

}  // namespace

// Groups one root population into (z, 1/conj z) pairs by greedy
// mutual-nearest matching, processed outside-in. A split double zero on
// the circle matches its cluster sibling regardless of how the split
// happened (1/conj of an on-circle point is the point itself), so no
// parity-sensitive on/off-circle classification is needed.
void pair_population(std::vector<cdouble> roots, double pairing_tol, std::vector<ZeroPair>& out)
{
    if (roots.size() % 2 != 0) {
        throw FactorizationError("factor_roots: odd root population");
    }
    std::sort(roots.begin(), roots.end(), [](const cdouble& a, const cdouble& b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma > mb;
        return arg_key(a) < arg_key(b);
    });
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        const cdouble target = 1.0 / std::conj(roots[i]);
        std::size_t best = roots.size();
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (used[j]) continue;
            const double dist = std::abs(roots[j] - target);
            if (dist < best_dist) {
                best_dist = dist;
                best = j;
            }
        }
        // Fixed sanity bound: pairing_tol governs the on-circle flag, and
        // the round-trip residual downstream is the authoritative
        // accuracy check; root perturbations grow with degree.
        const double scale = std::max(1.0, std::abs(target));
        if (best == roots.size() || best_dist > 1e-3 * scale) {
            throw FactorizationError("factor_roots: zero at (" + std::to_string(roots[i].real()) +
                                     ", " + std::to_string(roots[i].imag()) +
                                     ") has no reciprocal-conjugate partner within tolerance");
        }
        used[best] = true;
        const cdouble a = roots[i], b = roots[best];
        ZeroPair pair;
        const bool a_in = std::abs(a) <= std::abs(b);
        pair.inside = a_in ? a : b;
        pair.outside = a_in ? b : a;
        pair.on_circle = std::abs(std::abs(a) - 1.0) <= pairing_tol &&
                         std::abs(std::abs(b) - 1.0) <= pairing_tol;
        if (pair.on_circle) {
            // The members are the two halves of a split double zero; their
            // unit-normalized mean cancels the split to first order.
            cdouble mean = a + b;
            if (std::abs(mean) > 0.0) {
                mean /= std::abs(mean);
                if (std::abs(mean.imag()) <= pairing_tol) mean = cdouble(mean.real(), 0.0);
                pair.inside = mean;
                pair.outside = mean;
            }
        }
        out.push_back(pair);
    }
}

ZeroSet factor_roots(const AutocorrSequence& p, const FactorOptions& opts)
{
    ZeroSet out;
    out.domain = p.domain();
    out.p0 = p.p0();
    if (!(out.p0 > 0.0)) throw InvalidInput("factor_roots: p[0] must be positive");

    // Trailing zero lags shrink the effective order (zeros at 0 and
    // infinity pair off trivially).
    int n_eff = p.order();
    while (n_eff > 0 && std::abs(p.one_sided[static_cast<std::size_t>(n_eff)]) == 0.0) --n_eff;
    if (n_eff == 0) return out;
    if (n_eff > opts.root_order_limit) {
        throw FactorizationError("factor_roots: order " + std::to_string(n_eff) +
                                 " above the root-method limit " +
                                 std::to_string(opts.root_order_limit) +
                                 "; use the cepstral method");
    }

    // q(z) = z^N P(z), degree 2N; q_j = p[N - j] with p[-m] = conj(p[m]).
    std::vector<cdouble> q(2 * static_cast<std::size_t>(n_eff) + 1);
    for (int j = 0; j <= 2 * n_eff; ++j) {
        const int n = n_eff - j;
        q[static_cast<std::size_t>(j)] =
            n >= 0 ? p.one_sided[static_cast<std::size_t>(n)]
                   : std::conj(p.one_sided[static_cast<std::size_t>(-n)]);
    }
    auto roots = polynomial_roots(q);

    if (p.domain() == CoeffDomain::Real) {
        // A real spectrum has a conjugate-symmetric zero multiset, but a
        // complex eigensolver does not return exact conjugate pairs, and
        // split double zeros can come back with mismatched split modes
        // above and below the axis. Symmetrize the multiset first:
        // average each upper root with its nearest lower conjugate and
        // snap near-axis roots onto the axis.
        std::vector<std::size_t> upper;
        std::vector<std::size_t> lower;
        for (std::size_t i = 0; i < roots.size(); ++i) {
            const double tol_im = 1e-9 * (1.0 + std::abs(roots[i]));
            if (roots[i].imag() > tol_im) {
                upper.push_back(i);
            } else if (roots[i].imag() < -tol_im) {
                lower.push_back(i);
            } else {
                roots[i] = cdouble(roots[i].real(), 0.0);
            }
        }
        if (upper.size() != lower.size()) {
            throw FactorizationError("factor_roots: conjugate symmetry lost in root computation");
        }
        std::vector<bool> taken(lower.size(), false);
        for (std::size_t ui : upper) {
            std::size_t best = lower.size();
            double best_dist = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < lower.size(); ++j) {
                if (taken[j]) continue;
                const double d = std::abs(std::conj(roots[lower[j]]) - roots[ui]);
                if (d < best_dist) {
                    best_dist = d;
                    best = j;
                }
            }
            taken[best] = true;
            const cdouble mean = 0.5 * (roots[ui] + std::conj(roots[lower[best]]));
            roots[ui] = mean;
            roots[lower[best]] = std::conj(mean);
        }
    }
    pair_population(std::move(roots), opts.pairing_tol, out.pairs);

    std::sort(out.pairs.begin(), out.pairs.end(), [](const ZeroPair& a, const ZeroPair& b) {
        const double ka = arg_key(a.inside), kb = arg_key(b.inside);
        if (ka != kb) return ka < kb;
        return std::abs(a.inside) < std::abs(b.inside);
    });
    return out;
}

FirFilter select_phase(const ZeroSet& zeros, const PhaseSelection& sel)
{
    if (!(zeros.p0 > 0.0)) throw InvalidInput("select_phase: gain not determinable (p[0] <= 0)");

    std::vector<cdouble> picked;
    picked.reserve(zeros.pairs.size());
    for (std::size_t i = 0; i < zeros.pairs.size(); ++i) {
        const auto& pair = zeros.pairs[i];
        bool take_outside = false;
        switch (sel.kind) {
        case PhaseSelection::Kind::Minimum: take_outside = false; break;
        case PhaseSelection::Kind::Maximum: take_outside = true; break;
        case PhaseSelection::Kind::Explicit:
            take_outside = i < 64 && ((sel.mask >> i) & 1u) != 0;
            break;
        }
        picked.push_back(take_outside ? pair.outside : pair.inside);
    }
    std::sort(picked.begin(), picked.end(), [](const cdouble& a, const cdouble& b) {
        const double ka = arg_key(a), kb = arg_key(b);
        if (ka != kb) return ka < kb;
        return std::abs(a) < std::abs(b);
    });

    std::vector<cdouble> taps{1.0};
    for (const auto& z : picked) {
        taps.push_back(0.0);
        for (std::size_t n = taps.size() - 1; n >= 1; --n) {
            taps[n] -= z * taps[n - 1];
        }
    }
    double energy = 0.0;
    for (const auto& t : taps) energy += std::norm(t);
    const double gain = std::sqrt(zeros.p0 / energy);
    for (auto& t : taps) t *= gain;

    PhaseTag tag = PhaseTag::Explicit;
    if (sel.kind == PhaseSelection::Kind::Minimum) tag = PhaseTag::Minimum;
    if (sel.kind == PhaseSelection::Kind::Maximum) tag = PhaseTag::Maximum;

    // A selection that stays conjugate-symmetric yields a real filter.
    if (zeros.domain == CoeffDomain::Real) {
        double max_imag = 0.0, max_abs = 0.0;
        for (const auto& t : taps) {
            max_imag = std::max(max_imag, std::abs(t.imag()));
            max_abs = std::max(max_abs, std::abs(t));
        }
        if (max_imag <= 1e-9 * std::max(1.0, max_abs)) {
            for (auto& t : taps) t = cdouble(t.real(), 0.0);
            return FirFilter(std::move(taps), CoeffDomain::Real, tag);
        }
    }
    return FirFilter(std::move(taps), CoeffDomain::Complex, tag);
}

FirFilter minimum_phase_cepstral(const AutocorrSequence& p, const CepstralOptions& opts)
{
    const double p0 = p.p0();
    if (!(p0 > 0.0)) throw InvalidInput("minimum_phase_cepstral: p[0] must be positive");
    const int n = p.order();
    const int min_len = next_pow2(4 * (2 * n + 1));
    int fft_len = opts.fft_len > 0 ? opts.fft_len : next_pow2(64 * (2 * n + 1));
    if (fft_len < min_len) {
        throw InvalidInput("minimum_phase_cepstral: fft_len below the oversampling floor " +
                           std::to_string(min_len));
    }

    const double floor = opts.floor_rel * p0;
    double last_residual = 0.0;
    for (int attempt = 0; attempt <= opts.max_retries; ++attempt, fft_len *= 2) {
        const std::size_t len = static_cast<std::size_t>(fft_len);
        Fft fft(fft_len);

        // P(w_k) from the zero-padded two-sided sequence.
        std::vector<cdouble> buf(len, 0.0);
        buf[0] = p.one_sided[0].real();
        for (int m = 1; m <= n; ++m) {
            buf[static_cast<std::size_t>(m)] = p.one_sided[static_cast<std::size_t>(m)];
            buf[len - static_cast<std::size_t>(m)] = std::conj(p.one_sided[static_cast<std::size_t>(m)]);
        }
        fft.forward(buf);

        // Floored log spectrum -> cepstrum.
        for (auto& v : buf) v = std::log(std::max(v.real(), floor));
        fft.inverse(buf);

        // Keep the causal part: the filter cepstrum is c[n] for n >= 1
        // and c[0]/2 at the origin.
        std::vector<cdouble> cep(len, 0.0);
        cep[0] = buf[0].real() / 2.0;
        for (std::size_t m = 1; m < len / 2; ++m) cep[m] = buf[m];
        cep[len / 2] = buf[len / 2] / 2.0;

        fft.forward(cep);
        for (auto& v : cep) v = std::exp(v);
        fft.inverse(cep);

        std::vector<cdouble> taps(cep.begin(), cep.begin() + n + 1);
        FirFilter h = finish_min_phase(std::move(taps), p.domain());

        last_residual = roundtrip_residual(h, p);
        if (last_residual <= opts.residual_tol * p0) return h;
    }
    throw FactorizationError("minimum_phase_cepstral: round-trip residual " +
                             std::to_string(last_residual) + " above " +
                             std::to_string(opts.residual_tol * p0) +
                             "; retry with a larger fft_len");
}

FactorizationReport verify_factorization(const FirFilter& h, const AutocorrSequence& p, double tol)
{
    FactorizationReport report;
    report.residual = roundtrip_residual(h, p);
    report.residual_ok = report.residual <= tol;

    if (h.order() >= 1 && h.order() <= 256 &&
        (h.provenance() == PhaseTag::Minimum || h.provenance() == PhaseTag::Maximum)) {
        const auto zeros = filter_zeros(h);
        double worst = h.provenance() == PhaseTag::Minimum ? 0.0
                                                           : std::numeric_limits<double>::infinity();
        for (const auto& z : zeros) {
            const double mod = std::abs(z);
            worst = h.provenance() == PhaseTag::Minimum ? std::max(worst, mod)
                                                        : std::min(worst, mod);
        }
        report.worst_zero_modulus = worst;
        report.phase_class_ok = h.provenance() == PhaseTag::Minimum ? worst <= 1.0 + 1e-6
                                                                    : worst >= 1.0 - 1e-6;
    }
    return report;
}

}  // namespace firmin
