#pragma once

#include <fftw3.h>

#include <complex>
#include <random>
#include <vector>

#include "firmin/types.hpp"

namespace firmin::testing {

// Zero-padded DFT oracle, length L, via FFTW: X[k] = sum x[n] e^{-j 2 pi k n / L}.
// Kept separate from the library's Horner evaluation on purpose.
inline std::vector<cdouble> dft_oracle(const std::vector<cdouble>& x, std::size_t length)
{
    std::vector<cdouble> buf(length, 0.0);
    std::copy(x.begin(), x.end(), buf.begin());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(length),
                                      reinterpret_cast<fftw_complex*>(buf.data()),
                                      reinterpret_cast<fftw_complex*>(buf.data()),
                                      FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    return buf;
}

inline std::vector<cdouble> idft_oracle(const std::vector<cdouble>& x)
{
    std::vector<cdouble> buf(x);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(buf.size()),
                                      reinterpret_cast<fftw_complex*>(buf.data()),
                                      reinterpret_cast<fftw_complex*>(buf.data()),
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    for (auto& v : buf) v /= static_cast<double>(buf.size());
    return buf;
}

inline std::vector<double> uniform_omegas(double lo, double hi, std::size_t n)
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

inline std::vector<cdouble> random_complex_taps(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<cdouble> taps(n);
    for (auto& t : taps) t = cdouble(dist(rng), dist(rng));
    return taps;
}

inline std::vector<double> random_real_taps(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> taps(n);
    for (auto& t : taps) t = dist(rng);
    return taps;
}

}  // namespace firmin::testing
