#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "firmin/spectral_factor.hpp"
#include "firmin/types.hpp"

namespace firmin {

// Coefficient text format: header line `# order=N domain=real|complex`,
// then one coefficient per line, `re` or `re,im`, at full double
// precision (round trips losslessly).
void write_coefficient_stream(std::ostream& out, std::span<const cdouble> coeffs, CoeffDomain domain);
FirFilter parse_coefficients(std::istream& in);

void write_coefficients(const std::filesystem::path& path, const FirFilter& h);
void write_autocorrelation(const std::filesystem::path& path, const AutocorrSequence& p);
FirFilter read_coefficients(const std::filesystem::path& path);

// Diagnostic zero-set export: one zero per line, `re,im,multiplicity`.
void write_zero_set(const std::filesystem::path& path, const ZeroSet& zeros);

}  // namespace firmin
