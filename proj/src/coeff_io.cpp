#include "firmin/coeff_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace firmin {

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open for writing: " + path.string());
    return out;
}

}  // namespace

void write_coefficient_stream(std::ostream& out, std::span<const cdouble> coeffs, CoeffDomain domain)
{
    out << "# order=" << (coeffs.size() - 1)
        << " domain=" << (domain == CoeffDomain::Real ? "real" : "complex") << "\n";
    for (const auto& c : coeffs) {
        if (domain == CoeffDomain::Real) {
            out << fmt(c.real()) << "\n";
        } else {
            out << fmt(c.real()) << "," << fmt(c.imag()) << "\n";
        }
    }
}

FirFilter parse_coefficients(std::istream& in)
{
    std::string header;
    if (!std::getline(in, header)) throw InvalidInput("coefficient file: empty");
    int order = -1;
    char domain_buf[16] = {0};
    if (std::sscanf(header.c_str(), "# order=%d domain=%15s", &order, domain_buf) != 2 || order < 0) {
        throw InvalidInput("coefficient file: bad header line '" + header + "'");
    }
    const std::string domain_str = domain_buf;
    CoeffDomain domain;
    if (domain_str == "real") {
        domain = CoeffDomain::Real;
    } else if (domain_str == "complex") {
        domain = CoeffDomain::Complex;
    } else {
        throw InvalidInput("coefficient file: unknown domain '" + domain_str + "'");
    }

    std::vector<cdouble> coeffs;
    std::string line;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        double re = 0.0, im = 0.0;
        if (domain == CoeffDomain::Real) {
            if (std::sscanf(line.c_str(), "%lf", &re) != 1) {
                throw InvalidInput("coefficient file: parse error at line " + std::to_string(line_no));
            }
        } else {
            const int got = std::sscanf(line.c_str(), "%lf,%lf", &re, &im);
            if (got < 1) {
                throw InvalidInput("coefficient file: parse error at line " + std::to_string(line_no));
            }
            if (got == 1) im = 0.0;
        }
        coeffs.emplace_back(re, im);
    }
    if (static_cast<int>(coeffs.size()) != order + 1) {
        throw InvalidInput("coefficient file: declared order " + std::to_string(order) + " needs " +
                           std::to_string(order + 1) + " coefficients, found " +
                           std::to_string(coeffs.size()));
    }
    return FirFilter(std::move(coeffs), domain);
}

void write_coefficients(const std::filesystem::path& path, const FirFilter& h)
{
    auto out = open_out(path);
    write_coefficient_stream(out, h.coeffs(), h.domain());
}

void write_autocorrelation(const std::filesystem::path& path, const AutocorrSequence& p)
{
    auto out = open_out(path);
    write_coefficient_stream(out, p.one_sided, p.domain());
}

FirFilter read_coefficients(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open: " + path.string());
    return parse_coefficients(in);
}

void write_zero_set(const std::filesystem::path& path, const ZeroSet& zeros)
{
    auto out = open_out(path);
    out << "# re,im,multiplicity\n";
    for (const auto& pair : zeros.pairs) {
        for (const auto& z : {pair.inside, pair.outside}) {
            out << fmt(z.real()) << "," << fmt(z.imag()) << ",1\n";
        }
    }
}

}  // namespace firmin
