#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>

#include "firmin/coeff_io.hpp"
#include "firmin/lp_oracle.hpp"
#include "firmin/pipeline.hpp"
#include "firmin/spectrum.hpp"

namespace firmin::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitSuboptimal = 1;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct SpecFile {
    DesignSpec spec;
    PhaseSelection phase = PhaseSelection::minimum();
    DesignOptions options;
};

PhaseSelection parse_phase(const std::string& text)
{
    if (text == "min") return PhaseSelection::minimum();
    if (text == "max") return PhaseSelection::maximum();
    const std::string prefix = "explicit:";
    if (text.rfind(prefix, 0) == 0) {
        const std::string digits = text.substr(prefix.size());
        std::size_t used = 0;
        const std::uint64_t mask = std::stoull(digits, &used, 0);
        if (used != digits.size()) throw InvalidInput("bad explicit mask '" + digits + "'");
        return PhaseSelection::explicit_mask(mask);
    }
    throw InvalidInput("phase must be min, max, or explicit:<mask>, got '" + text + "'");
}

FactorizationMethod parse_factorization(const std::string& text)
{
    if (text == "roots") return FactorizationMethod::Roots;
    if (text == "cepstral") return FactorizationMethod::Cepstral;
    if (text == "auto") return FactorizationMethod::Auto;
    throw InvalidInput("factorization must be roots, cepstral, or auto, got '" + text + "'");
}

void reject_unknown_keys(const json& object, const std::set<std::string>& known,
                         const std::string& where)
{
    for (const auto& item : object.items()) {
        if (!known.contains(item.key())) {
            throw InvalidInput("unknown key '" + item.key() + "' in " + where);
        }
    }
}

SpecFile load_spec_file(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open spec file: " + path.string());
    const json doc = json::parse(in);  // parse_error carries line/column

    reject_unknown_keys(doc,
                        {"order", "bands", "k_des", "domain", "phase", "grid_density", "tol",
                         "max_iter", "factorization"},
                        "spec file");

    const int order = doc.at("order").get<int>();
    const double k_des = doc.at("k_des").get<double>();
    CoeffDomain domain = CoeffDomain::Real;
    if (doc.contains("domain")) {
        const std::string d = doc["domain"].get<std::string>();
        if (d == "real") {
            domain = CoeffDomain::Real;
        } else if (d == "complex") {
            domain = CoeffDomain::Complex;
        } else {
            throw InvalidInput("domain must be real or complex, got '" + d + "'");
        }
    }

    std::vector<BandInterval> intervals;
    for (const auto& band : doc.at("bands")) {
        reject_unknown_keys(band, {"lo", "hi", "desired"}, "band entry");
        BandInterval iv;
        iv.lo_pi = band.at("lo").get<double>();
        iv.hi_pi = band.at("hi").get<double>();
        const int desired = band.at("desired").get<int>();
        if (desired != 0 && desired != 1) throw InvalidInput("band desired must be 0 or 1");
        iv.role = desired == 1 ? BandRole::Pass : BandRole::Stop;
        intervals.push_back(iv);
    }

    SpecFile out{DesignSpec(order, BandSpec(std::move(intervals)), k_des, domain),
                 PhaseSelection::minimum(), DesignOptions{}};
    if (doc.contains("phase")) out.phase = parse_phase(doc["phase"].get<std::string>());
    if (doc.contains("grid_density")) out.options.grid_density = doc["grid_density"].get<int>();
    if (doc.contains("tol")) out.options.weight_tol = doc["tol"].get<double>();
    if (doc.contains("max_iter")) out.options.weight_max_iter = doc["max_iter"].get<int>();
    if (doc.contains("factorization")) {
        out.options.factorization = parse_factorization(doc["factorization"].get<std::string>());
    }
    return out;
}

json certificate_to_json(const Certificate& cert)
{
    json doc;
    doc["required"] = cert.required_alternations;
    doc["found"] = cert.found_alternations;
    doc["delta_p"] = cert.deviations.delta_p;
    doc["delta_s"] = cert.deviations.delta_s;
    doc["ratio_ok"] = cert.ratio_ok;
    doc["optimal"] = cert.optimal;
    json freqs = json::array();
    for (double w : cert.alternation_freqs) freqs.push_back(w / pi);
    doc["alternation_freqs_pi"] = std::move(freqs);
    return doc;
}

// --- design ----------------------------------------------------------------

struct DesignArgs {
    std::string spec_path;
    std::string out_dir;
    std::optional<std::string> phase;
    std::optional<int> grid_density;
    std::optional<double> tol;
    std::optional<std::string> factorization;
};

int cmd_design(const DesignArgs& args, std::ostream& out)
{
    SpecFile sf = load_spec_file(args.spec_path);
    if (args.phase) sf.phase = parse_phase(*args.phase);
    if (args.grid_density) sf.options.grid_density = *args.grid_density;
    if (args.tol) sf.options.weight_tol = *args.tol;
    if (args.factorization) sf.options.factorization = parse_factorization(*args.factorization);

    const fs::path dir(args.out_dir);
    fs::create_directories(dir);

    const DesignResult result = design_filter(sf.spec, sf.phase, sf.options);

    write_coefficients(dir / "coefficients.txt", result.filter);
    write_autocorrelation(dir / "autocorrelation.txt", result.autocorr);
    {
        std::ofstream cert_out(dir / "certificate.json");
        cert_out << certificate_to_json(result.certificate).dump(2) << "\n";
    }
    {
        json summary;
        summary["k_star"] = result.weight_solution.k_star;
        summary["delta_p_autocorr"] = result.weight_solution.design.delta_p;
        summary["delta_p"] = result.certificate.deviations.delta_p;
        summary["delta_s"] = result.certificate.deviations.delta_s;
        summary["lift_a"] = result.autocorr.lift_a;
        summary["lift_b"] = result.autocorr.lift_b;
        summary["alternations_found"] = result.certificate.found_alternations;
        summary["alternations_required"] = result.certificate.required_alternations;
        summary["optimal"] = result.certificate.optimal;
        summary["remez_iterations"] = result.weight_solution.design.iterations;
        summary["timings_ms"] = result.timings_ms;
        std::ofstream summary_out(dir / "summary.json");
        summary_out << summary.dump(2) << "\n";
    }

    out << "K* = " << fmt(result.weight_solution.k_star)
        << "  delta_p = " << fmt(result.certificate.deviations.delta_p)
        << "  delta_s = " << fmt(result.certificate.deviations.delta_s) << "\n"
        << "alternations " << result.certificate.found_alternations << " of "
        << result.certificate.required_alternations << " required; "
        << (result.certificate.optimal ? "optimal" : "suboptimal") << "\n"
        << "outputs written to " << dir.string() << "\n";
    return result.certificate.optimal ? kExitOk : kExitSolver;
}

// --- certify ---------------------------------------------------------------

int cmd_certify(const std::string& coeff_path, const std::string& spec_path,
                const std::string& report_path, std::ostream& out)
{
    const SpecFile sf = load_spec_file(spec_path);
    const FirFilter h = read_coefficients(coeff_path);
    if (h.order() != sf.spec.order) {
        throw InvalidInput("coefficient order " + std::to_string(h.order()) +
                           " does not match spec order " + std::to_string(sf.spec.order));
    }
    const Certificate cert = certify(h, sf.spec);
    const json doc = certificate_to_json(cert);
    out << doc.dump(2) << "\n";
    if (!report_path.empty()) {
        std::ofstream report(report_path);
        report << doc.dump(2) << "\n";
    }
    return cert.optimal ? kExitOk : kExitSuboptimal;
}

// --- response --------------------------------------------------------------

int cmd_response(const std::string& coeff_path, int points, const std::string& out_path,
                 std::ostream& out)
{
    const FirFilter h = read_coefficients(coeff_path);
    if (points < 2) throw InvalidInput("response: need at least 2 points");

    const double lo = h.domain() == CoeffDomain::Real ? 0.0 : -pi;
    std::vector<double> omegas(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        omegas[static_cast<std::size_t>(i)] = lo + (pi - lo) * i / (points - 1);
    }
    const auto mag = magnitude_response(h, omegas);
    const auto gd = group_delay(h, omegas);

    std::ofstream file;
    std::ostream* sink = &out;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw InvalidInput("cannot open for writing: " + out_path);
        sink = &file;
    }
    *sink << "frequency_pi,magnitude,magnitude_db,group_delay_samples\n";
    for (int i = 0; i < points; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double db = mag[k] > 0.0 ? 20.0 * std::log10(mag[k])
                                       : -std::numeric_limits<double>::infinity();
        *sink << fmt(omegas[k] / pi) << "," << fmt(mag[k]) << "," << fmt(db) << ","
              << (gd[k].has_value() ? fmt(*gd[k]) : "nan") << "\n";
    }
    return kExitOk;
}

// --- ksweep ----------------------------------------------------------------

int cmd_ksweep(const std::string& spec_path, double k_min, double k_max, int count,
               const std::string& out_path, std::ostream& out)
{
    const SpecFile sf = load_spec_file(spec_path);
    const double bound = k_lower_bound(sf.spec.k_des);
    if (k_min < bound) {
        throw InvalidInput("ksweep: K range must start at or above 4*k_des*(k_des+1) = " +
                           fmt(bound));
    }
    if (count < 1 || k_max < k_min) throw InvalidInput("ksweep: bad K range");

    const BasisKind basis = sf.spec.domain == CoeffDomain::Real
                                ? BasisKind::cosine(sf.spec.order)
                                : BasisKind::cosine_and_sine(sf.spec.order);
    const FrequencyGrid grid = build_grid(sf.spec.bands, basis.size(), sf.options.grid_density);

    std::ofstream file;
    std::ostream* sink = &out;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw InvalidInput("cannot open for writing: " + out_path);
        sink = &file;
    }
    *sink << "K,delta_p_res,delta_p_target\n";

    int sign_changes = 0;
    double prev_diff = 0.0;
    bool have_prev = false;
    for (int i = 0; i < count; ++i) {
        const double k =
            count == 1 ? k_min : k_min * std::pow(k_max / k_min, static_cast<double>(i) / (count - 1));
        const auto design = design_zero_phase(sf.spec.bands, k, basis, grid);
        const double target = delta_p_target(k, sf.spec.k_des);
        *sink << fmt(k) << "," << fmt(design.delta_p) << "," << fmt(target) << "\n";
        const double diff = design.delta_p - target;
        if (have_prev && std::signbit(diff) != std::signbit(prev_diff)) ++sign_changes;
        prev_diff = diff;
        have_prev = true;
    }
    if (count > 1) {
        out << "sign changes of (delta_p_res - delta_p_target): " << sign_changes
            << (sign_changes == 1 ? " (unique crossing)" : "") << "\n";
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"minimax FIR filter design with optimality certificates"};
    app.require_subcommand(1);

    DesignArgs design_args;
    std::string phase_flag, factorization_flag;
    int grid_density_flag = 0;
    double tol_flag = 0.0;

    auto* design = app.add_subcommand("design", "design a filter from a spec file");
    design->add_option("--spec", design_args.spec_path, "spec JSON file")->required();
    design->add_option("--out", design_args.out_dir, "output directory")->required();
    auto* phase_opt = design->add_option("--phase", phase_flag, "min | max | explicit:<mask>");
    auto* density_opt = design->add_option("--grid-density", grid_density_flag, "points per basis function");
    auto* tol_opt = design->add_option("--tol", tol_flag, "weight-solver relative tolerance");
    auto* fact_opt =
        design->add_option("--factorization", factorization_flag, "roots | cepstral | auto");

    std::string certify_coeff, certify_spec, certify_report;
    auto* certify_cmd = app.add_subcommand("certify", "certify a coefficient file against a spec");
    certify_cmd->add_option("--coeff", certify_coeff, "coefficient file")->required();
    certify_cmd->add_option("--spec", certify_spec, "spec JSON file")->required();
    certify_cmd->add_option("--out", certify_report, "write the JSON report here too");

    std::string response_coeff, response_out;
    int response_points = 512;
    auto* response_cmd = app.add_subcommand("response", "tabulate magnitude and group delay");
    response_cmd->add_option("--coeff", response_coeff, "coefficient file")->required();
    response_cmd->add_option("--points", response_points, "number of frequency points");
    response_cmd->add_option("--out", response_out, "CSV output file (default stdout)");

    std::string ksweep_spec, ksweep_out;
    double ksweep_min = 0.0, ksweep_max = 0.0;
    int ksweep_count = 20;
    auto* ksweep_cmd = app.add_subcommand("ksweep", "tabulate delta_p curves over a weight range");
    ksweep_cmd->add_option("--spec", ksweep_spec, "spec JSON file")->required();
    ksweep_cmd->add_option("--kmin", ksweep_min, "lowest weight")->required();
    ksweep_cmd->add_option("--kmax", ksweep_max, "highest weight")->required();
    ksweep_cmd->add_option("--count", ksweep_count, "number of log-spaced samples");
    ksweep_cmd->add_option("--out", ksweep_out, "CSV output file (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (design->parsed()) {
            if (*phase_opt) design_args.phase = phase_flag;
            if (*density_opt) design_args.grid_density = grid_density_flag;
            if (*tol_opt) design_args.tol = tol_flag;
            if (*fact_opt) design_args.factorization = factorization_flag;
            return cmd_design(design_args, out);
        }
        if (certify_cmd->parsed()) {
            return cmd_certify(certify_coeff, certify_spec, certify_report, out);
        }
        if (response_cmd->parsed()) {
            return cmd_response(response_coeff, response_points, response_out, out);
        }
        if (ksweep_cmd->parsed()) {
            return cmd_ksweep(ksweep_spec, ksweep_min, ksweep_max, ksweep_count, ksweep_out, out);
        }
    } catch (const nlohmann::json::exception& e) {
        err << "spec file error: " << e.what() << "\n";
        return kExitInput;
    } catch (const InvalidInput& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NonConvergence& e) {
        err << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const FactorizationError& e) {
        err << "factorization error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const InternalInconsistency& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitInput;
}

}  // namespace firmin::cli
