// leeyang — batch front end: Lee-Yang zeros of S^z-conserving spin baths, probe
// correlator scans, closed-form vs oracle verification, and zero-time prediction.
//
// Exit codes: 0 ok, 1 tolerance failure, 2 parse/usage error, 3 numeric failure,
// 4 dimension cap exceeded, 5 no reachable zero.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "leeyang/correlator.hpp"
#include "leeyang/model_file.hpp"
#include "leeyang/zero_finder.hpp"

namespace {

using namespace leeyang;

struct CliUsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// deterministic 12-significant-digit formatting
std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt(int v) { return std::to_string(v); }

enum class OutputFormat { csv, records };

std::string echo_model(const ModelFile& mf) {
    std::string couplings = "[";
    for (std::size_t i = 0; i < mf.model.couplings.size(); ++i) {
        const auto& c = mf.model.couplings[i];
        couplings += (i ? "," : "") + std::string("[") + std::to_string(c.a) + "," +
                     std::to_string(c.b) + "," + fmt(c.strength) + "]";
    }
    couplings += "]";
    return "sites=" + std::to_string(mf.model.n_sites) + " kind=" + to_string(mf.model.kind) +
           " couplings=" + couplings + " field_h=" + fmt(mf.model.bath_field) +
           " beta=" + fmt(mf.thermal.beta) + " hbar=" + fmt(mf.thermal.hbar) +
           " lambda=" + fmt(mf.probe.lambda) + " h0=" + fmt(mf.probe.h0);
}

// One '#' parameter-echo line, a column-name row, then data rows; `records`
// renders the same table as a field: value stream.
struct Table {
    std::string echo;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> comments;  // trailing '#' lines

    std::string render(OutputFormat format) const {
        std::string out = "# " + echo + "\n";
        if (format == OutputFormat::csv) {
            for (std::size_t c = 0; c < columns.size(); ++c)
                out += (c ? "," : "") + columns[c];
            out += "\n";
            for (const auto& row : rows) {
                for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + row[c];
                out += "\n";
            }
        } else {
            for (std::size_t r = 0; r < rows.size(); ++r) {
                out += "record: " + std::to_string(r) + "\n";
                for (std::size_t c = 0; c < columns.size(); ++c)
                    out += columns[c] + ": " + rows[r][c] + "\n";
                out += "\n";
            }
        }
        for (const auto& line : comments) out += "# " + line + "\n";
        return out;
    }
};

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliUsageError("cannot open output file: " + path);
    out << content;
}

// ------------------------------- zeros --------------------------------------

int run_zeros(const std::string& model_path, const std::string& out_path, OutputFormat format) {
    const ModelFile mf = parse_model_file(model_path);
    const auto poly = lee_yang_polynomial(sector_spectra(mf.model), mf.thermal);
    const auto roots = find_polynomial_roots(poly);
    const auto zeros = roots_to_fields(roots, mf.thermal);

    Table table;
    table.echo = "command=zeros model=" + model_path + " " + echo_model(mf);
    table.columns = {"re_q", "im_q", "abs_q", "phase", "re_h_tilde", "im_h_tilde", "residual"};
    for (const auto& z : zeros)
        table.rows.push_back({fmt(z.q.real()), fmt(z.q.imag()), fmt(std::abs(z.q)), fmt(z.phase),
                              fmt(z.h_tilde.real()), fmt(z.h_tilde.imag()), fmt(z.residual)});
    write_output(out_path, table.render(format));
    return 0;
}

// ----------------------------- correlator -----------------------------------

int run_correlator(const std::string& model_path, double tau_min, double tau_max, int points,
                   const std::string& method, const std::string& out_path, OutputFormat format,
                   int threads, double noise_sigma, std::uint64_t seed) {
    if (!(tau_max > tau_min)) throw CliUsageError("tau-max must exceed tau-min");
    const ModelFile mf = parse_model_file(model_path);

    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i)
        grid[i] = tau_min + (tau_max - tau_min) * i / (points - 1);

    ScanOptions opts;
    opts.method =
        method == "oracle" ? CorrelatorMethod::oracle : CorrelatorMethod::closed_form;
    opts.threads = threads;
    opts.noise_sigma = noise_sigma;
    opts.noise_seed = seed;
    const CorrelatorQuery query{mf.model, mf.probe, mf.thermal, 0.0, 0.0};
    const CorrelatorTrace trace = scan_correlator(query, grid, opts);

    Table table;
    table.echo = "command=correlator model=" + model_path + " " + echo_model(mf) +
                 " method=" + method + " tau_min=" + fmt(tau_min) + " tau_max=" + fmt(tau_max) +
                 " points=" + std::to_string(points) +
                 (noise_sigma > 0.0 ? " noise_sigma=" + fmt(noise_sigma) + " seed=" +
                                          std::to_string(seed)
                                    : std::string{});
    table.columns = {"tau", "re_C", "im_C", "abs_C"};
    for (std::size_t i = 0; i < trace.tau_grid.size(); ++i)
        table.rows.push_back({fmt(trace.tau_grid[i]), fmt(trace.values[i].real()),
                              fmt(trace.values[i].imag()), fmt(std::abs(trace.values[i]))});
    write_output(out_path, table.render(format));
    return 0;
}

// ------------------------------- verify -------------------------------------

int run_verify(const std::string& model_path, int samples, std::uint64_t seed) {
    const ModelFile mf = parse_model_file(model_path);
    if (mf.model.n_sites > 4)
        throw DimensionCapError("verify requires at most 4 bath sites, got " +
                                std::to_string(mf.model.n_sites));

    const ClosedFormContext closed(mf.model, mf.probe, mf.thermal);
    const OracleContext oracle(mf.model, mf.probe, mf.thermal);

    constexpr double kIdentityTol = 1e-10;
    std::mt19937_64 rng(seed);
    double max_rel = 0.0, max_shift = 0.0;
    double worst_tau = 0.0, worst_t = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double t1 = uniform_in(rng, 0.0, 5.0);
        const double t2 = uniform_in(rng, 0.0, 5.0);
        const double tau = uniform_in(rng, 0.0, 10.0);
        const cxd c = closed.evaluate(tau);
        const cxd o1 = oracle.evaluate(t1, tau);
        const cxd o2 = oracle.evaluate(t2, tau);
        const double rel = std::abs(c - o1) / std::max(std::abs(o1), 1e-30);
        if (rel > max_rel) {
            max_rel = rel;
            worst_tau = tau;
            worst_t = t1;
        }
        max_shift = std::max(max_shift, std::abs(o1 - o2));
    }

    const bool pass = max_rel < kIdentityTol && max_shift < kIdentityTol;
    std::string report = "# command=verify model=" + model_path + " " + echo_model(mf) +
                         " samples=" + std::to_string(samples) +
                         " seed=" + std::to_string(seed) + "\n";
    report += "max_relative_deviation: " + fmt(max_rel) + "\n";
    report += "max_t_shift_deviation: " + fmt(max_shift) + "\n";
    report += "tolerance: " + fmt(kIdentityTol) + "\n";
    report += std::string("status: ") + (pass ? "pass" : "fail") + "\n";
    if (!pass)
        report += "worst_case: tau=" + fmt(worst_tau) + " t=" + fmt(worst_t) + "\n";
    std::cout << report;
    return pass ? 0 : 1;
}

// ------------------------------ zero-times ----------------------------------

// When the model is the two-spin uniform ferromagnetic ising bath with
// lambda = J, the root phases have the closed form phi = +/-(pi - atan(sqrt(e^{4 beta J} - 1))).
// A naive reading of that arctan expression drops the pi offset (the roots'
// real part is negative); print both time families so the difference is visible.
void append_two_spin_reference(const ModelFile& mf, const std::vector<ZeroTime>& times,
                               Table& table) {
    const auto& m = mf.model;
    if (m.n_sites != 2 || m.kind != ModelKind::ising_zz || m.couplings.size() != 1) return;
    const double j = m.couplings.front().strength;
    if (!(j > 0.0) || std::abs(mf.probe.lambda - j) > 1e-12) return;

    std::vector<double> derived;
    for (const auto& t : times)
        if (t.reachable) derived.push_back(t.tau);
    if (derived.empty()) return;
    std::sort(derived.begin(), derived.end());

    const double a = std::atan(std::sqrt(std::exp(4.0 * mf.thermal.beta * j) - 1.0));
    std::vector<double> naive;
    for (int n = 0; static_cast<int>(naive.size()) < static_cast<int>(derived.size()) + 2; ++n) {
        const double plus = mf.thermal.hbar / (4.0 * j) * (a + 2.0 * std::numbers::pi * n);
        const double minus = mf.thermal.hbar / (4.0 * j) * (-a + 2.0 * std::numbers::pi * n);
        if (minus >= 0.0) naive.push_back(minus);
        naive.push_back(plus);
    }
    std::sort(naive.begin(), naive.end());

    table.comments.push_back(
        "two-spin reference: naive arctan formula tau = (hbar/(4 J)) (+/-atan(sqrt(exp(4 beta J)-1)) + 2 pi n)");
    table.comments.push_back(
        "vs root-phase times; the naive formula omits the pi offset of the root phase (Re q < 0)");
    table.comments.push_back("k, tau_naive_arctan, tau_root_phase, difference");
    const std::size_t count = std::min(derived.size(), naive.size());
    for (std::size_t k = 0; k < count; ++k)
        table.comments.push_back(std::to_string(k) + ", " + fmt(naive[k]) + ", " +
                                 fmt(derived[k]) + ", " + fmt(derived[k] - naive[k]));
}

int run_zero_times(const std::string& model_path, int windows, const std::string& out_path,
                   OutputFormat format) {
    const ModelFile mf = parse_model_file(model_path);
    const auto poly = lee_yang_polynomial(sector_spectra(mf.model), mf.thermal);
    const auto roots = find_polynomial_roots(poly);
    const auto zeros = roots_to_fields(roots, mf.thermal);
    auto times = zero_times(zeros, mf.model.bath_field, mf.probe, mf.thermal, windows);

    const ClosedFormContext closed(mf.model, mf.probe, mf.thermal);
    for (auto& t : times) t.correlator_residual = closed.abs_correlator(t.tau);

    Table table;
    table.echo = "command=zero-times model=" + model_path + " " + echo_model(mf) +
                 " windows=" + std::to_string(windows);
    table.columns = {"zero_index", "reachable", "required_h", "tau", "winding", "abs_C"};
    bool any_reachable = false;
    for (const auto& t : times) {
        any_reachable = any_reachable || t.reachable;
        table.rows.push_back({std::to_string(t.source), t.reachable ? "1" : "0",
                              fmt(t.required_h), fmt(t.tau), std::to_string(t.winding),
                              fmt(t.correlator_residual)});
    }
    if (!any_reachable)
        table.comments.push_back(
            "no zero reachable at field_h=" + fmt(mf.model.bath_field) +
            "; required_h column lists the bath field that would reach each zero");
    append_two_spin_reference(mf, times, table);
    write_output(out_path, table.render(format));
    return any_reachable ? 0 : 5;
}

int dispatch(const std::function<int()>& fn) {
    try {
        return fn();
    } catch (const ModelParseError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const CliUsageError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const DimensionCapError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 4;
    } catch (const ConvergenceError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lee-Yang zeros and probe-spin correlators of S^z-conserving spin baths"};
    app.require_subcommand(1);

    std::string model_path, out_path = "-", format_name = "csv", method = "closed_form";
    double tau_min = 0.0, tau_max = 4.0, noise_sigma = 0.0;
    int points = 1000, samples = 100, windows = 8;
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::uint64_t seed = 42;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("model", model_path, "model file (JSON)")->required();
        cmd->add_option("-o,--out", out_path, "output path, '-' for stdout");
        cmd->add_option("--format", format_name, "output format")
            ->check(CLI::IsMember({"csv", "records"}));
    };

    auto* zeros_cmd = app.add_subcommand("zeros", "Lee-Yang zeros of the fugacity polynomial");
    add_common(zeros_cmd);

    auto* corr_cmd = app.add_subcommand("correlator", "scan C(tau) over a tau grid");
    add_common(corr_cmd);
    corr_cmd->add_option("--tau-min", tau_min, "grid start");
    corr_cmd->add_option("--tau-max", tau_max, "grid end");
    corr_cmd->add_option("--points", points, "grid size")->check(CLI::Range(2, 10000000));
    corr_cmd->add_option("--method", method, "evaluation route")
        ->check(CLI::IsMember({"closed_form", "oracle"}));
    corr_cmd->add_option("--threads", threads, "parallel grid evaluation")
        ->check(CLI::Range(1, 1024));
    corr_cmd->add_option("--noise", noise_sigma, "additive gaussian noise amplitude (demo)");
    corr_cmd->add_option("--seed", seed, "noise seed");

    auto* verify_cmd =
        app.add_subcommand("verify", "closed form vs oracle identity check (N <= 4)");
    verify_cmd->add_option("model", model_path, "model file (JSON)")->required();
    verify_cmd->add_option("--samples", samples, "random (t, tau) samples")
        ->check(CLI::Range(1, 1000000));
    verify_cmd->add_option("--seed", seed, "sample seed");

    auto* times_cmd =
        app.add_subcommand("zero-times", "correlator zero times predicted from the zeros");
    add_common(times_cmd);
    times_cmd->add_option("--windows", windows, "windings per zero")->check(CLI::Range(1, 1024));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 2;
    }

    const OutputFormat format =
        format_name == "records" ? OutputFormat::records : OutputFormat::csv;

    if (zeros_cmd->parsed())
        return dispatch([&] { return run_zeros(model_path, out_path, format); });
    if (corr_cmd->parsed())
        return dispatch([&] {
            return run_correlator(model_path, tau_min, tau_max, points, method, out_path, format,
                                  threads, noise_sigma, seed);
        });
    if (verify_cmd->parsed())
        return dispatch([&] { return run_verify(model_path, samples, seed); });
    if (times_cmd->parsed())
        return dispatch([&] { return run_zero_times(model_path, windows, out_path, format); });
    return 2;
}
