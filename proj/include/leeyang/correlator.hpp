// correlator.hpp — two-time probe-spin correlator <sigma0+(t+tau) sigma0-(t)>,
// computed two independent ways: the closed form through the bath partition
// function at complex field, and a literal Heisenberg-picture trace over the
// full probe+bath space

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "leeyang/common.hpp"
#include "leeyang/sector_partition.hpp"
#include "leeyang/spin_model.hpp"

namespace leeyang {

struct CorrelatorQuery {
    SpinModel model;
    ProbeParams probe;
    ThermalParams thermal;
    double t{};    // absolute time of the first operator; the closed form is t-independent
    double tau{};  // separation, may be negative
};

enum class CorrelatorMethod { closed_form, oracle };

inline const char* to_string(CorrelatorMethod m) {
    return m == CorrelatorMethod::closed_form ? "closed_form" : "oracle";
}

// --------------------------- closed form (sector route) ---------------------

// C(tau) = e^{beta h0 - 2 i h0 tau / hbar} Z(beta, h~) / Z_T with
// h~ = h + lambda - i 2 lambda tau / (beta hbar). Z_T comes from tracing the
// probe blocks: Z_T = e^{beta h0} Z(beta, h+lambda) + e^{-beta h0} Z(beta, h-lambda).
class ClosedFormContext {
  public:
    ClosedFormContext(const SpinModel& model, const ProbeParams& probe,
                      const ThermalParams& thermal, int site_cap = kMaxBathSites)
        : probe_(probe), thermal_(thermal), bath_field_(model.bath_field) {
        validate(thermal);
        poly_ = lee_yang_polynomial(sector_spectra(model, site_cap), thermal);
        const ScaledComplex z_up = evaluate_partition(poly_, {cxd(bath_field_ + probe.lambda, 0.0)});
        const ScaledComplex z_down =
            evaluate_partition(poly_, {cxd(bath_field_ - probe.lambda, 0.0)});
        z_total_ = ScaledComplex::exp_of(thermal.beta * probe.h0) * z_up +
                   ScaledComplex::exp_of(-thermal.beta * probe.h0) * z_down;
    }

    cxd effective_field(double tau) const {
        return cxd(bath_field_ + probe_.lambda,
                   -2.0 * probe_.lambda * tau / (thermal_.beta * thermal_.hbar));
    }

    cxd evaluate(double tau) const {
        const ScaledComplex z = evaluate_partition(poly_, {effective_field(tau)});
        const ScaledComplex prefactor = ScaledComplex::exp_of(
            cxd(thermal_.beta * probe_.h0, -2.0 * probe_.h0 * tau / thermal_.hbar));
        return (prefactor * z / z_total_).value();
    }

    double abs_correlator(double tau) const { return std::abs(evaluate(tau)); }

    const LeeYangPolynomial& polynomial() const { return poly_; }
    ScaledComplex partition_total() const { return z_total_; }

  private:
    ProbeParams probe_;
    ThermalParams thermal_;
    double bath_field_;
    LeeYangPolynomial poly_;
    ScaledComplex z_total_;
};

inline cxd closed_form_correlator(const CorrelatorQuery& query) {
    return ClosedFormContext(query.model, query.probe, query.thermal).evaluate(query.tau);
}

// ----------------------------- oracle (full trace) --------------------------

// Literal evaluation of Tr[e^{-beta H_T} sigma0+(t+tau) sigma0-(t)] / Z_T from one
// eigendecomposition of H_T; Heisenberg evolution is applied as dense conjugation
// in the eigenbasis. Must stay independent of the sector construction.
class OracleContext {
  public:
    OracleContext(const SpinModel& model, const ProbeParams& probe, const ThermalParams& thermal,
                  int site_cap = kMaxOracleSites)
        : hbar_(thermal.hbar) {
        validate(thermal);
        const HamiltonianOperator ht = build_total_hamiltonian(model, probe, site_cap);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(ht.matrix);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("total hamiltonian diagonalization failed");
        energies_ = solver.eigenvalues();
        const double e0 = energies_.minCoeff();
        weights_ = (-thermal.beta * (energies_.array() - e0)).exp();
        weight_sum_ = weights_.sum();

        const int probe_site = model.n_sites;
        const Eigen::MatrixXcd lower = site_operator(pauli_minus(), probe_site, model.n_sites + 1);
        lower_eig_ = solver.eigenvectors().adjoint() * lower * solver.eigenvectors();
        raise_eig_ = lower_eig_.adjoint();
    }

    cxd evaluate(double t, double tau) const {
        const long dim = energies_.size();
        cxd acc = 0.0;
        for (long m = 0; m < dim; ++m) {
            cxd row = 0.0;
            for (long n = 0; n < dim; ++n) {
                const double gap = energies_[m] - energies_[n];
                const cxd raise_t =
                    raise_eig_(m, n) * std::polar(1.0, gap * (t + tau) / hbar_);
                const cxd lower_t = lower_eig_(n, m) * std::polar(1.0, -gap * t / hbar_);
                row += raise_t * lower_t;
            }
            acc += weights_[m] * row;
        }
        return acc / weight_sum_;
    }

  private:
    double hbar_;
    Eigen::VectorXd energies_;
    Eigen::VectorXd weights_;
    double weight_sum_{};
    Eigen::MatrixXcd lower_eig_;  // sigma0- in the H_T eigenbasis
    Eigen::MatrixXcd raise_eig_;
};

inline cxd oracle_correlator(const CorrelatorQuery& query) {
    return OracleContext(query.model, query.probe, query.thermal).evaluate(query.t, query.tau);
}

// ------------------------------- grid scans ---------------------------------

struct CorrelatorTrace {
    std::vector<double> tau_grid;
    std::vector<cxd> values;
    CorrelatorQuery query;
    CorrelatorMethod method{CorrelatorMethod::closed_form};
};

struct ScanOptions {
    CorrelatorMethod method{CorrelatorMethod::closed_form};
    int threads{1};
    double noise_sigma{0.0};  // optional additive complex gaussian, for robustness demos
    std::uint64_t noise_seed{42};
};

inline CorrelatorTrace scan_correlator(const CorrelatorQuery& query,
                                       std::span<const double> tau_grid,
                                       const ScanOptions& opts = {}) {
    if (tau_grid.empty()) throw std::invalid_argument("scan grid is empty");
    for (std::size_t i = 1; i < tau_grid.size(); ++i)
        if (!(tau_grid[i] > tau_grid[i - 1]))
            throw std::invalid_argument("scan grid must be strictly increasing");

    CorrelatorTrace trace;
    trace.tau_grid.assign(tau_grid.begin(), tau_grid.end());
    trace.values.resize(tau_grid.size());
    trace.query = query;
    trace.method = opts.method;

    const auto evaluate_range = [&](auto&& eval, std::size_t first, std::size_t last) {
        for (std::size_t i = first; i < last; ++i) trace.values[i] = eval(trace.tau_grid[i]);
    };
    const auto run = [&](auto&& eval) {
        const std::size_t count = trace.tau_grid.size();
        const int threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(count)));
        if (threads == 1) {
            evaluate_range(eval, 0, count);
            return;
        }
        std::vector<std::thread> pool;
        const std::size_t chunk = (count + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            const std::size_t first = w * chunk;
            const std::size_t last = std::min(count, first + chunk);
            if (first >= last) break;
            pool.emplace_back([&, first, last] { evaluate_range(eval, first, last); });
        }
        for (auto& th : pool) th.join();
    };

    if (opts.method == CorrelatorMethod::closed_form) {
        const ClosedFormContext ctx(query.model, query.probe, query.thermal);
        run([&](double tau) { return ctx.evaluate(tau); });
    } else {
        const OracleContext ctx(query.model, query.probe, query.thermal);
        run([&](double tau) { return ctx.evaluate(query.t, tau); });
    }

    if (opts.noise_sigma > 0.0) {
        std::mt19937_64 rng(opts.noise_seed);
        for (auto& v : trace.values) {
            // Box-Muller on the portable uniform mapping
            const double u1 = std::max(uniform_unit(rng()), 1e-300);
            const double u2 = uniform_unit(rng());
            const double r = std::sqrt(-2.0 * std::log(u1));
            v += opts.noise_sigma *
                 cxd(r * std::cos(2.0 * std::numbers::pi * u2),
                     r * std::sin(2.0 * std::numbers::pi * u2));
        }
    }
    return trace;
}

inline CorrelatorTrace scan_correlator(const CorrelatorQuery& query,
                                       std::span<const double> tau_grid,
                                       CorrelatorMethod method) {
    ScanOptions opts;
    opts.method = method;
    return scan_correlator(query, tau_grid, opts);
}

// ------------------------------ zero location -------------------------------

struct CorrelatorZero {
    double tau{};
    double abs_value{};
    bool is_zero{};  // |C| below threshold after refinement
};

inline constexpr double kCorrelatorZeroThreshold = 1e-6;

namespace detail {

// golden-section minimization of f over [a, b] to interval width `tol`
template <typename F>
double golden_minimize(F&& f, double a, double b, double tol = 1e-10) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

// Local minima of |C| on the grid, each refined by golden-section search.
// Requires a closed-form trace: |C| is smooth there and cheap to re-evaluate.
inline std::vector<CorrelatorZero> locate_correlator_zeros(const CorrelatorTrace& trace) {
    if (trace.tau_grid.empty()) throw std::invalid_argument("empty trace");
    if (trace.method != CorrelatorMethod::closed_form)
        throw std::invalid_argument("zero location needs a closed_form trace");

    const ClosedFormContext ctx(trace.query.model, trace.query.probe, trace.query.thermal);
    const auto f = [&](double tau) { return ctx.abs_correlator(tau); };

    std::vector<CorrelatorZero> out;
    for (std::size_t i = 1; i + 1 < trace.tau_grid.size(); ++i) {
        const double prev = std::abs(trace.values[i - 1]);
        const double here = std::abs(trace.values[i]);
        const double next = std::abs(trace.values[i + 1]);
        // a real dip, not rounding jitter on a flat stretch
        const double guard =
            32.0 * std::numeric_limits<double>::epsilon() * std::max({prev, here, next});
        if (!(prev - here > guard && next - here >= 0.0)) continue;
        const double tau =
            detail::golden_minimize(f, trace.tau_grid[i - 1], trace.tau_grid[i + 1]);
        CorrelatorZero z;
        z.tau = tau;
        z.abs_value = f(tau);
        z.is_zero = z.abs_value < kCorrelatorZeroThreshold;
        out.push_back(z);
    }
    return out;
}

}  // namespace leeyang
