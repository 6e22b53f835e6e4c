// zero_finder.hpp — Lee-Yang zeros of the fugacity polynomial, the complex fields
// they correspond to, and the real evolution times at which the probe correlator
// can vanish

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "leeyang/common.hpp"
#include "leeyang/polynomial_roots.hpp"
#include "leeyang/sector_partition.hpp"

namespace leeyang {

// A zero is reachable by real-time evolution iff Re h~ matches h + lambda.
inline constexpr double kReachableFieldTol = 1e-9;

struct LeeYangZero {
    cxd q{};                    // fugacity root
    cxd h_tilde{};              // principal branch, log(q) / (2 beta)
    double phase{};             // arg q in (-pi, pi]
    double modulus_deviation{}; // | |q| - 1 |
    double residual{};          // |P(q)| on max-scaled coefficients
    int multiplicity{1};
};

struct ZeroTime {
    double tau{};
    int winding{};
    std::size_t source{};  // index into the zero list
    bool reachable{};
    double required_h{};   // bath field that would put this zero on the evolution path
    // |C(tau)|, filled in by correlator-side verification
    double correlator_residual{std::numeric_limits<double>::quiet_NaN()};
};

inline PolynomialRoots find_polynomial_roots(const LeeYangPolynomial& poly,
                                             const RootFindOptions& opts = {}) {
    if (poly.degree() < 1) throw std::domain_error("polynomial degree must be >= 1");
    if (!(poly.coefficients.back() > 0.0))
        throw std::domain_error("leading sector weight underflowed the coefficient scale");
    return find_roots(poly.coefficients, opts);
}

inline std::vector<LeeYangZero> roots_to_fields(const PolynomialRoots& roots,
                                                const ThermalParams& thermal) {
    validate(thermal);
    std::vector<LeeYangZero> zeros;
    zeros.reserve(roots.roots.size());
    for (std::size_t i = 0; i < roots.roots.size(); ++i) {
        const cxd q = roots.roots[i];
        LeeYangZero z;
        z.q = q;
        z.phase = std::arg(q);
        z.h_tilde = cxd(std::log(std::abs(q)), z.phase) / (2.0 * thermal.beta);
        z.modulus_deviation = std::abs(std::abs(q) - 1.0);
        z.residual = roots.residuals[i];
        z.multiplicity = roots.multiplicities[i];
        zeros.push_back(z);
    }
    return zeros;
}

inline double unit_circle_check(std::span<const LeeYangZero> zeros) {
    double dev = 0.0;
    for (const auto& z : zeros) dev = std::max(dev, z.modulus_deviation);
    return dev;
}

// Times where the evolution fugacity q(tau) = e^{2 beta (h + lambda)} e^{-4 i lambda tau / hbar}
// hits a zero: tau_n = hbar (2 pi n - phase) / (4 lambda), tau >= 0, ascending.
// Same-branch windings are spaced by exactly pi hbar / (2 |lambda|).
inline std::vector<ZeroTime> zero_times(std::span<const LeeYangZero> zeros, double bath_field,
                                        const ProbeParams& probe, const ThermalParams& thermal,
                                        int windings = 8) {
    validate(thermal);
    if (probe.lambda == 0.0)
        throw std::invalid_argument("probe decoupled; correlator has no bath-induced zeros");
    if (windings < 1) throw std::invalid_argument("winding window must be >= 1");

    const double path_field = bath_field + probe.lambda;
    std::vector<ZeroTime> reachable_times;
    std::vector<ZeroTime> unreachable;

    for (std::size_t i = 0; i < zeros.size(); ++i) {
        const auto& z = zeros[i];
        const double re_h = z.h_tilde.real();
        const bool reachable = std::abs(re_h - path_field) <= kReachableFieldTol;
        const double required_h = re_h - probe.lambda;

        const auto tau_of = [&](int n) {
            return thermal.hbar * (2.0 * std::numbers::pi * n - z.phase) / (4.0 * probe.lambda);
        };
        // first winding index with tau >= 0, stepping in the direction tau grows
        const int step = probe.lambda > 0.0 ? 1 : -1;
        int n0 = 0;
        while (tau_of(n0) < 0.0) n0 += step;
        while (tau_of(n0 - step) >= 0.0) n0 -= step;

        if (!reachable) {
            ZeroTime t;
            t.tau = tau_of(n0);
            t.winding = n0;
            t.source = i;
            t.reachable = false;
            t.required_h = required_h;
            unreachable.push_back(t);
            continue;
        }
        for (int w = 0; w < windings; ++w) {
            ZeroTime t;
            t.winding = n0 + step * w;
            t.tau = tau_of(t.winding);
            t.source = i;
            t.reachable = true;
            t.required_h = required_h;
            reachable_times.push_back(t);
        }
    }

    std::sort(reachable_times.begin(), reachable_times.end(),
              [](const ZeroTime& a, const ZeroTime& b) { return a.tau < b.tau; });
    reachable_times.insert(reachable_times.end(), unreachable.begin(), unreachable.end());
    return reachable_times;
}

}  // namespace leeyang
