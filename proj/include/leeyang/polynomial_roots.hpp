// polynomial_roots.hpp — Aberth–Ehrlich simultaneous iteration with Newton polish,
// plus a companion-matrix route used as an independent cross-check

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "leeyang/common.hpp"

namespace leeyang {

struct RootFindOptions {
    int max_iterations{200};
    double step_tol{1e-14};     // relative displacement convergence
    double cluster_tol{1e-8};   // multiplicity clustering distance
};

struct ConvergenceError : std::runtime_error {
    std::vector<double> residuals;  // best |P(z_i)| reached, max-scaled coefficients
    ConvergenceError(const std::string& msg, std::vector<double> res)
        : std::runtime_error(msg), residuals(std::move(res)) {}
};

struct PolynomialRoots {
    std::vector<cxd> roots;          // sorted by (re, im)
    std::vector<double> residuals;   // |P(root)| on max-scaled coefficients
    std::vector<int> multiplicities; // cluster sizes at cluster_tol
    int iterations{};
};

namespace detail {

// P(z) and P'(z) by Horner; also returns sum_k |c_k| |z|^k, the attainable
// evaluation floor used in the convergence test.
struct Eval {
    cxd p, dp;
    double floor;
};

inline Eval evaluate_with_derivative(const std::vector<cxd>& c, cxd z) {
    cxd p = 0.0, dp = 0.0;
    double floor = 0.0;
    const double az = std::abs(z);
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
        dp = dp * z + p;
        p = p * z + c[k];
        floor = floor * az + std::abs(c[k]);
    }
    return {p, dp, floor};
}

}  // namespace detail

// All roots of sum_k coeffs[k] z^k (ascending powers). Coefficients are
// rescaled by their max modulus internally; residuals refer to the rescaled
// polynomial. Throws ConvergenceError when the iteration stalls.
inline PolynomialRoots find_roots(std::vector<cxd> coeffs, const RootFindOptions& opts = {}) {
    if (coeffs.size() < 2) throw std::domain_error("find_roots: degree must be >= 1");
    if (std::abs(coeffs.back()) == 0.0)
        throw std::domain_error("find_roots: zero leading coefficient");

    double max_c = 0.0;
    for (const auto& c : coeffs) max_c = std::max(max_c, std::abs(c));
    for (auto& c : coeffs) c /= max_c;
    const std::vector<cxd> scaled_full = coeffs;

    // roots at the origin
    std::vector<cxd> zero_roots;
    while (coeffs.size() > 1 && std::abs(coeffs.front()) == 0.0) {
        zero_roots.emplace_back(0.0, 0.0);
        coeffs.erase(coeffs.begin());
    }

    const int n = static_cast<int>(coeffs.size()) - 1;
    std::vector<cxd> z(n);
    std::vector<bool> settled(n, false);
    int iterations = 0;

    if (n > 0) {
        // start on a circle with the geometric-mean root modulus |c0/cn|^(1/n)
        double r0 = std::pow(std::abs(coeffs.front() / coeffs.back()), 1.0 / n);
        if (!(r0 > 0.0) || !std::isfinite(r0)) r0 = 1.0;
        constexpr double kAngleOffset = 0.3475;  // breaks coefficient symmetries
        for (int i = 0; i < n; ++i) {
            const double theta = 2.0 * std::numbers::pi * i / n + kAngleOffset;
            z[i] = std::polar(r0, theta);
        }

        const double eps = std::numeric_limits<double>::epsilon();
        bool all_settled = false;
        for (; iterations < opts.max_iterations && !all_settled; ++iterations) {
            all_settled = true;
            for (int i = 0; i < n; ++i) {
                if (settled[i]) continue;
                const auto ev = detail::evaluate_with_derivative(coeffs, z[i]);
                if (std::abs(ev.p) <= 4.0 * eps * ev.floor) {
                    settled[i] = true;
                    continue;
                }
                cxd newton;
                if (ev.dp == cxd{0.0, 0.0}) {
                    z[i] += cxd(1e-8, 1e-8) * (1.0 + std::abs(z[i]));
                    all_settled = false;
                    continue;
                }
                newton = ev.p / ev.dp;
                cxd repulsion = 0.0;
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    cxd d = z[i] - z[j];
                    if (d == cxd{0.0, 0.0}) d = cxd(1e-12, 1e-12);
                    repulsion += 1.0 / d;
                }
                const cxd denom = 1.0 - newton * repulsion;
                const cxd step = denom == cxd{0.0, 0.0} ? newton : newton / denom;
                z[i] -= step;
                if (std::abs(step) > opts.step_tol * (1.0 + std::abs(z[i])))
                    all_settled = false;
                else
                    settled[i] = true;
            }
        }

        if (!all_settled) {
            std::vector<double> residuals;
            for (int i = 0; i < n; ++i)
                residuals.push_back(std::abs(detail::evaluate_with_derivative(coeffs, z[i]).p));
            throw ConvergenceError("root finding did not converge after " +
                                       std::to_string(opts.max_iterations) + " iterations",
                                   std::move(residuals));
        }

        // Newton polish of the converged set, keeping the best residual per root
        for (int i = 0; i < n; ++i) {
            cxd best = z[i];
            double best_res = std::abs(detail::evaluate_with_derivative(coeffs, best).p);
            cxd cur = best;
            for (int it = 0; it < 30 && best_res > 0.0; ++it) {
                const auto ev = detail::evaluate_with_derivative(coeffs, cur);
                if (ev.dp == cxd{0.0, 0.0}) break;
                cur -= ev.p / ev.dp;
                const double res = std::abs(detail::evaluate_with_derivative(coeffs, cur).p);
                if (res < best_res) {
                    best = cur;
                    best_res = res;
                } else {
                    break;
                }
            }
            z[i] = best;
        }
    }

    z.insert(z.end(), zero_roots.begin(), zero_roots.end());
    std::sort(z.begin(), z.end(), [](cxd a, cxd b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });

    PolynomialRoots out;
    out.roots = std::move(z);
    out.iterations = iterations;
    for (const auto& root : out.roots)
        out.residuals.push_back(std::abs(detail::evaluate_with_derivative(scaled_full, root).p));
    out.multiplicities.assign(out.roots.size(), 1);
    for (std::size_t i = 0; i < out.roots.size(); ++i) {
        int count = 0;
        for (std::size_t j = 0; j < out.roots.size(); ++j)
            if (std::abs(out.roots[i] - out.roots[j]) < opts.cluster_tol) ++count;
        out.multiplicities[i] = count;
    }
    return out;
}

inline PolynomialRoots find_roots(const std::vector<double>& coeffs,
                                  const RootFindOptions& opts = {}) {
    std::vector<cxd> c(coeffs.begin(), coeffs.end());
    return find_roots(std::move(c), opts);
}

// Independent route: eigenvalues of the companion matrix of the monic polynomial.
inline std::vector<cxd> companion_matrix_roots(std::vector<cxd> coeffs) {
    if (coeffs.size() < 2) throw std::domain_error("companion_matrix_roots: degree must be >= 1");
    if (std::abs(coeffs.back()) == 0.0)
        throw std::domain_error("companion_matrix_roots: zero leading coefficient");
    const int n = static_cast<int>(coeffs.size()) - 1;
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -coeffs[i] / coeffs[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("companion matrix eigensolve failed");
    std::vector<cxd> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    std::sort(roots.begin(), roots.end(), [](cxd a, cxd b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return roots;
}

}  // namespace leeyang
