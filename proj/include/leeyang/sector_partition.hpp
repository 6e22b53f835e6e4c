// sector_partition.hpp — magnetization-sector spectra of H', the fugacity polynomial
// P(q) = sum_k W_k q^k with q = e^{2 beta h}, and complex-field partition evaluation

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "leeyang/common.hpp"
#include "leeyang/spin_model.hpp"

namespace leeyang {

// Eigenvalues of H' restricted to fixed magnetization; sector k holds the
// C(N, k) levels with k spins up (magnetization m = 2k - N).
struct SectorSpectrum {
    int n_sites{};
    std::vector<std::vector<double>> sectors;
    int magnetization(int k) const { return 2 * k - n_sites; }
};

// Z(beta, h) = e^{-beta h N} sum_k W_k q^k, W_k = sum_{E in sector k} e^{-beta E}.
// Weights are kept in log domain with a max-coefficient scale so root finding
// and evaluation stay accurate when beta * E spans hundreds of e-foldings.
struct LeeYangPolynomial {
    double beta{};
    std::vector<double> log_weights;   // log W_k
    std::vector<double> coefficients;  // W_k / max_k W_k, in (0, 1]
    double log_scale{};                // log max_k W_k
    int degree() const { return static_cast<int>(coefficients.size()) - 1; }
};

struct ComplexField {
    cxd value{};  // h-tilde
};

inline SectorSpectrum sector_spectra(const SpinModel& model, int site_cap = kMaxBathSites) {
    validate(model);
    ensure_site_cap(model.n_sites, site_cap, "sector spectra");
    const int n = model.n_sites;
    const long dim = 1L << n;

    std::vector<std::vector<long>> states_by_k(n + 1);
    for (long b = 0; b < dim; ++b) states_by_k[popcount_state(b)].push_back(b);

    SectorSpectrum out;
    out.n_sites = n;
    out.sectors.resize(n + 1);

    if (model.kind == ModelKind::ising_zz) {
        for (long b = 0; b < dim; ++b) {
            double e = 0.0;
            for (const auto& c : model.couplings)
                e -= c.strength * spin_sign(b, c.a) * spin_sign(b, c.b);
            out.sectors[popcount_state(b)].push_back(e);
        }
        for (auto& sec : out.sectors) std::sort(sec.begin(), sec.end());
        return out;
    }

    // heisenberg: dense real-symmetric block per sector
    std::vector<long> pos(dim, -1);
    for (int k = 0; k <= n; ++k) {
        const auto& states = states_by_k[k];
        const long m = static_cast<long>(states.size());
        for (long i = 0; i < m; ++i) pos[states[i]] = i;
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(m, m);
        for (long i = 0; i < m; ++i) {
            const long b = states[i];
            double diag = 0.0;
            for (const auto& c : model.couplings) {
                const double zz = spin_sign(b, c.a) * spin_sign(b, c.b);
                diag -= c.strength * zz;
                if (zz < 0.0) {
                    const long b2 = b ^ (1L << c.a) ^ (1L << c.b);
                    block(pos[b2], i) += -2.0 * c.strength;
                }
            }
            block(i, i) = diag;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("sector diagonalization failed");
        const double trace_gap = std::abs(solver.eigenvalues().sum() - block.trace());
        if (trace_gap > 1e-9 * std::max(1.0, std::abs(block.trace())))
            throw std::runtime_error("sector eigenvalues violate the trace identity");
        auto& sec = out.sectors[k];
        sec.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
    }
    return out;
}

inline LeeYangPolynomial lee_yang_polynomial(const SectorSpectrum& spectra,
                                             const ThermalParams& thermal) {
    validate(thermal);
    LeeYangPolynomial poly;
    poly.beta = thermal.beta;
    poly.log_weights.reserve(spectra.sectors.size());
    std::vector<double> exponents;
    for (const auto& sec : spectra.sectors) {
        exponents.clear();
        for (double e : sec) exponents.push_back(-thermal.beta * e);
        poly.log_weights.push_back(log_sum_exp(exponents));
    }
    poly.log_scale = *std::max_element(poly.log_weights.begin(), poly.log_weights.end());
    poly.coefficients.reserve(poly.log_weights.size());
    for (double lw : poly.log_weights) poly.coefficients.push_back(std::exp(lw - poly.log_scale));
    return poly;
}

// Z(beta, h~) = e^{-beta h~ N} * P(e^{2 beta h~}). Horner runs on whichever of
// q, 1/q has modulus <= 1; the power q^N moves into the scale exactly.
inline ScaledComplex evaluate_partition(const LeeYangPolynomial& poly, ComplexField field) {
    const int n = poly.degree();
    const auto& c = poly.coefficients;
    const cxd log_q = 2.0 * poly.beta * field.value;

    ScaledComplex poly_value;
    if (log_q.real() <= 0.0) {
        const cxd q = ScaledComplex::exp_of(log_q).value();
        cxd acc = 0.0;
        for (int k = n; k >= 0; --k) acc = acc * q + c[k];
        poly_value = ScaledComplex::from(acc);
    } else {
        const cxd r = ScaledComplex::exp_of(-log_q).value();
        cxd acc = 0.0;
        for (int k = 0; k <= n; ++k) acc = acc * r + c[k];  // sum_k c_k r^{n-k}
        poly_value = ScaledComplex::exp_of(static_cast<double>(n) * log_q) *
                     ScaledComplex::from(acc);
    }
    const ScaledComplex prefactor =
        ScaledComplex::exp_of(-static_cast<double>(n) * poly.beta * field.value);
    return prefactor * poly_value * ScaledComplex{cxd{1.0, 0.0}, poly.log_scale};
}

// Independent oracle route: Tr[e^{-beta H'} e^{beta h~ Sz}] from the full-space
// eigendecomposition of H' and the exact diagonal field factor per basis state.
// Valid because [H', Sz] = 0; never touches the sector construction above.
inline ScaledComplex brute_force_partition(const SpinModel& model, const ThermalParams& thermal,
                                           ComplexField field, int site_cap = kMaxBathSites) {
    validate(thermal);
    const HamiltonianOperator hp = build_bath_interaction(model, site_cap);
    const long dim = hp.dim();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hp.matrix);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("bath diagonalization failed");
    const Eigen::VectorXd& evals = solver.eigenvalues();
    const double e0 = evals.minCoeff();
    const Eigen::VectorXd boltzmann = (-thermal.beta * (evals.array() - e0)).exp();
    // diagonal of e^{-beta (H' - e0)} in the product basis
    const Eigen::VectorXd diag = solver.eigenvectors().cwiseAbs2() * boltzmann;

    const cxd beta_h = thermal.beta * field.value;
    const double mag_cap = model.n_sites * std::abs(beta_h.real());
    cxd acc = 0.0;
    for (long b = 0; b < dim; ++b) {
        const double m = 2.0 * popcount_state(b) - model.n_sites;
        acc += diag[b] * std::exp(beta_h * m - mag_cap);
    }
    return ScaledComplex{acc, mag_cap - thermal.beta * e0}.normalized();
}

}  // namespace leeyang
