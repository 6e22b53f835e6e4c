// spin_model.hpp — S^z-conserving spin-1/2 bath models, probe coupling, and dense
// Hamiltonian construction in the sigma^z product basis

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "leeyang/common.hpp"
#include "leeyang/pauli.hpp"

namespace leeyang {

// Desk-scale caps: sector diagonalization tops out at C(14,7) = 3432 states,
// the full-space oracle at 2^13.
inline constexpr int kMaxBathSites = 14;
inline constexpr int kMaxOracleSites = 13;

enum class ModelKind { ising_zz, heisenberg };

inline const char* to_string(ModelKind k) {
    return k == ModelKind::ising_zz ? "ising_zz" : "heisenberg";
}

struct Coupling {
    int a{};
    int b{};
    double strength{};
};

// Bath Hamiltonian H = H' - h * sum_j sigma^z_j with H' fixed by `kind`:
//   ising_zz:   H' = -sum J_ab sigma^z_a sigma^z_b
//   heisenberg: H' = -sum J_ab (sigma_a . sigma_b)
struct SpinModel {
    int n_sites{1};
    ModelKind kind{ModelKind::ising_zz};
    std::vector<Coupling> couplings;
    double bath_field{0.0};  // h

    bool ferromagnetic() const {
        for (const auto& c : couplings)
            if (c.strength < 0.0) return false;
        return true;
    }
};

struct ProbeParams {
    double lambda{0.0};  // probe-bath coupling, H_int = -lambda sigma^z_probe sum_j sigma^z_j
    double h0{0.0};      // probe field, H_0 = -h0 sigma^z_probe
};

struct ThermalParams {
    double beta{1.0};
    double hbar{1.0};
};

struct HamiltonianOperator {
    Eigen::MatrixXcd matrix;
    Eigen::Index dim() const { return matrix.rows(); }
};

struct DimensionCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void validate(const SpinModel& model) {
    if (model.n_sites < 1) throw std::invalid_argument("spin model needs at least one site");
    std::vector<std::pair<int, int>> seen;
    for (const auto& c : model.couplings) {
        if (c.a < 0 || c.b >= model.n_sites || c.a >= c.b)
            throw std::invalid_argument("coupling (" + std::to_string(c.a) + ", " +
                                        std::to_string(c.b) + ") out of range for " +
                                        std::to_string(model.n_sites) + " sites");
        seen.emplace_back(c.a, c.b);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw std::invalid_argument("duplicate coupling pair");
}

inline void validate(const ThermalParams& thermal) {
    if (!(thermal.beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (!(thermal.hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
}

inline void ensure_site_cap(int n_sites, int cap, const char* what) {
    if (n_sites > cap)
        throw DimensionCapError(std::string(what) + ": " + std::to_string(n_sites) +
                                " sites exceeds cap of " + std::to_string(cap));
}

namespace detail {

// Adds the bath interaction H' acting on the low `model.n_sites` bits of an
// operator that may live on a larger register.
inline void add_bath_interaction(const SpinModel& model, Eigen::MatrixXcd& m) {
    const long dim = m.rows();
    for (long b = 0; b < dim; ++b) {
        double diag = 0.0;
        for (const auto& c : model.couplings) {
            const double zz = spin_sign(b, c.a) * spin_sign(b, c.b);
            diag -= c.strength * zz;
            if (model.kind == ModelKind::heisenberg && zz < 0.0) {
                // flip-flop: -J (sigma^x sigma^x + sigma^y sigma^y) = -2J (s+ s- + s- s+)
                const long b2 = b ^ (1L << c.a) ^ (1L << c.b);
                m(b2, b) += -2.0 * c.strength;
            }
        }
        m(b, b) += diag;
    }
}

}  // namespace detail

// H' only; the -h sum sigma^z field term is handled analytically downstream.
inline HamiltonianOperator build_bath_interaction(const SpinModel& model,
                                                  int site_cap = kMaxBathSites) {
    validate(model);
    ensure_site_cap(model.n_sites, site_cap, "bath interaction");
    const long dim = 1L << model.n_sites;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    detail::add_bath_interaction(model, m);
    return {std::move(m)};
}

// Diagonal operator sum_j sigma^z_j = 2 * popcount(b) - n on basis state b.
inline HamiltonianOperator total_sz_operator(int n_sites, int site_cap = kMaxBathSites) {
    if (n_sites < 1) throw std::invalid_argument("total_sz_operator needs n >= 1");
    ensure_site_cap(n_sites, site_cap, "total sigma^z");
    const long dim = 1L << n_sites;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (long b = 0; b < dim; ++b) m(b, b) = 2.0 * popcount_state(b) - n_sites;
    return {std::move(m)};
}

// max-entry magnitude of AB - BA
inline double commutator_norm(const HamiltonianOperator& a, const HamiltonianOperator& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("commutator_norm: dimension mismatch");
    return (a.matrix * b.matrix - b.matrix * a.matrix).cwiseAbs().maxCoeff();
}

inline double hermiticity_deviation(const HamiltonianOperator& op) {
    return (op.matrix - op.matrix.adjoint()).cwiseAbs().maxCoeff();
}

// Full H_T = H' - h Sz_bath - h0 sigma^z_probe - lambda sigma^z_probe Sz_bath on
// 2^(N+1) states, probe at the highest bit. Only the brute-force oracle uses this.
inline HamiltonianOperator build_total_hamiltonian(const SpinModel& model,
                                                   const ProbeParams& probe,
                                                   int site_cap = kMaxOracleSites) {
    validate(model);
    ensure_site_cap(model.n_sites + 1, site_cap, "total hamiltonian");
    const int probe_site = model.n_sites;
    const long dim = 1L << (model.n_sites + 1);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    detail::add_bath_interaction(model, m);
    const long bath_mask = (1L << model.n_sites) - 1;
    for (long b = 0; b < dim; ++b) {
        const double m_bath = 2.0 * popcount_state(b & bath_mask) - model.n_sites;
        const double z_probe = spin_sign(b, probe_site);
        m(b, b) += -model.bath_field * m_bath - probe.h0 * z_probe -
                   probe.lambda * z_probe * m_bath;
    }
    return {std::move(m)};
}

}  // namespace leeyang
