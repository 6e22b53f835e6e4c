// pauli.hpp — single-site Pauli matrices and their embedding into a bit-indexed register
//
// Basis convention used throughout: basis index bit j = 1 means spin j up
// (sigma^z eigenvalue +1), so the 2x2 blocks are ordered (down, up) and the
// magnetization of basis state b is 2*popcount(b) - n.

#pragma once

#include <Eigen/Dense>

#include <bit>
#include <cstdint>

#include "leeyang/common.hpp"

namespace leeyang {

inline Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

inline Eigen::Matrix2cd pauli_y() {
    Eigen::Matrix2cd m;
    m << 0.0, cxd(0.0, 1.0), cxd(0.0, -1.0), 0.0;
    return m;
}

inline Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd m;
    m << -1.0, 0.0, 0.0, 1.0;
    return m;
}

inline Eigen::Matrix2cd pauli_identity() { return Eigen::Matrix2cd::Identity(); }

// sigma^- : up -> down (annihilates down)
inline Eigen::Matrix2cd pauli_minus() {
    Eigen::Matrix2cd m;
    m << 0.0, 1.0, 0.0, 0.0;
    return m;
}

inline Eigen::Matrix2cd pauli_plus() { return pauli_minus().adjoint().eval(); }

// Embed a single-site operator at `site` of an n_sites register.
inline Eigen::MatrixXcd site_operator(const Eigen::Matrix2cd& op, int site, int n_sites) {
    const long dim = 1L << n_sites;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    const long mask = 1L << site;
    for (long b = 0; b < dim; ++b) {
        const int in = (b & mask) ? 1 : 0;
        for (int out = 0; out < 2; ++out) {
            const cxd v = op(out, in);
            if (v == 0.0) continue;
            const long b2 = (b & ~mask) | (out ? mask : 0L);
            m(b2, b) += v;
        }
    }
    return m;
}

inline int popcount_state(std::uint64_t b) { return std::popcount(b); }

// sigma^z eigenvalue of site on basis state b
inline int spin_sign(std::uint64_t b, int site) { return (b >> site) & 1u ? +1 : -1; }

}  // namespace leeyang
