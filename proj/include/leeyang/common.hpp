// common.hpp — scaled complex arithmetic and small numeric helpers shared by all modules

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>

namespace leeyang {

using cxd = std::complex<double>;

// Complex value carried as mantissa * exp(log_scale). Partition sums span
// e^{±beta*N*|h|} e-foldings, far past double range; the ratio Z/Z_T is O(1).
struct ScaledComplex {
    cxd mantissa{0.0, 0.0};
    double log_scale{0.0};

    static ScaledComplex zero() { return {}; }

    // e^z, exact for any Re z
    static ScaledComplex exp_of(cxd z) {
        return ScaledComplex{std::polar(1.0, z.imag()), z.real()};
    }

    static ScaledComplex from(cxd v) { return ScaledComplex{v, 0.0}.normalized(); }

    bool is_zero() const { return mantissa == cxd{0.0, 0.0}; }

    // Pull the magnitude into log_scale so |mantissa| == 1 (or 0).
    ScaledComplex normalized() const {
        const double a = std::abs(mantissa);
        if (a == 0.0 || !std::isfinite(a)) return *this;
        const double shift = std::log(a);
        return {mantissa / a, log_scale + shift};
    }

    double log_abs() const {
        const double a = std::abs(mantissa);
        if (a == 0.0) return -std::numeric_limits<double>::infinity();
        return std::log(a) + log_scale;
    }

    double arg() const { return std::arg(mantissa); }

    // May overflow to inf / underflow to 0 when the value leaves double range.
    cxd value() const { return mantissa * std::exp(log_scale); }
};

inline ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
    return ScaledComplex{a.mantissa * b.mantissa, a.log_scale + b.log_scale}.normalized();
}

inline ScaledComplex operator/(const ScaledComplex& a, const ScaledComplex& b) {
    return ScaledComplex{a.mantissa / b.mantissa, a.log_scale - b.log_scale}.normalized();
}

inline ScaledComplex operator*(const ScaledComplex& a, cxd b) {
    return a * ScaledComplex::from(b);
}

inline ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double s = std::max(a.log_scale, b.log_scale);
    const cxd m = a.mantissa * std::exp(a.log_scale - s) + b.mantissa * std::exp(b.log_scale - s);
    return ScaledComplex{m, s}.normalized();
}

// |a - b| / max(|a|, |b|) evaluated on the common scale.
inline double relative_difference(const ScaledComplex& a, const ScaledComplex& b) {
    if (a.is_zero() && b.is_zero()) return 0.0;
    const double s = std::max(a.log_scale, b.log_scale);
    const cxd ma = a.mantissa * std::exp(a.log_scale - s);
    const cxd mb = b.mantissa * std::exp(b.log_scale - s);
    return std::abs(ma - mb) / std::max(std::abs(ma), std::abs(mb));
}

// log(sum exp(x_k)) without overflow; -inf for an empty span.
inline double log_sum_exp(std::span<const double> xs) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : xs) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

// Deterministic uniform double in [0, 1) from a 64-bit word; avoids the
// implementation-defined std::uniform_real_distribution so seeded runs are
// byte-identical everywhere.
inline double uniform_unit(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

template <typename Rng>
double uniform_in(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng());
}

}  // namespace leeyang
