#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace germflow {

/// Coefficient field of an analysis session. All polynomials of a family
/// share one tag; Real data is stored with zero imaginary parts.
enum class FieldTag { Real, Complex };

using Scalar = std::complex<double>;

/// A point of K^n (optionally extended by a trailing t-coordinate).
using Point = std::vector<Scalar>;

/// Gradient under the conjugation convention: over C the stored components
/// are the conjugated partials, so contracting the raw differential against
/// the gradient of the same function yields |grad|^2.
using GradientVector = std::vector<Scalar>;

inline bool is_finite(Scalar z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline bool is_finite(std::span<const Scalar> v) {
    for (const Scalar& z : v)
        if (!is_finite(z)) return false;
    return true;
}

/// Hermitian inner product <a,b> = sum a_i * conj(b_i).
inline Scalar hermitian_dot(std::span<const Scalar> a, std::span<const Scalar> b) {
    Scalar acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
    return acc;
}

inline double norm_sq(std::span<const Scalar> v) {
    double acc = 0.0;
    for (const Scalar& z : v) acc += std::norm(z);
    return acc;
}

inline double vec_norm(std::span<const Scalar> v) { return std::sqrt(norm_sq(v)); }

// Deterministic, implementation-independent uniform draws. std::
// distributions are not pinned by the standard, so seeded suites use these.
inline double uniform_unit(std::uint64_t raw) {
    return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

template <typename Rng>
double uniform_in(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng());
}

template <typename Rng>
int uniform_int_in(Rng& rng, int lo, int hi) {  // inclusive bounds
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(rng() % span);
}

}  // namespace germflow
