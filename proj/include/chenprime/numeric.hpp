#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>

#include "chenprime/errors.hpp"

namespace chenprime {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;
using cplx = std::complex<double>;

inline constexpr double kEulerGamma = std::numbers::egamma;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// e(t) = exp(2 pi i t); t is first folded into [-1/2, 1/2].
inline cplx unit_phase(double t) {
    t -= std::nearbyint(t);
    return {std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
}

// e(k / q) for integers, reduced exactly before the float conversion.
inline cplx unit_phase(i64 k, i64 q) {
    i64 r = k % q;
    if (r < 0) r += q;
    if (2 * r > q) r -= q;
    return unit_phase(static_cast<double>(r) / static_cast<double>(q));
}

inline i64 mod_floor(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline u64 mul_mod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

// Inverse of a modulo m; throws if gcd(a, m) != 1.
inline i64 inverse_mod(i64 a, i64 m) {
    if (m == 1) return 0;
    i64 old_r = mod_floor(a, m), r = m;
    i64 old_s = 1, s = 0;
    while (r != 0) {
        const i64 q = old_r / r;
        i64 t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) throw DomainError("inverse_mod: argument not invertible");
    return mod_floor(old_s, m);
}

// Distance from t to the nearest integer.
inline double circle_norm(double t) { return std::abs(t - std::nearbyint(t)); }

// Largest integer strictly below a real bound: x < bound  <=>  x <= strict_floor(bound).
inline u64 strict_floor(double bound) {
    if (bound <= 0.0) return 0;
    const double c = std::ceil(bound);
    return static_cast<u64>(c) - 1;
}

} // namespace chenprime
