#pragma once

// Functions on Z_N: transforms, convolution, large spectra, Bohr sets and
// the triple sum over x1 + x2 + x3 = t.
//
//   f~(r) = sum_x f(x) e(-x r / N)

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "chenprime/errors.hpp"
#include "chenprime/numeric.hpp"
#include "chenprime/parallel.hpp"

namespace chenprime {

namespace detail {

// e(-k / n) for k in [0, n)
inline std::vector<cplx> negative_roots(u64 n) {
    std::vector<cplx> w(n);
    for (u64 k = 0; k < n; ++k) w[k] = unit_phase(-static_cast<i64>(k), static_cast<i64>(n));
    return w;
}

// In-place radix-2 transform, a[k] <- sum_j a[j] e(sign j k / n), n a power of two.
inline void fft_pow2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    std::vector<cplx> roots(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        roots[k] = unit_phase(sign * static_cast<i64>(k), static_cast<i64>(n));
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * roots[k * stride];
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

// sum_x a[x] e(sign x r / N) for every r.
inline std::vector<cplx> dft_complex(const std::vector<cplx>& a, int sign, unsigned threads = 1) {
    const u64 n = a.size();
    std::vector<cplx> out(n);
    if (n == 0) return out;
    if (n <= 1024) {
        auto w = negative_roots(n);
        if (sign > 0) {
            for (auto& z : w) z = std::conj(z);
        }
        parallel_for(n, threads, [&](std::size_t r) {
            cplx acc{};
            u64 idx = 0;
            for (u64 x = 0; x < n; ++x) {
                acc += a[x] * w[idx];
                idx += r;
                if (idx >= n) idx -= n;
            }
            out[r] = acc;
        });
        return out;
    }
    // Bluestein: x r = (x^2 + r^2 - (r - x)^2) / 2, chirp index k^2 mod 2N.
    const u64 two_n = 2 * n;
    std::vector<cplx> chirp(n);
    for (u64 k = 0; k < n; ++k) {
        const u64 k2 = mul_mod(k, k, two_n);
        chirp[k] = unit_phase(sign * static_cast<i64>(k2), static_cast<i64>(two_n));
    }
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;
    std::vector<cplx> u(m), v(m);
    for (u64 x = 0; x < n; ++x) u[x] = a[x] * chirp[x];
    v[0] = std::conj(chirp[0]);
    for (u64 k = 1; k < n; ++k) v[k] = v[m - k] = std::conj(chirp[k]);
    fft_pow2(u, -1);
    fft_pow2(v, -1);
    for (std::size_t i = 0; i < m; ++i) u[i] *= v[i];
    fft_pow2(u, +1);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (u64 r = 0; r < n; ++r) out[r] = chirp[r] * u[r] * inv_m;
    return out;
}

} // namespace detail

inline u64 default_dft_budget() { return u64{1} << 24; }

class ZnWeight {
public:
    ZnWeight() = default;

    explicit ZnWeight(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) throw DomainError("ZnWeight: N must be >= 1");
        for (std::size_t x = 0; x < values_.size(); ++x) {
            if (!(values_[x] >= 0.0)) {
                throw DomainError("ZnWeight: value at " + std::to_string(x) + " is negative or NaN");
            }
        }
    }

    static ZnWeight zeros(u64 N) { return ZnWeight(std::vector<double>(N, 0.0)); }

    static ZnWeight point_mass(u64 N, u64 at, double mass = 1.0) {
        std::vector<double> v(N, 0.0);
        v[at % N] = mass;
        return ZnWeight(std::move(v));
    }

    static ZnWeight uniform(u64 N) { return ZnWeight(std::vector<double>(N, 1.0 / static_cast<double>(N))); }

    // Normalized indicator 1_S / |S|.
    static ZnWeight normalized_indicator(u64 N, const std::vector<u64>& members) {
        if (members.empty()) throw DomainError("ZnWeight: cannot normalize an empty set");
        std::vector<double> v(N, 0.0);
        const double w = 1.0 / static_cast<double>(members.size());
        for (u64 x : members) v[x % N] = w;
        return ZnWeight(std::move(v));
    }

    u64 N() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    double operator[](u64 x) const { return values_[x]; }

    double mass() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }
    double sup() const { return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end()); }
    std::size_t support_size() const {
        return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](double v) { return v > 0.0; }));
    }

    // Transform on the full grid, computed once and shared by copies.
    const std::vector<cplx>& transform(unsigned threads = 1) const {
        std::call_once(cache_->once, [&] {
            if (N() > default_dft_budget()) {
                throw ResourceError("ZnWeight: N = " + std::to_string(N()) + " exceeds the DFT budget");
            }
            std::vector<cplx> a(values_.begin(), values_.end());
            cache_->dft = detail::dft_complex(a, -1, threads);
        });
        return cache_->dft;
    }

private:
    struct Cache {
        std::once_flag once;
        std::vector<cplx> dft;
    };
    std::vector<double> values_;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

inline std::vector<cplx> dft(const ZnWeight& f, unsigned threads = 1) { return f.transform(threads); }

// f~(r) at a single frequency by direct summation.
inline cplx dft_at(const ZnWeight& f, u64 r) {
    const u64 n = f.N();
    cplx acc{};
    for (u64 x = 0; x < n; ++x) {
        if (f[x] != 0.0) acc += f[x] * unit_phase(-static_cast<i64>(mul_mod(x, r % n, n)), static_cast<i64>(n));
    }
    return acc;
}

// f(x) = (1/N) sum_r F(r) e(x r / N)
inline std::vector<cplx> idft(const std::vector<cplx>& F, unsigned threads = 1) {
    auto out = detail::dft_complex(F, +1, threads);
    const double inv = 1.0 / static_cast<double>(F.size());
    for (auto& z : out) z *= inv;
    return out;
}

// Real part of an inverse transform, with round-off negatives clipped to zero.
inline ZnWeight real_weight_from_transform(const std::vector<cplx>& F, double scale_hint, unsigned threads = 1) {
    const auto back = idft(F, threads);
    std::vector<double> v(back.size());
    const double floor_tol = 1e-12 * std::max(scale_hint, 1e-300);
    for (std::size_t i = 0; i < back.size(); ++i) {
        const double re = back[i].real();
        if (re < -floor_tol) throw InvariantViolation("ZnWeight: transform of a nonnegative weight came back negative");
        v[i] = std::max(re, 0.0);
    }
    return ZnWeight(std::move(v));
}

inline void require_same_N(const ZnWeight& f, const ZnWeight& g, const char* what) {
    if (f.N() != g.N()) {
        throw DomainError(std::string(what) + ": mismatched N (" + std::to_string(f.N()) + " vs " +
                          std::to_string(g.N()) + ")");
    }
}

inline ZnWeight convolve_direct(const ZnWeight& f, const ZnWeight& g) {
    require_same_N(f, g, "convolve_direct");
    const u64 n = f.N();
    std::vector<double> h(n, 0.0);
    for (u64 y = 0; y < n; ++y) {
        if (f[y] == 0.0) continue;
        for (u64 x = 0; x < n; ++x) h[(x + y) % n] += f[y] * g[x];
    }
    return ZnWeight(std::move(h));
}

// (f * g)(x) = sum_y f(y) g(x - y)
inline ZnWeight convolve(const ZnWeight& f, const ZnWeight& g, unsigned threads = 1) {
    require_same_N(f, g, "convolve");
    const auto& F = f.transform(threads);
    const auto& G = g.transform(threads);
    std::vector<cplx> H(F.size());
    for (std::size_t r = 0; r < F.size(); ++r) H[r] = F[r] * G[r];
    return real_weight_from_transform(H, f.sup() * g.mass() + g.sup() * f.mass(), threads);
}

// ---------------------------------------------------------------------------

struct Spectrum {
    double delta;
    std::vector<u64> members;
    double fourth_moment;     // sum_r |f~(r)|^4
    double chebyshev_bound;   // delta^-4 sum_r |f~(r)|^4
    bool bound_ok;
};

// {r : |f~(r)| > delta}
inline Spectrum spectrum(const ZnWeight& f, double delta, unsigned threads = 1) {
    if (!(delta > 0.0)) throw DomainError("spectrum: delta must be positive");
    const auto& F = f.transform(threads);
    Spectrum s{delta, {}, 0.0, 0.0, false};
    for (u64 r = 0; r < F.size(); ++r) {
        const double a = std::abs(F[r]);
        s.fourth_moment += a * a * a * a;
        if (a > delta) s.members.push_back(r);
    }
    s.chebyshev_bound = s.fourth_moment / (delta * delta * delta * delta);
    s.bound_ok = static_cast<double>(s.members.size()) <= s.chebyshev_bound || s.members.empty();
    return s;
}

struct BohrSet {
    std::vector<u64> frequencies;
    double epsilon;
    u64 N;
    std::vector<u64> members;
    i64 size_lower_bound;   // ceil(eps^|R| N) - 1
    bool size_ok;
};

// Largest k with k/N <= eps, so that ||x r / N|| <= eps <=> min(k, N - k) <= limit.
inline u64 bohr_limit(double epsilon, u64 N) {
    return static_cast<u64>(std::floor(epsilon * static_cast<double>(N) + 1e-9));
}

inline BohrSet bohr_set(const std::vector<u64>& frequencies, double epsilon, u64 N) {
    if (!(epsilon > 0.0 && epsilon <= 0.5)) throw DomainError("bohr_set: need 0 < eps <= 1/2");
    if (N == 0) throw DomainError("bohr_set: N must be >= 1");
    BohrSet b{frequencies, epsilon, N, {}, 0, false};
    const u64 limit = bohr_limit(epsilon, N);
    for (u64 x = 0; x < N; ++x) {
        bool in = true;
        for (u64 r : frequencies) {
            const u64 k = mul_mod(x, r % N, N);
            if (std::min(k, N - k) > limit) {
                in = false;
                break;
            }
        }
        if (in) b.members.push_back(x);
    }
    const double lb = std::pow(epsilon, static_cast<double>(frequencies.size())) * static_cast<double>(N);
    b.size_lower_bound = static_cast<i64>(std::ceil(lb - 1e-9)) - 1;
    b.size_ok = static_cast<i64>(b.members.size()) >= b.size_lower_bound;
    return b;
}

// ---------------------------------------------------------------------------

struct TripleSum {
    double direct;
    double fourier;
    double scale;      // ||f||_2 ||g||_2 ||h||_1, an upper bound for either side
    double rel_diff;   // |direct - fourier| / scale
};

// sum_{x1 + x2 + x3 = t} f(x1) g(x2) h(x3)
inline double triple_sum_direct(const ZnWeight& f, const ZnWeight& g, const ZnWeight& h, u64 t,
                                unsigned threads = 1) {
    require_same_N(f, g, "triple_sum");
    require_same_N(f, h, "triple_sum");
    const u64 n = f.N();
    t %= n;
    return blocked_sum<double>(n, [&](std::size_t x1) {
        if (f[x1] == 0.0) return 0.0;
        double acc = 0.0;
        // x3 = t - x1 - x2 walks down as x2 walks up
        u64 x3 = (t + 2 * n - x1) % n;
        for (u64 x2 = 0; x2 < n; ++x2) {
            acc += g[x2] * h[x3];
            x3 = x3 == 0 ? n - 1 : x3 - 1;
        }
        return f[x1] * acc;
    }, threads, 64);
}

inline double triple_sum_fourier(const ZnWeight& f, const ZnWeight& g, const ZnWeight& h, u64 t,
                                 unsigned threads = 1) {
    require_same_N(f, g, "triple_sum");
    require_same_N(f, h, "triple_sum");
    const u64 n = f.N();
    const auto& F = f.transform(threads);
    const auto& G = g.transform(threads);
    const auto& H = h.transform(threads);
    const cplx s = blocked_sum<cplx>(n, [&](std::size_t r) {
        return F[r] * G[r] * H[r] * unit_phase(static_cast<i64>(mul_mod(t % n, r, n)), static_cast<i64>(n));
    }, threads);
    return s.real() / static_cast<double>(n);
}

inline TripleSum triple_sum(const ZnWeight& f, const ZnWeight& g, const ZnWeight& h, u64 t, unsigned threads = 1) {
    TripleSum s{};
    s.direct = triple_sum_direct(f, g, h, t, threads);
    s.fourier = triple_sum_fourier(f, g, h, t, threads);
    auto l2 = [](const ZnWeight& w) {
        double a = 0.0;
        for (double v : w.values()) a += v * v;
        return std::sqrt(a);
    };
    s.scale = l2(f) * l2(g) * h.mass();
    s.rel_diff = s.scale > 0.0 ? std::abs(s.direct - s.fourier) / s.scale : std::abs(s.direct - s.fourier);
    return s;
}

// ---------------------------------------------------------------------------

struct EnergyReport {
    double energy_count;   // sum over x1 + x4 = x2 + x3 of f f f f
    double moment4;        // sum_r |f~(r)|^4
    double rel_err;        // |moment4 - N energy| / (N energy)
};

// Energy as sum_s (f * f)(s)^2 with the autoconvolution done by a direct
// double loop, against the fourth moment of the transform.
inline EnergyReport additive_energy(const ZnWeight& f, unsigned threads = 1) {
    const u64 n = f.N();
    std::vector<double> auto_conv(n, 0.0);
    for (u64 y = 0; y < n; ++y) {
        if (f[y] == 0.0) continue;
        for (u64 x = 0; x < n; ++x) auto_conv[(x + y) % n] += f[y] * f[x];
    }
    EnergyReport e{};
    for (double c : auto_conv) e.energy_count += c * c;
    for (const auto& z : f.transform(threads)) {
        const double a2 = std::norm(z);
        e.moment4 += a2 * a2;
    }
    const double ref = static_cast<double>(n) * e.energy_count;
    e.rel_err = ref > 0.0 ? std::abs(e.moment4 - ref) / ref : std::abs(e.moment4);
    return e;
}

} // namespace chenprime
