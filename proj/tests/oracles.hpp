#pragma once

// Brute-force reference implementations. They share no code with the
// library beyond integer typedefs.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using cplx = std::complex<double>;

inline bool is_prime(u64 x) {
    if (x < 2) return false;
    for (u64 d = 2; d * d <= x; ++d) {
        if (x % d == 0) return false;
    }
    return true;
}

inline unsigned big_omega(u64 x) {
    unsigned k = 0;
    for (u64 d = 2; d * d <= x; ++d) {
        while (x % d == 0) {
            x /= d;
            ++k;
        }
    }
    return k + (x > 1 ? 1 : 0);
}

inline u64 smallest_factor(u64 x) {
    for (u64 d = 2; d * d <= x; ++d) {
        if (x % d == 0) return d;
    }
    return x;
}

// Distinct prime factors, increasing.
inline std::vector<u64> prime_factors(u64 x) {
    std::vector<u64> f;
    for (u64 d = 2; d * d <= x; ++d) {
        if (x % d == 0) {
            f.push_back(d);
            while (x % d == 0) x /= d;
        }
    }
    if (x > 1) f.push_back(x);
    return f;
}

inline bool squarefree(u64 x) {
    for (u64 d = 2; d * d <= x; ++d) {
        if (x % (d * d) == 0) return false;
    }
    return true;
}

inline int moebius(u64 x) {
    if (!squarefree(x)) return 0;
    return prime_factors(x).size() % 2 == 0 ? 1 : -1;
}

inline u64 euler_phi(u64 x) {
    u64 r = x;
    for (u64 p : prime_factors(x)) r = r / p * (p - 1);
    return r;
}

inline bool chen_basic(u64 p) { return is_prime(p) && big_omega(p + 2) <= 2; }

// Rosser coefficient straight from the definition with long double products.
inline int rosser(u64 d, long double D, bool plus) {
    if (!squarefree(d)) return 0;
    auto ps = prime_factors(d);
    std::vector<u64> desc(ps.rbegin(), ps.rend());
    const std::size_t k = desc.size();
    long double prefix = 1;
    for (std::size_t j = 1; j <= k; ++j) {
        const long double p = static_cast<long double>(desc[j - 1]);
        const bool checked = plus ? (j % 2 == 1) : (j % 2 == 0);
        if (checked && !(prefix * p * p * p < D)) return 0;
        prefix *= p;
    }
    return k % 2 == 0 ? 1 : -1;
}

// F and f by trapezoid steps on the delay system, starting from the closed forms.
inline auto linear_sieve_trapezoid(unsigned per, double s_max) {
    const double c = 2.0 * std::exp(std::numbers::egamma), h = 1.0 / per;
    const std::size_t n = static_cast<std::size_t>((s_max - 1.0) * per) + 2;
    std::vector<double> sF(n), sf(n);
    auto s_at = [&](std::size_t i) { return 1.0 + static_cast<double>(i) * h; };
    for (std::size_t i = 0; i < n; ++i) {
        const double s = s_at(i);
        sF[i] = c;
        sf[i] = s <= 2.0 ? 0.0 : c * std::log(s - 1.0);
    }
    for (std::size_t i = 2 * per + 1; i < n; ++i) {
        sF[i] = sF[i - 1] + 0.5 * h * (sf[i - 1 - per] / s_at(i - 1 - per) + sf[i - per] / s_at(i - per));
        if (i > 3 * per) {
            sf[i] = sf[i - 1] + 0.5 * h * (sF[i - 1 - per] / s_at(i - 1 - per) + sF[i - per] / s_at(i - per));
        }
    }
    return [=](double s) {
        const double pos = (s - 1.0) * per;
        const std::size_t i = static_cast<std::size_t>(pos);
        const double t = pos - static_cast<double>(i);
        return std::pair{(sF[i] + t * (sF[i + 1] - sF[i])) / s, (sf[i] + t * (sf[i + 1] - sf[i])) / s};
    };
}

inline cplx e(double t) { return std::polar(1.0, 2.0 * std::numbers::pi * t); }

inline std::vector<cplx> dft(const std::vector<double>& f) {
    const std::size_t n = f.size();
    std::vector<cplx> out(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t x = 0; x < n; ++x) {
            out[r] += f[x] * e(-static_cast<double>((x * r) % n) / static_cast<double>(n));
        }
    }
    return out;
}

inline std::vector<double> convolve(const std::vector<double>& f, const std::vector<double>& g) {
    const std::size_t n = f.size();
    std::vector<double> h(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) h[x] += f[y] * g[(x + n - y) % n];
    }
    return h;
}

inline double triple(const std::vector<double>& f, const std::vector<double>& g, const std::vector<double>& h, u64 t) {
    const std::size_t n = f.size();
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) {
                if ((a + b + c) % n == t % n) s += f[a] * g[b] * h[c];
            }
        }
    }
    return s;
}

// Quadruples x1 + x4 = x2 + x3; x4 is determined.
inline double energy(const std::vector<double>& f) {
    const std::size_t n = f.size();
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) s += f[a] * f[b] * f[c] * f[(b + c + n - a) % n];
        }
    }
    return s;
}

inline u64 sumset_count(u64 N, const std::vector<u64>& X1, const std::vector<u64>& X2, const std::vector<u64>& X3,
                        u64 y) {
    u64 c = 0;
    for (u64 a : X1) {
        for (u64 b : X2) {
            for (u64 d : X3) {
                if ((a + b + d) % N == y % N) ++c;
            }
        }
    }
    return c;
}

} // namespace oracle
