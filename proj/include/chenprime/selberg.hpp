#pragma once

// Two-stage Selberg upper-bound sieve for pairs p, p + WM.
//
// Stage 1 sifts F1(x) = (Wx+b)(Wx+WM+b)(Wx+b+2)(Wx+WM+b+2) by the primes
// below z0; stage 2 sifts (Wx+b)(Wx+WM+b) by the primes in [z0, z1).
// omega(p) is the number of roots of the stage's polynomial mod p.
//
//   g(p) = omega(p) / (p - omega(p)),   G = sum_{l | P, l < z} g(l)
//   lambda(d) = mu(d) d / omega(d) * sum_{d | l, l < z} g(l) / G

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "chenprime/arith.hpp"
#include "chenprime/errors.hpp"
#include "chenprime/numeric.hpp"

namespace chenprime {

struct SelbergEntry {
    u64 d;
    std::vector<u64> primes;   // increasing
    u64 omega;                 // omega(d), multiplicative
    double g;                  // g(d)
    double lambda;
};

struct SelbergSystem {
    int stage = 1;
    u64 M = 1;
    u64 W = 2;
    double z_lo = 2.0;
    double z_hi = 2.0;
    std::vector<std::pair<u64, unsigned>> omega;   // sieving primes with omega(p) > 0
    std::vector<u64> obstructed;                   // primes with omega(p) = p, left unsifted
    double G = 1.0;
    std::vector<SelbergEntry> support;             // sorted by d; support[0] is d = 1

    double lambda(u64 d) const {
        auto it = std::lower_bound(support.begin(), support.end(), d,
                                   [](const SelbergEntry& e, u64 v) { return e.d < v; });
        return (it != support.end() && it->d == d) ? it->lambda : 0.0;
    }

    double max_abs_lambda() const {
        double m = 0.0;
        for (const auto& e : support) m = std::max(m, std::abs(e.lambda));
        return m;
    }
};

// Offsets whose residues are counted: Wx + b + c for c in the list.
inline std::vector<u64> selberg_offsets(int stage, u64 W, u64 M) {
    if (stage == 1) return {0, W * M, 2, W * M + 2};
    return {0, W * M};
}

// Number of x mod p with p | prod (Wx + b + c). For p | W no root exists
// (gcd(b(b+2), W) = 1); otherwise it is the number of distinct c mod p.
inline unsigned selberg_omega(u64 p, int stage, u64 W, u64 M) {
    if (W % p == 0) return 0;
    std::vector<u64> r;
    for (u64 c : selberg_offsets(stage, W, M)) r.push_back(c % p);
    std::sort(r.begin(), r.end());
    return static_cast<unsigned>(std::unique(r.begin(), r.end()) - r.begin());
}

inline SelbergSystem build_selberg_levels(int stage, u64 M, u64 W, double z_lo, double z_hi,
                                          u64 max_support = u64{1} << 20) {
    if (stage != 1 && stage != 2) throw ConfigError("build_selberg: stage must be 1 or 2");
    if (M < 1) throw ConfigError("build_selberg: M must be >= 1");
    if (W == 0 || W % 2 != 0) throw ConfigError("build_selberg: W must be a positive even integer");
    SelbergSystem s;
    s.stage = stage;
    s.M = M;
    s.W = W;
    s.z_lo = z_lo;
    s.z_hi = z_hi;
    // Every squarefree l < z_hi is a candidate, so the support can be as large as z_hi.
    if (z_hi > static_cast<double>(max_support)) {
        throw ResourceError("build_selberg: level " + std::to_string(z_hi) + " exceeds the support cap " +
                            std::to_string(max_support));
    }
    const u64 limit = strict_floor(z_hi);   // l < z_hi
    const PrimeSet ps(std::max<u64>(limit, 2));
    for (u64 p : ps.primes()) {
        const double pd = static_cast<double>(p);
        if (pd < z_lo || pd >= z_hi) continue;
        const unsigned w = selberg_omega(p, stage, W, M);
        if (w == 0) continue;
        if (w >= p) {
            s.obstructed.push_back(p);
            continue;
        }
        s.omega.push_back({p, w});
    }

    // Squarefree l < z_hi over the sieving primes, by depth-first extension.
    std::vector<SelbergEntry> all;
    std::vector<u64> chain;
    auto dfs = [&](auto&& self, std::size_t from, u64 prod, u64 om, double g) -> void {
        all.push_back({prod, chain, om, g, 0.0});
        for (std::size_t i = from; i < s.omega.size(); ++i) {
            const auto [p, w] = s.omega[i];
            if (static_cast<u128>(prod) * p > limit) break;
            chain.push_back(p);
            self(self, i + 1, prod * p, om * w, g * static_cast<double>(w) / static_cast<double>(p - w));
            chain.pop_back();
        }
    };
    dfs(dfs, 0, 1, 1, 1.0);
    std::sort(all.begin(), all.end(), [](const SelbergEntry& a, const SelbergEntry& b) { return a.d < b.d; });

    std::unordered_map<u64, std::size_t> index;
    for (std::size_t i = 0; i < all.size(); ++i) index.emplace(all[i].d, i);
    std::vector<double> tail(all.size(), 0.0);   // sum_{d | l} g(l)
    for (const auto& l : all) {
        const std::size_t k = l.primes.size();
        for (u64 mask = 0; mask < (u64{1} << k); ++mask) {
            u64 d = 1;
            for (std::size_t i = 0; i < k; ++i) {
                if (mask >> i & 1U) d *= l.primes[i];
            }
            tail[index.at(d)] += l.g;
        }
    }
    s.G = tail[0];
    for (std::size_t i = 0; i < all.size(); ++i) {
        auto& e = all[i];
        const double sign = (e.primes.size() % 2 == 0) ? 1.0 : -1.0;
        e.lambda = sign * static_cast<double>(e.d) / static_cast<double>(e.omega) * tail[i] / s.G;
    }
    s.support = std::move(all);
    return s;
}

// z0 = n^{1/k0}; z1 = n^{1/10}. Stage 1 covers [2, z0), stage 2 covers [z0, z1).
inline SelbergSystem build_selberg(int stage, u64 M, u64 W, u64 n, unsigned k0, std::optional<double> z0 = std::nullopt,
                                   std::optional<double> z1 = std::nullopt) {
    if (k0 == 0) throw ConfigError("build_selberg: k0 must be positive");
    const double nd = static_cast<double>(n);
    const double lo = z0.value_or(std::pow(nd, 1.0 / k0));
    const double hi = z1.value_or(std::pow(nd, 0.1));
    if (stage == 1) return build_selberg_levels(1, M, W, 2.0, lo);
    return build_selberg_levels(2, M, W, lo, std::max(lo, hi));
}

// Exact rational G, for cross-checking the double accumulation.
inline boost::multiprecision::cpp_rational selberg_G_exact(const SelbergSystem& s) {
    using boost::multiprecision::cpp_rational;
    std::unordered_map<u64, unsigned> w;
    for (const auto& [p, om] : s.omega) w.emplace(p, om);
    cpp_rational G = 0;
    for (const auto& e : s.support) {
        cpp_rational g = 1;
        for (u64 p : e.primes) g *= cpp_rational(w.at(p), p - w.at(p));
        G += g;
    }
    return G;
}

struct QuadraticForm {
    double value;       // sum lambda(d1) lambda(d2) omega([d1,d2]) / [d1,d2]
    double expected;    // 1 / G
    double rel_err;
    double remainder;   // sum |lambda(d1) lambda(d2)| omega([d1,d2])
};

inline QuadraticForm selberg_quadratic_form(const SelbergSystem& s) {
    QuadraticForm q{0.0, 1.0 / s.G, 0.0, 0.0};
    std::unordered_map<u64, unsigned> w;
    for (const auto& [p, om] : s.omega) w.emplace(p, om);
    for (const auto& a : s.support) {
        for (const auto& b : s.support) {
            const u64 g = std::gcd(a.d, b.d);
            u64 og = 1;
            for (u64 p : a.primes) {
                if (g % p == 0) og *= w.at(p);
            }
            const double om = static_cast<double>(a.omega) * static_cast<double>(b.omega) / static_cast<double>(og);
            const double l = static_cast<double>(a.d / g) * static_cast<double>(b.d);
            const double ll = a.lambda * b.lambda;
            q.value += ll * om / l;
            q.remainder += std::abs(ll) * om;
        }
    }
    q.rel_err = std::abs(q.value - q.expected) / q.expected;
    return q;
}

// ---------------------------------------------------------------------------

struct PairCountBound {
    u64 n, W, b, M;
    double z0, z1;
    u64 X;                  // x ranges over [0, X], X = floor((n - b) / W)
    u64 exact_count;        // pairs p1, p1 + WM <= n, both = b (W), spf(p_i + 2) >= z0
    u64 small_pairs;        // of those, pairs with p1 < z1 (not seen by the sieve)
    double sieve_sum;       // sum_x (sum lambda1)^2 (sum lambda2)^2, evaluated exactly per x
    double main_term;       // (X + 1) / (G1 G2)
    double remainder;       // R1 R2
    double sieve_bound;     // main + remainder + small_pairs
    double G1, G2;
    bool ok;                // exact <= small + sieve_sum <= sieve_bound
};

inline PairCountBound pair_count_bound(u64 n, u64 W, u64 b, u64 M, double z0, double z1,
                                       const Budget& budget = Budget::from_env()) {
    if (W == 0 || W % 2 != 0 || b < 1 || b > W || std::gcd(b, W) != 1 || std::gcd(b + 2, W) != 1) {
        throw ConfigError("pair_count_bound: need W even and gcd(b(b+2), W) = 1");
    }
    if (M < 1) throw ConfigError("pair_count_bound: M must be >= 1");
    if (n < b) throw ConfigError("pair_count_bound: n must be >= b");
    const auto s1 = build_selberg_levels(1, M, W, 2.0, z0);
    const auto s2 = build_selberg_levels(2, M, W, z0, std::max(z0, z1));
    const auto q1 = selberg_quadratic_form(s1);
    const auto q2 = selberg_quadratic_form(s2);

    PairCountBound r{n, W, b, M, z0, z1, (n - b) / W, 0, 0, 0.0, 0.0, 0.0, 0.0, s1.G, s2.G, false};
    const u64 shift = W * M;
    const FactorTable table(1, n + 2, budget);
    for (u64 p1 = b; p1 + shift <= n; p1 += W) {
        const u64 p2 = p1 + shift;
        if (!table.is_prime(p1) || !table.is_prime(p2)) continue;
        if (static_cast<double>(table.spf(p1 + 2)) < z0 || static_cast<double>(table.spf(p2 + 2)) < z0) continue;
        ++r.exact_count;
        if (static_cast<double>(p1) < z1) ++r.small_pairs;
    }

    // sum over x of (sum_{d | F1(x)} lambda1(d))^2 (sum_{e | F2(x)} lambda2(e))^2
    auto inner = [&](const SelbergSystem& s, u64 x) {
        std::vector<u64> hit;
        for (const auto& [p, w] : s.omega) {
            for (u64 c : selberg_offsets(s.stage, W, M)) {
                if ((static_cast<u128>(W) * x + b + c) % p == 0) {
                    hit.push_back(p);
                    break;
                }
            }
        }
        double acc = 0.0;
        for (u64 mask = 0; mask < (u64{1} << hit.size()); ++mask) {
            u128 d = 1;
            for (std::size_t i = 0; i < hit.size(); ++i) {
                if (mask >> i & 1U) d *= hit[i];
            }
            if (d < static_cast<u128>(UINT64_MAX)) acc += s.lambda(static_cast<u64>(d));
        }
        return acc;
    };
    double total = 0.0;
    for (u64 x = 0; x <= r.X; ++x) {
        const double a = inner(s1, x);
        if (a == 0.0) continue;
        const double c = inner(s2, x);
        total += a * a * c * c;
    }
    r.sieve_sum = total;
    r.main_term = static_cast<double>(r.X + 1) * q1.value * q2.value;
    r.remainder = q1.remainder * q2.remainder;
    r.sieve_bound = static_cast<double>(r.X + 1) / (s1.G * s2.G) + r.remainder + static_cast<double>(r.small_pairs);
    const double tol = 1e-9 * std::max(1.0, r.sieve_bound);
    r.ok = static_cast<double>(r.exact_count) <= static_cast<double>(r.small_pairs) + r.sieve_sum + tol &&
           static_cast<double>(r.small_pairs) + r.sieve_sum <= r.sieve_bound + tol;
    return r;
}

} // namespace chenprime
