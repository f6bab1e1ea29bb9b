#pragma once

// Prime tables, factor tables and the almost-prime predicates.
//
// FactorTable stores, for every x in [lo, hi], the smallest prime factor and
// Omega(x), the number of prime factors counted with multiplicity. It is
// built by a segmented sieve over the base primes up to sqrt(hi), so any
// window of the 64-bit range can be tabulated without touching [1, lo).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "chenprime/errors.hpp"
#include "chenprime/numeric.hpp"

namespace chenprime {

struct Budget {
    // Maximum number of table entries a single structure may allocate.
    u64 max_entries = u64{1} << 26;
    // Entries sieved per segment.
    u64 segment_size = u64{1} << 20;

    // CHENPRIME_MAX_ENTRIES overrides the entry cap when set.
    static Budget from_env() {
        Budget b;
        if (const char* s = std::getenv("CHENPRIME_MAX_ENTRIES"); s != nullptr && *s != '\0') {
            b.max_entries = std::strtoull(s, nullptr, 10);
        }
        return b;
    }
};

inline void require_budget(u64 entries, const Budget& budget, const char* what) {
    if (entries > budget.max_entries) {
        throw ResourceError(std::string(what) + ": " + std::to_string(entries) +
                            " entries exceed the budget of " + std::to_string(budget.max_entries) +
                            " (CHENPRIME_MAX_ENTRIES)");
    }
}

inline u64 isqrt(u64 x) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(x)));
    while (r > 0 && static_cast<u128>(r) * r > x) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= x) ++r;
    return r;
}

// Primes up to `bound` with O(1) membership.
class PrimeSet {
public:
    PrimeSet() = default;

    explicit PrimeSet(u64 bound, const Budget& budget = Budget::from_env()) : bound_(bound) {
        require_budget(bound / 8, budget, "PrimeSet");
        bits_.assign(bound / 64 + 1, 0);
        if (bound < 2) return;
        std::vector<bool> composite(bound + 1, false);
        for (u64 p = 2; p <= bound; ++p) {
            if (composite[p]) continue;
            primes_.push_back(p);
            bits_[p >> 6] |= u64{1} << (p & 63);
            if (static_cast<u128>(p) * p > bound) continue;
            for (u64 m = p * p; m <= bound; m += p) composite[m] = true;
        }
    }

    u64 bound() const { return bound_; }
    const std::vector<u64>& primes() const { return primes_; }

    bool contains(u64 x) const {
        if (x > bound_) throw DomainError("PrimeSet: " + std::to_string(x) + " beyond bound " + std::to_string(bound_));
        return (bits_[x >> 6] >> (x & 63)) & 1U;
    }

    // Number of primes <= x.
    u64 count_upto(u64 x) const {
        return static_cast<u64>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
    }

private:
    u64 bound_ = 0;
    std::vector<u64> primes_;
    std::vector<u64> bits_;
};

struct PrimePower {
    u64 p;
    unsigned e;
};

using Factorization = std::vector<PrimePower>;

// Plain trial division. Used as fallback and as the independent route in tests.
inline Factorization factorize_trial(u64 x) {
    Factorization f;
    for (u64 p = 2; p <= x / p; p += (p == 2 ? 1 : 2)) {
        if (x % p != 0) continue;
        unsigned e = 0;
        while (x % p == 0) {
            x /= p;
            ++e;
        }
        f.push_back({p, e});
    }
    if (x > 1) f.push_back({x, 1});
    return f;
}

inline unsigned big_omega(const Factorization& f) {
    unsigned k = 0;
    for (const auto& pp : f) k += pp.e;
    return k;
}

class FactorTable {
public:
    FactorTable(u64 lo, u64 hi, const Budget& budget = Budget::from_env()) : lo_(lo), hi_(hi) {
        if (lo < 1 || hi < lo) throw DomainError("FactorTable: need 1 <= lo <= hi");
        require_budget(hi - lo + 1, budget, "FactorTable");
        const u64 n = hi - lo + 1;
        spf_.assign(n, 0);
        omega_.assign(n, 0);
        base_primes_ = PrimeSet(isqrt(hi), budget).primes();

        const u64 seg = std::max<u64>(budget.segment_size, 1);
        std::vector<u64> rest;
        for (u64 start = lo; start <= hi; start += std::min(seg, hi - start + 1)) {
            const u64 len = std::min(seg, hi - start + 1);
            rest.resize(len);
            for (u64 i = 0; i < len; ++i) rest[i] = start + i;
            for (u64 p : base_primes_) {
                u64 first = (start + p - 1) / p * p;
                for (u64 m = first; m < start + len; m += p) {
                    const u64 i = m - start;
                    const u64 ti = m - lo;
                    if (spf_[ti] == 0) spf_[ti] = static_cast<std::uint32_t>(p);
                    do {
                        rest[i] /= p;
                        ++omega_[ti];
                    } while (rest[i] % p == 0);
                }
            }
            for (u64 i = 0; i < len; ++i) {
                if (rest[i] > 1) ++omega_[start - lo + i];
            }
            if (start + len - 1 == hi) break;
        }
    }

    u64 lo() const { return lo_; }
    u64 hi() const { return hi_; }
    bool covers(u64 x) const { return x >= lo_ && x <= hi_; }

    // Smallest prime factor; 0 for x = 1.
    u64 spf(u64 x) const {
        check(x);
        if (x == 1) return 0;
        const u64 s = spf_[x - lo_];
        return s == 0 ? x : s;
    }

    unsigned omega_big(u64 x) const {
        check(x);
        return omega_[x - lo_];
    }

    bool is_prime(u64 x) const { return x >= 2 && spf(x) == x; }

    // True iff Omega(x) <= k, i.e. x is in P_k.
    bool is_pk(u64 x, unsigned k) const { return omega_big(x) <= k; }

    Factorization factorize(u64 x) const {
        check(x);
        Factorization f;
        auto push = [&f](u64 p) {
            if (!f.empty() && f.back().p == p) {
                ++f.back().e;
            } else {
                f.push_back({p, 1});
            }
        };
        while (x > 1 && covers(x)) {
            const u64 p = spf(x);
            push(p);
            x /= p;
        }
        if (x > 1) {
            for (const auto& pp : factorize_trial(x)) {
                for (unsigned i = 0; i < pp.e; ++i) push(pp.p);
            }
        }
        return f;
    }

    // Distinct prime factors of x below z, in decreasing order.
    std::vector<u64> prime_divisors_below(u64 x, double z) const {
        std::vector<u64> out;
        for (const auto& pp : factorize(x)) {
            if (static_cast<double>(pp.p) < z) out.push_back(pp.p);
        }
        std::reverse(out.begin(), out.end());
        return out;
    }

private:
    void check(u64 x) const {
        if (!covers(x)) {
            throw DomainError("FactorTable: " + std::to_string(x) + " outside [" + std::to_string(lo_) + ", " +
                              std::to_string(hi_) + "]");
        }
    }

    u64 lo_;
    u64 hi_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint8_t> omega_;
    std::vector<u64> base_primes_;
};

inline FactorTable build_factor_table(u64 lo, u64 hi, const Budget& budget = Budget::from_env()) {
    return FactorTable(lo, hi, budget);
}

inline bool is_pk(u64 x, unsigned k, const FactorTable& table) { return table.is_pk(x, k); }

// ---------------------------------------------------------------------------
// Multiplicative functions

struct MultValues {
    int mu;
    u64 tau;
    u64 phi;
    // q * prod_{2 < p | q} (1 - 2/p); always an integer since each odd p | q.
    u64 phi2;
};

inline MultValues mult_functions(const Factorization& f) {
    MultValues v{1, 1, 1, 1};
    for (const auto& [p, e] : f) {
        u64 pk1 = 1;
        for (unsigned i = 1; i < e; ++i) pk1 *= p;
        v.mu = (e > 1) ? 0 : -v.mu;
        v.tau *= e + 1;
        v.phi *= pk1 * (p - 1);
        v.phi2 *= (p == 2) ? pk1 * p : pk1 * (p - 2);
    }
    return v;
}

inline MultValues mult_functions(u64 x) { return mult_functions(factorize_trial(x)); }

inline u64 phi2(u64 q) { return mult_functions(q).phi2; }

// Number of ordered factorizations x = d_1 ... d_k.
inline u64 tau_k(const Factorization& f, unsigned k) {
    if (k == 0) throw DomainError("tau_k: k must be >= 1");
    u64 t = 1;
    for (const auto& pp : f) {
        // binomial(e + k - 1, k - 1)
        u64 c = 1;
        for (unsigned i = 1; i <= pp.e; ++i) c = c * (k - 1 + i) / i;
        t *= c;
    }
    return t;
}

inline u64 tau_k(u64 x, unsigned k) { return tau_k(factorize_trial(x), k); }

inline bool is_squarefree(const Factorization& f) {
    return std::all_of(f.begin(), f.end(), [](const PrimePower& pp) { return pp.e == 1; });
}

// P(z) = product of primes p < z, or nullopt when it overflows 64 bits.
inline std::optional<u64> primorial_below(double z) {
    u64 prod = 1;
    for (u64 p = 2; static_cast<double>(p) < z; ++p) {
        const auto f = factorize_trial(p);
        if (f.size() != 1 || f[0].e != 1) continue;
        if (static_cast<u128>(prod) * p > static_cast<u128>(UINT64_MAX)) return std::nullopt;
        prod *= p;
    }
    return prod;
}

// ---------------------------------------------------------------------------
// Chen primes

struct ChenVariant {
    enum class Kind { basic, strict };
    Kind kind = Kind::basic;
    // Sieving level for the strict variant: p + 2 must have no prime factor < z.
    double z = 0.0;

    static ChenVariant basic() { return {}; }
    static ChenVariant strict(double z) { return {Kind::strict, z}; }

    std::string describe() const {
        return kind == Kind::basic ? std::string("basic") : "strict(" + std::to_string(z) + ")";
    }
};

// p must be prime and p + 2 covered by the table.
inline bool is_chen(u64 p, const ChenVariant& variant, const FactorTable& table) {
    if (!table.is_prime(p)) return false;
    const u64 s = p + 2;
    if (!table.is_pk(s, 2)) return false;
    if (variant.kind == ChenVariant::Kind::strict) {
        return static_cast<double>(table.spf(s)) >= variant.z;
    }
    return true;
}

inline std::vector<u64> chen_primes(u64 bound, const ChenVariant& variant, const FactorTable& table) {
    if (variant.kind == ChenVariant::Kind::strict && (variant.z < 2.0 || variant.z > static_cast<double>(bound))) {
        throw DomainError("chen_primes: strict variant needs 2 <= z <= bound");
    }
    std::vector<u64> out;
    for (u64 p = 2; p <= bound; ++p) {
        if (is_chen(p, variant, table)) out.push_back(p);
    }
    return out;
}

inline std::vector<u64> chen_primes(u64 bound, const ChenVariant& variant, const Budget& budget = Budget::from_env()) {
    if (bound < 2) return {};
    const FactorTable table(1, bound + 2, budget);
    return chen_primes(bound, variant, table);
}

// ---------------------------------------------------------------------------

// prod_{2 < p <= prime_bound} (1 - 1/(p-1)^2)
inline double singular_series_S1(u64 prime_bound) {
    if (prime_bound < 3) throw DomainError("singular_series_S1: prime_bound must be >= 3");
    const PrimeSet ps(prime_bound);
    double prod = 1.0;
    for (u64 p : ps.primes()) {
        if (p == 2) continue;
        const double pm1 = static_cast<double>(p - 1);
        prod *= 1.0 - 1.0 / (pm1 * pm1);
    }
    return prod;
}

// Twin-prime constant to the accuracy every model in this library needs.
inline double singular_series_S1() {
    static const double value = singular_series_S1(2'000'000);
    return value;
}

} // namespace chenprime
