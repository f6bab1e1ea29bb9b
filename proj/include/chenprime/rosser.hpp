#pragma once

// Rosser's weights lambda_D^{+/-} and the linear sieve functions F(s), f(s).
//
// For squarefree d = p_1 p_2 ... p_k with p_1 > p_2 > ... > p_k, the upper
// weight is (-1)^k when p_1 ... p_{j-1} p_j^3 < D for every odd j <= k and the
// lower weight is (-1)^k when the same holds for every even j <= k. The chain
// condition forces d < D except for the lower weight at a single prime, which
// is -1 for every prime p. Enumerated supports list d < D only; value() covers
// the primes p >= D. All comparisons against D are made on exact integer
// products: x < D  <=>  x <= strict_floor(D).

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "chenprime/arith.hpp"
#include "chenprime/errors.hpp"
#include "chenprime/numeric.hpp"

namespace chenprime {

enum class RosserSign { plus, minus };

inline const char* to_string(RosserSign s) { return s == RosserSign::plus ? "+" : "-"; }

struct RosserEntry {
    u64 d;
    int value;                 // (-1)^k
    std::vector<u64> primes;   // decreasing

    unsigned k() const { return static_cast<unsigned>(primes.size()); }
};

namespace detail {

inline u64 icbrt(u64 x) {
    u64 r = static_cast<u64>(std::cbrt(static_cast<long double>(x)));
    while (r > 0 && static_cast<u128>(r) * r * r > x) --r;
    while (static_cast<u128>(r + 1) * (r + 1) * (r + 1) <= x) ++r;
    return r;
}

// Check the chain condition at position j (1-based) for prefix product `prefix`
// (product of the first j-1 primes) and the j-th prime p.
inline bool chain_ok(u128 prefix, u64 p, u64 limit) {
    const u128 p3 = static_cast<u128>(p) * p * p;
    if (p3 > limit) return false;
    if (prefix > limit) return false;
    const u128 lhs = prefix * p3;
    return lhs / p3 == prefix && lhs <= limit;
}

inline bool checked_at(unsigned j, RosserSign sign) {
    return sign == RosserSign::plus ? (j % 2 == 1) : (j % 2 == 0);
}

} // namespace detail

// lambda_D^sign(d) for d given by its distinct primes in decreasing order.
// Independent of any enumeration: evaluates the definition directly.
inline int rosser_coefficient(std::span<const u64> primes_desc, double D, RosserSign sign) {
    const u64 limit = strict_floor(D);
    u128 prefix = 1;
    for (std::size_t i = 0; i < primes_desc.size(); ++i) {
        const unsigned j = static_cast<unsigned>(i + 1);
        const u64 p = primes_desc[i];
        if (detail::checked_at(j, sign) && !detail::chain_ok(prefix, p, limit)) return 0;
        prefix *= p;
    }
    return (primes_desc.size() % 2 == 0) ? 1 : -1;
}

class RosserWeights {
public:
    RosserWeights(double D, RosserSign sign, std::vector<RosserEntry> entries)
        : D_(D), sign_(sign), entries_(std::move(entries)) {
        std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) { return a.d < b.d; });
    }

    double D() const { return D_; }
    RosserSign sign() const { return sign_; }
    const std::vector<RosserEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    // lambda(d) for any d >= 1.
    int value(u64 d) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), d,
                                   [](const RosserEntry& e, u64 x) { return e.d < x; });
        if (it != entries_.end() && it->d == d) return it->value;
        if (sign_ == RosserSign::minus && d > strict_floor(D_)) {
            const auto f = factorize_trial(d);
            if (f.size() == 1 && f[0].e == 1) return -1;
        }
        return 0;
    }

private:
    double D_;
    RosserSign sign_;
    std::vector<RosserEntry> entries_;
};

// Depth-first enumeration over decreasing prime chains. A branch is cut as
// soon as the product reaches D or the chain condition fails; both are
// monotone in the next prime, so the scan over candidates stops there too.
inline RosserWeights build_rosser(double D, RosserSign sign, const PrimeSet& primes, u64 max_support = u64{1} << 24) {
    if (!(D > 1.0)) throw DomainError("build_rosser: D must exceed 1");
    const u64 limit = strict_floor(D);
    if (primes.bound() < limit) {
        throw DomainError("build_rosser: prime source must cover primes below D (bound " +
                          std::to_string(primes.bound()) + ", D " + std::to_string(D) + ")");
    }
    const auto& ps = primes.primes();
    const std::size_t top = static_cast<std::size_t>(std::upper_bound(ps.begin(), ps.end(), limit) - ps.begin());

    std::vector<RosserEntry> out;
    std::vector<u64> chain;
    out.push_back({1, 1, {}});

    // Extend `chain` (product `prod`) with primes ps[i] for i < upto. Every
    // prime below the computed cap is admissible, so the scan is output-sensitive.
    std::function<void(u64, std::size_t)> extend = [&](u64 prod, std::size_t upto) {
        const unsigned j = static_cast<unsigned>(chain.size() + 1);
        u64 cap = limit / prod;
        if (detail::checked_at(j, sign)) cap = detail::icbrt(cap);
        const std::size_t start =
            std::min(upto, static_cast<std::size_t>(std::upper_bound(ps.begin(), ps.end(), cap) - ps.begin()));
        for (std::size_t i = start; i-- > 0;) {
            const u64 p = ps[i];
            chain.push_back(p);
            const u64 next = prod * p;
            out.push_back({next, (chain.size() % 2 == 0) ? 1 : -1, chain});
            if (out.size() > max_support) {
                throw ResourceError("build_rosser: support exceeds cap of " + std::to_string(max_support));
            }
            extend(next, i);
            chain.pop_back();
        }
    };
    extend(1, top);
    return RosserWeights(D, sign, std::move(out));
}

struct SandwichResult {
    i64 lower;
    i64 mid;
    i64 upper;
    bool ok;
};

// sum_{d | q} lambda^-(d) <= sum_{d | q} mu(d) <= sum_{d | q} lambda^+(d)
inline SandwichResult sandwich_check(u64 q, const RosserWeights& plus, const RosserWeights& minus) {
    if (plus.sign() != RosserSign::plus || minus.sign() != RosserSign::minus) {
        throw DomainError("sandwich_check: weights passed with the wrong signs");
    }
    if (plus.D() != minus.D()) throw DomainError("sandwich_check: weights must share D");
    if (q == 0) throw DomainError("sandwich_check: q must be >= 1");
    const auto f = factorize_trial(q);
    if (!is_squarefree(f)) throw DomainError("sandwich_check: q = " + std::to_string(q) + " is not squarefree");

    SandwichResult r{0, q == 1 ? 1 : 0, 0, false};
    const std::size_t k = f.size();
    for (u64 mask = 0; mask < (u64{1} << k); ++mask) {
        u64 d = 1;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask >> i & 1U) d *= f[i].p;
        }
        r.lower += minus.value(d);
        r.upper += plus.value(d);
    }
    r.ok = r.lower <= r.mid && r.mid <= r.upper;
    return r;
}

// ---------------------------------------------------------------------------
// Linear sieve functions

// F and f solve
//   (s F(s))' = f(s - 1)  for s > 3,      (s f(s))' = F(s - 1)  for s > 2,
// from F(s) = 2 e^gamma / s on [1, 3] and f(s) = 2 e^gamma log(s - 1) / s on [2, 4].
// Sum and difference of the two equations decouple into the Dickman and
// Buchstab equations, and the initial data match, so for s >= 2
//   s (F - f)(s) = 2 e^gamma rho(s - 1),      (F + f)(s) = 2 e^gamma omega(s).
// rho and omega are expanded in power series about the right end of each unit
// interval (radius of convergence 2) and evaluated in 50-digit arithmetic, so
// F - 1 and 1 - f keep their sign long after they drop below double precision.
class LinearSieveFns {
public:
    using real = boost::multiprecision::cpp_bin_float_50;

    explicit LinearSieveFns(unsigned terms = 200, double s_max = 20.0) : s_max_(s_max) {
        if (terms < 8) throw DomainError("LinearSieveFns: need at least 8 series terms");
        if (!(s_max >= 4.0)) throw DomainError("LinearSieveFns: s_max must be at least 4");
        using boost::math::constants::euler;
        eg_ = exp(euler<real>());
        const real ln2 = log(real(2));
        const std::size_t top = static_cast<std::size_t>(std::ceil(s_max)) + 1;

        // rho on [1, 2] is 1 - log u; u = 2 + x gives 1 - log 2 - log(1 + x/2).
        // v = u omega(u) on [2, 3] is 1 + log(u - 1); u = 3 + x gives 1 + log 2 + log(1 + x/2).
        rho_.assign(top, {});
        v_.assign(top, {});
        rho_[1].assign(terms, real(0));
        v_[2].assign(terms, real(0));
        rho_[1][0] = 1 - ln2;
        v_[2][0] = 1 + ln2;
        real pw = 1;
        for (unsigned i = 1; i < terms; ++i) {
            pw /= 2;
            const real t = pw / i;
            rho_[1][i] = (i % 2 == 0) ? t : real(-t);
            v_[2][i] = (i % 2 == 1) ? t : real(-t);
        }
        // u rho'(u) = -rho(u - 1) and v'(u) = v(u - 1) / (u - 1), stepped one interval at a time.
        for (std::size_t k = 1; k + 1 < top; ++k) rho_[k + 1] = step(rho_[k], -1, static_cast<double>(k + 2));
        for (std::size_t k = 2; k + 1 < top; ++k) v_[k + 1] = step(v_[k], 1, static_cast<double>(k + 1));
    }

    struct Values {
        double F;
        double f;
        double gap;   // F - f, kept separately since it underflows the difference of doubles
    };

    Values operator()(double s) const {
        if (!(s >= 1.0)) throw DomainError("linear sieve functions need s >= 1");
        if (s > s_max_) throw DomainError("linear sieve functions available only up to s = " + std::to_string(s_max_));
        const real S(s);
        real F, f;
        if (s <= 3.0) {
            F = 2 * eg_ / S;
        } else {
            F = eg_ * (omega(S) + rho(S - 1) / S);
        }
        if (s <= 2.0) {
            f = 0;
        } else if (s <= 4.0) {
            f = 2 * eg_ * log(S - 1) / S;
        } else {
            f = eg_ * (omega(S) - rho(S - 1) / S);
        }
        return {static_cast<double>(F), static_cast<double>(f), static_cast<double>(F - f)};
    }

    // Dickman rho(u) and Buchstab omega(u) for u up to s_max.
    real rho(const real& u) const {
        if (u <= 1) return real(1);
        const std::size_t k = std::min(static_cast<std::size_t>(floor(u).convert_to<double>()), rho_.size() - 1);
        return horner(rho_[k], u - real(k + 1));
    }

    real omega(const real& u) const {
        if (u < 1) throw DomainError("Buchstab omega needs u >= 1");
        if (u <= 2) return 1 / u;
        const std::size_t k = std::min(static_cast<std::size_t>(floor(u).convert_to<double>()), v_.size() - 1);
        return horner(v_[k], u - real(k + 1)) / u;
    }

    double s_max() const { return s_max_; }

private:
    using Series = std::vector<real>;

    static real horner(const Series& c, const real& x) {
        real acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    // g: coefficients of one piece in x = u - (k+1). Returns h, the next piece in
    // y = u - (k+2), solving (a + y) h'(y) = sign g(y); continuity at y = -1 fixes h(0).
    static Series step(const Series& g, int sign, double a) {
        const std::size_t n = g.size();
        Series d(n, real(0));
        for (std::size_t i = 0; i + 1 < n; ++i) {
            d[i + 1] = (sign * g[i] - real(i) * d[i]) / (real(a) * real(i + 1));
        }
        real tail = 0;
        for (std::size_t i = 1; i < n; ++i) tail += (i % 2 == 0) ? d[i] : real(-d[i]);
        d[0] = g[0] - tail;
        return d;
    }

    double s_max_;
    real eg_;
    std::vector<Series> rho_;   // rho_[k]: rho on [k, k+1]
    std::vector<Series> v_;     // v_[k]: u omega(u) on [k, k+1]
};

inline const LinearSieveFns& default_linear_sieve() {
    static const LinearSieveFns fns;
    return fns;
}

inline LinearSieveFns::Values linear_sieve_F_f(double s) { return default_linear_sieve()(s); }

// ---------------------------------------------------------------------------

struct MainTermResult {
    double value;         // sum over supported d | P_*(z) of lambda(d) omega(d) / d
    double product;       // prod_{p < z} (1 - omega(p)/p)
    double s;             // log D / log z
    double sieve_limit;   // F(s) for sign +, f(s) for sign -
    bool lower_side_ok;   // the bracket side that holds exactly
    bool limit_side_ok;   // the F / f side without the error term
    bool level_ok;        // z <= D for sign +, z <= sqrt(D) for sign -
    std::size_t terms;
};

// omega is evaluated on primes; values outside [0, p] are rejected.
inline MainTermResult sieve_main_term(const RosserWeights& w, const std::function<double(u64)>& omega, double z) {
    if (!(z >= 2.0)) throw DomainError("sieve_main_term: need z >= 2");
    if (z > w.D()) throw DomainError("sieve_main_term: need z <= D");
    const PrimeSet ps(static_cast<u64>(std::ceil(z)));
    MainTermResult r{0.0, 1.0, std::log(w.D()) / std::log(z), 0.0, false, false, false, 0};
    r.level_ok = w.sign() == RosserSign::plus || z <= std::sqrt(w.D());
    for (u64 p : ps.primes()) {
        if (static_cast<double>(p) >= z) break;
        const double om = omega(p);
        if (om < 0.0 || om > static_cast<double>(p)) {
            throw DomainError("sieve_main_term: omega(" + std::to_string(p) + ") = " + std::to_string(om) +
                              " outside [0, p]");
        }
        r.product *= 1.0 - om / static_cast<double>(p);
    }
    for (const auto& e : w.entries()) {
        double term = static_cast<double>(e.value);
        bool keep = true;
        for (u64 p : e.primes) {
            if (static_cast<double>(p) >= z) {
                keep = false;
                break;
            }
            term *= omega(p) / static_cast<double>(p);
        }
        if (!keep || term == 0.0) continue;
        r.value += term;
        ++r.terms;
    }
    const auto fns = r.s >= 1.0 ? linear_sieve_F_f(std::min(r.s, default_linear_sieve().s_max()))
                                : LinearSieveFns::Values{0.0, 0.0, 0.0};
    const double tol = 1e-12 * std::max(1.0, std::abs(r.product));
    if (w.sign() == RosserSign::plus) {
        r.sieve_limit = fns.F;
        r.lower_side_ok = r.value >= r.product - tol;
        r.limit_side_ok = r.value <= r.product * fns.F + tol;
    } else {
        r.sieve_limit = fns.f;
        r.lower_side_ok = r.value <= r.product + tol;
        r.limit_side_ok = r.value >= r.product * fns.f - tol;
    }
    return r;
}

} // namespace chenprime
