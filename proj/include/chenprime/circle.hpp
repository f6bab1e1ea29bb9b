#pragma once

// Exponential sums over sifted primes in a progression, the major/minor arc
// dissection, and the major-arc model built from tau*(a, q).
//
//   S(alpha)   = sum_{p <= n, p = b (W), (p+2, P(z0)) = 1} e(alpha (p-b)/W) log p
//   S^±(alpha) = sum_{p <= n, p = b (W)} e(alpha (p-b)/W) log p sum_{d | (p+2, P(z0))} lambda_D^±(d)

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chenprime/arith.hpp"
#include "chenprime/errors.hpp"
#include "chenprime/numeric.hpp"
#include "chenprime/parallel.hpp"
#include "chenprime/rosser.hpp"

namespace chenprime {

struct SieveContext {
    u64 n = 0;
    u64 W = 2;
    u64 b = 1;
    double z0 = 2.0;
    double D = 2.0;
    unsigned k0 = 8;

    // z0 = n^{1/k0} and D = n^{0.32} unless given explicitly.
    static SieveContext make(u64 n, u64 W, u64 b, unsigned k0, std::optional<double> z0 = std::nullopt,
                             std::optional<double> D = std::nullopt) {
        SieveContext c{n, W, b, 0.0, 0.0, k0};
        if (k0 == 0) throw ConfigError("SieveContext: k0 must be positive");
        c.z0 = z0.value_or(std::pow(static_cast<double>(n), 1.0 / k0));
        c.D = D.value_or(std::pow(static_cast<double>(n), 0.32));
        c.validate();
        return c;
    }

    void validate() const {
        if (n < 3) throw ConfigError("SieveContext: n must be >= 3");
        if (W == 0 || W % 2 != 0) throw ConfigError("SieveContext: W must be a positive even integer");
        if (b < 1 || b > W) throw ConfigError("SieveContext: need 1 <= b <= W");
        if (std::gcd(b, W) != 1 || std::gcd(b + 2, W) != 1) {
            throw ConfigError("SieveContext: need gcd(b(b+2), W) = 1 (W=" + std::to_string(W) +
                              ", b=" + std::to_string(b) + ")");
        }
        if (!(z0 >= 1.0)) throw ConfigError("SieveContext: z0 must be >= 1");
        if (!(D > 1.0)) throw ConfigError("SieveContext: D must exceed 1");
    }

    // floor((n - b) / W)
    u64 m() const { return n >= b ? (n - b) / W : 0; }
};

enum class WeightMode { moebius, rosser_plus, rosser_minus };

inline const char* to_string(WeightMode m) {
    switch (m) {
    case WeightMode::moebius: return "moebius";
    case WeightMode::rosser_plus: return "rosser_plus";
    case WeightMode::rosser_minus: return "rosser_minus";
    }
    return "?";
}

struct ExpSumResult {
    double alpha;
    cplx value;
    WeightMode mode;
    std::size_t term_count;
};

// Precomputed per-prime data for one context; S(alpha) is then a weighted
// sum of phases over x = (p - b)/W.
class ExpSum {
public:
    struct Term {
        u64 x;
        double log_p;
        int moebius;   // 1 iff (p+2, P(z0)) = 1
        int plus;      // sum_{d | (p+2, P(z0))} lambda^+(d)
        int minus;
    };

    ExpSum(const SieveContext& ctx, const FactorTable& table, unsigned threads = 1) : ctx_(ctx), threads_(threads) {
        ctx_.validate();
        if (!table.covers(1) || !table.covers(ctx.n + 2)) {
            throw DomainError("ExpSum: factor table must cover [1, n + 2]");
        }
        for (u64 p = ctx.b; p <= ctx.n; p += ctx.W) {
            if (!table.is_prime(p)) continue;
            const auto small = table.prime_divisors_below(p + 2, ctx.z0);
            Term t{(p - ctx.b) / ctx.W, std::log(static_cast<double>(p)), small.empty() ? 1 : 0, 0, 0};
            // Sum the weights over all divisors of the z0-smooth radical; subsets keep decreasing order.
            std::vector<u64> chosen;
            for (u64 mask = 0; mask < (u64{1} << small.size()); ++mask) {
                chosen.clear();
                for (std::size_t i = 0; i < small.size(); ++i) {
                    if (mask >> i & 1U) chosen.push_back(small[i]);
                }
                t.plus += rosser_coefficient(chosen, ctx.D, RosserSign::plus);
                t.minus += rosser_coefficient(chosen, ctx.D, RosserSign::minus);
            }
            terms_.push_back(t);
        }
    }

    static ExpSum build(const SieveContext& ctx, const Budget& budget = Budget::from_env(), unsigned threads = 1) {
        const FactorTable table(1, ctx.n + 2, budget);
        return ExpSum(ctx, table, threads);
    }

    const SieveContext& context() const { return ctx_; }
    const std::vector<Term>& terms() const { return terms_; }

    static int weight(const Term& t, WeightMode mode) {
        switch (mode) {
        case WeightMode::moebius: return t.moebius;
        case WeightMode::rosser_plus: return t.plus;
        case WeightMode::rosser_minus: return t.minus;
        }
        return 0;
    }

    // Real alpha: alpha is reduced mod 1, then frac(alpha * x) is formed from
    // an exact two-product so the phase keeps full relative precision.
    ExpSumResult evaluate(double alpha, WeightMode mode) const {
        const double a = alpha - std::floor(alpha);
        return evaluate_with(alpha, mode, [a](u64 x) {
            const double xd = static_cast<double>(x);
            const double hi = a * xd;
            const double lo = std::fma(a, xd, -hi);
            const double frac = (hi - std::floor(hi)) + lo;
            return unit_phase(frac);
        });
    }

    // Rational alpha = a/q: phase index (a x mod q) is exact.
    ExpSumResult evaluate(i64 a, i64 q, WeightMode mode) const {
        if (q <= 0) throw DomainError("ExpSum: denominator must be positive");
        const i64 ar = mod_floor(a, q);
        std::vector<cplx> roots(static_cast<std::size_t>(q));
        for (i64 k = 0; k < q; ++k) roots[static_cast<std::size_t>(k)] = unit_phase(k, q);
        return evaluate_with(static_cast<double>(a) / static_cast<double>(q), mode, [&](u64 x) {
            const u64 idx = mul_mod(static_cast<u64>(ar), x % static_cast<u64>(q), static_cast<u64>(q));
            return roots[idx];
        });
    }

    // sum of the weights times (weight_lhs - weight_rhs); used for the comparison lemma.
    template <class PhaseFn>
    cplx difference(WeightMode lhs, WeightMode rhs, PhaseFn&& phase) const {
        return blocked_sum<cplx>(terms_.size(), [&](std::size_t i) {
            const Term& t = terms_[i];
            const int w = weight(t, lhs) - weight(t, rhs);
            return w == 0 ? cplx{} : static_cast<double>(w) * t.log_p * phase(t.x);
        }, threads_);
    }

private:
    template <class PhaseFn>
    ExpSumResult evaluate_with(double alpha, WeightMode mode, PhaseFn&& phase) const {
        std::size_t used = 0;
        for (const auto& t : terms_) used += weight(t, mode) != 0 ? 1 : 0;
        const cplx v = blocked_sum<cplx>(terms_.size(), [&](std::size_t i) {
            const Term& t = terms_[i];
            const int w = weight(t, mode);
            return w == 0 ? cplx{} : static_cast<double>(w) * t.log_p * phase(t.x);
        }, threads_);
        return {alpha, v, mode, used};
    }

    SieveContext ctx_;
    unsigned threads_;
    std::vector<Term> terms_;
};

inline ExpSumResult exp_sum(const ExpSum& sums, double alpha, WeightMode mode) { return sums.evaluate(alpha, mode); }

// ---------------------------------------------------------------------------

struct SpmRow {
    double alpha;
    double upper_gap;   // |S+(alpha) - S(alpha)|
    double lower_gap;   // |S(alpha) - S-(alpha)|
    bool ok;
};

struct SpmReport {
    double upper_bound;   // S+(0) - S(0)
    double lower_bound;   // S(0) - S-(0)
    std::vector<SpmRow> rows;
    double min_slack;
    bool all_ok;
};

inline SpmReport spm_comparison(const ExpSum& sums, const std::vector<double>& alphas) {
    auto one = [](u64) { return cplx{1.0, 0.0}; };
    SpmReport rep{};
    rep.upper_bound = sums.difference(WeightMode::rosser_plus, WeightMode::moebius, one).real();
    rep.lower_bound = sums.difference(WeightMode::moebius, WeightMode::rosser_minus, one).real();
    rep.min_slack = std::min(rep.upper_bound, rep.lower_bound);
    rep.all_ok = true;
    for (double alpha : alphas) {
        const double a = alpha - std::floor(alpha);
        SpmRow row{alpha, 0.0, 0.0, false};
        if (a == 0.0) {
            row.upper_gap = std::abs(sums.difference(WeightMode::rosser_plus, WeightMode::moebius, one));
            row.lower_gap = std::abs(sums.difference(WeightMode::moebius, WeightMode::rosser_minus, one));
        } else {
            auto phase = [a](u64 x) {
                const double xd = static_cast<double>(x);
                const double hi = a * xd;
                const double lo = std::fma(a, xd, -hi);
                return unit_phase((hi - std::floor(hi)) + lo);
            };
            row.upper_gap = std::abs(sums.difference(WeightMode::rosser_plus, WeightMode::moebius, phase));
            row.lower_gap = std::abs(sums.difference(WeightMode::moebius, WeightMode::rosser_minus, phase));
        }
        row.ok = row.upper_gap <= rep.upper_bound && row.lower_gap <= rep.lower_bound;
        rep.min_slack = std::min({rep.min_slack, rep.upper_bound - row.upper_gap, rep.lower_bound - row.lower_gap});
        rep.all_ok = rep.all_ok && row.ok;
        rep.rows.push_back(row);
    }
    return rep;
}

// ---------------------------------------------------------------------------

struct MajorArc {
    i64 a;
    i64 q;
};

class ArcDissection {
public:
    ArcDissection(u64 n, double B, double max_Q = 1e5) : n_(n), B_(B) {
        if (n < 3) throw DomainError("ArcDissection: n must be >= 3");
        const double logQ = B * std::log(std::log(static_cast<double>(n)));
        if (logQ > std::log(max_Q)) {
            throw ResourceError("ArcDissection: Q = (log n)^B = exp(" + std::to_string(logQ) + ") exceeds the cap " +
                                std::to_string(max_Q));
        }
        Q_ = std::exp(logQ);
        radius_ = Q_ / static_cast<double>(n);
        const i64 qmax = static_cast<i64>(std::floor(Q_ + 1e-9));
        for (i64 q = 1; q <= qmax; ++q) {
            for (i64 a = 1; a <= q; ++a) {
                if (std::gcd(a, q) == 1) rationals_.push_back({a, q});
            }
        }
    }

    u64 n() const { return n_; }
    double B() const { return B_; }
    double Q() const { return Q_; }
    double radius() const { return radius_; }
    const std::vector<MajorArc>& rationals() const { return rationals_; }

    // Signed offset alpha - a/q folded into [-1/2, 1/2).
    static double offset(double alpha, i64 a, i64 q) {
        double t = alpha - static_cast<double>(a) / static_cast<double>(q);
        return t - std::nearbyint(t);
    }

    bool contains(double alpha, i64 a, i64 q) const {
        return std::abs(offset(alpha, a, q)) * static_cast<double>(q) <= radius_;
    }

    // Major arc with the smallest q containing alpha, or nullopt for the minor arcs.
    std::optional<MajorArc> classify(double alpha) const {
        const i64 qmax = static_cast<i64>(std::floor(Q_ + 1e-9));
        const double a0 = alpha - std::floor(alpha);
        for (i64 q = 1; q <= qmax; ++q) {
            i64 a = static_cast<i64>(std::nearbyint(a0 * static_cast<double>(q)));
            if (a == 0) a = q;
            if (a > q) a -= q;
            if (std::gcd(a, q) != 1) continue;
            if (contains(a0, a, q)) return MajorArc{a, q};
        }
        return std::nullopt;
    }

private:
    u64 n_;
    double B_;
    double Q_ = 0.0;
    double radius_ = 0.0;
    std::vector<MajorArc> rationals_;
};

// ---------------------------------------------------------------------------

// Unitary divisors d of q: d | q and gcd(d, q/d) = 1.
inline std::vector<u64> unitary_divisors(u64 q) {
    const auto f = factorize_trial(q);
    std::vector<u64> out;
    for (u64 mask = 0; mask < (u64{1} << f.size()); ++mask) {
        u64 d = 1;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (mask >> i & 1U) {
                for (unsigned e = 0; e < f[i].e; ++e) d *= f[i].p;
            }
        }
        out.push_back(d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// The unique r in [1, q] with W r = -b (mod d) and W r = -b - 2 (mod q/d).
inline i64 tau_star_residue(u64 d, u64 q, u64 W, u64 b) {
    const i64 e = static_cast<i64>(q / d);
    const i64 qi = static_cast<i64>(q);
    const i64 winv = inverse_mod(static_cast<i64>(W % q), qi);
    const i64 di = static_cast<i64>(d);
    const i64 r1 = mod_floor(-static_cast<i64>(b % d) * (winv % di), di);
    const i64 r2 = mod_floor(-static_cast<i64>((b + 2) % static_cast<u64>(e)) * (winv % e), e);
    const i64 t = mod_floor((r2 - r1) % e * inverse_mod(di % e, e), e);
    i64 r = mod_floor(r1 + di * t, qi);
    if (r == 0) r = qi;
    const i128 lhs1 = static_cast<i128>(W) * r + b;
    const i128 lhs2 = lhs1 + 2;
    if (lhs1 % di != 0 || lhs2 % e != 0) throw InvariantViolation("tau_star: CRT residue failed verification");
    return r;
}

// tau*(a, q) = sum_{d | q, (d, q/d) = 1} e(a r_d / q); zero when gcd(W, q) > 1.
inline cplx tau_star(i64 a, u64 q, u64 W, u64 b) {
    if (q == 0) throw DomainError("tau_star: q must be positive");
    if (std::gcd(static_cast<u64>(mod_floor(a, static_cast<i64>(q))), q) != 1 && q != 1) {
        throw DomainError("tau_star: need gcd(a, q) = 1");
    }
    if (std::gcd(W, q) != 1) return {0.0, 0.0};
    cplx sum{};
    for (u64 d : unitary_divisors(q)) {
        const i64 r = tau_star_residue(d, q, W, b);
        sum += unit_phase(static_cast<i64>(static_cast<i128>(a) * r % static_cast<i128>(q)), static_cast<i64>(q));
    }
    return sum;
}

inline cplx tau_star(i64 a, u64 q, const SieveContext& ctx) { return tau_star(a, q, ctx.W, ctx.b); }

// sum_{1 <= y <= m} e(theta y)
inline cplx geometric_phase_sum(double theta, u64 m) {
    const double md = static_cast<double>(m);
    const double s = std::sin(std::numbers::pi * theta);
    if (std::abs(s) < 1e-300 || circle_norm(theta) == 0.0) return {md, 0.0};
    const double amp = std::sin(std::numbers::pi * md * theta) / s;
    return amp * unit_phase(theta * (md + 1.0) / 2.0);
}

struct MajorArcModel {
    cplx model;
    cplx actual;
    double rel_err;   // |model - actual| / S(0)
    double theta;
    u64 m;
};

// Main term 1_{(W,q)=1} mu(q) tau*(a,q) 4 e^{-gamma} k0 S1 W / (phi2(Wq) log n) * sum_{y <= m} e(theta y).
inline MajorArcModel major_arc_model(const ExpSum& sums, const ArcDissection& arcs, i64 a, u64 q, double alpha) {
    const auto& ctx = sums.context();
    if (q == 0 || std::gcd(static_cast<u64>(mod_floor(a, static_cast<i64>(q))), q) != 1) {
        if (q != 1) throw DomainError("major_arc_model: need gcd(a, q) = 1");
    }
    if (!arcs.contains(alpha, a, static_cast<i64>(q))) {
        throw DomainError("major_arc_model: alpha = " + std::to_string(alpha) + " is not in the arc around " +
                          std::to_string(a) + "/" + std::to_string(q));
    }
    MajorArcModel r{};
    r.theta = ArcDissection::offset(alpha, a, static_cast<i64>(q));
    r.m = ctx.m();
    if (std::gcd(ctx.W, q) == 1) {
        const auto mv = mult_functions(q);
        if (mv.mu != 0) {
            const double pref = 4.0 * std::exp(-kEulerGamma) * ctx.k0 * singular_series_S1() *
                                static_cast<double>(ctx.W) /
                                (static_cast<double>(phi2(ctx.W * q)) * std::log(static_cast<double>(ctx.n)));
            r.model = static_cast<double>(mv.mu) * pref * tau_star(a, q, ctx) * geometric_phase_sum(r.theta, r.m);
        }
    }
    r.actual = sums.evaluate(alpha, WeightMode::moebius).value;
    const double s0 = sums.evaluate(0, 1, WeightMode::moebius).value.real();
    r.rel_err = s0 > 0.0 ? std::abs(r.model - r.actual) / s0 : 0.0;
    return r;
}

// ---------------------------------------------------------------------------

inline u64 euler_phi(u64 q) { return mult_functions(q).phi; }

// Delta(x; q) = max over reduced residues r of |theta(x; q, r) - x / phi(q)|.
inline double bv_delta(u64 x, u64 q, const PrimeSet& primes) {
    if (q == 0) throw DomainError("bv_delta: q must be >= 1");
    if (x < 2) throw DomainError("bv_delta: x must be >= 2");
    if (primes.bound() < x) throw DomainError("bv_delta: prime table must cover x");
    std::vector<double> theta(q, 0.0);
    for (u64 p : primes.primes()) {
        if (p > x) break;
        theta[p % q] += std::log(static_cast<double>(p));
    }
    const double expected = static_cast<double>(x) / static_cast<double>(euler_phi(q));
    double best = 0.0;
    for (u64 r = 0; r < q; ++r) {
        if (std::gcd(r == 0 ? q : r, q) != 1) continue;
        best = std::max(best, std::abs(theta[r] - expected));
    }
    return best;
}

// max_{2 <= y <= x} Delta(y; q). Between consecutive primes every residue
// sum is flat while y/phi(q) grows, so only y = p and y = p' - 1 matter.
inline double bv_delta_max(u64 x, u64 q, const PrimeSet& primes) {
    if (primes.bound() < x) throw DomainError("bv_delta_max: prime table must cover x");
    std::vector<u64> reduced;
    for (u64 r = 0; r < q; ++r) {
        if (std::gcd(r == 0 ? q : r, q) == 1) reduced.push_back(r);
    }
    std::vector<double> theta(q, 0.0);
    const double phi = static_cast<double>(euler_phi(q));
    double best = 0.0;
    auto eval = [&](u64 y) {
        const double e = static_cast<double>(y) / phi;
        for (u64 r : reduced) best = std::max(best, std::abs(theta[r] - e));
    };
    const auto& ps = primes.primes();
    for (std::size_t i = 0; i < ps.size() && ps[i] <= x; ++i) {
        theta[ps[i] % q] += std::log(static_cast<double>(ps[i]));
        eval(ps[i]);
        const u64 next = (i + 1 < ps.size()) ? ps[i + 1] : x + 1;
        eval(std::min(next - 1, x));
    }
    return best;
}

struct BvSum {
    u64 x;
    u64 q_max;
    double total;
    std::vector<double> per_q;   // index q - 1
};

// sum_{q <= sqrt(x)/log x} max_{y <= x} Delta(y; q)
inline BvSum bv_sum(u64 x, const PrimeSet& primes) {
    BvSum s{x, 0, 0.0, {}};
    const double xd = static_cast<double>(x);
    s.q_max = static_cast<u64>(std::floor(std::sqrt(xd) / std::log(xd)));
    for (u64 q = 1; q <= s.q_max; ++q) {
        s.per_q.push_back(bv_delta_max(x, q, primes));
        s.total += s.per_q.back();
    }
    return s;
}

// ---------------------------------------------------------------------------

struct ContrastSample {
    i64 a;
    i64 q;
    double ratio;   // |S(a/q)| / S(0)
    bool model_nonzero;
};

struct ContrastReport {
    std::vector<ContrastSample> minor;
    std::vector<ContrastSample> major;
    double median_minor;
    double median_major;
    double max_minor;
    // Centers whose major-arc main term is not identically zero.
    double median_major_nonzero_model;
    double s0;
};

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Minor samples: a/q with q prime in [Q, 4Q], redrawn until classified minor.
// Major samples: every center a/q with q <= major_q_max.
inline ContrastReport minor_major_contrast(const ExpSum& sums, const ArcDissection& arcs, std::size_t samples,
                                           u64 seed, u64 major_q_max = 10) {
    ContrastReport rep{};
    const auto& ctx = sums.context();
    rep.s0 = sums.evaluate(0, 1, WeightMode::moebius).value.real();
    auto ratio = [&](i64 a, i64 q) { return std::abs(sums.evaluate(a, q, WeightMode::moebius).value) / rep.s0; };
    auto nonzero = [&](i64 q) {
        return std::gcd(ctx.W, static_cast<u64>(q)) == 1 && mult_functions(static_cast<u64>(q)).mu != 0;
    };

    const u64 qlo = static_cast<u64>(std::ceil(arcs.Q()));
    const u64 qhi = static_cast<u64>(std::floor(4.0 * arcs.Q()));
    const PrimeSet ps(qhi + 1);
    std::vector<u64> qs;
    for (u64 p : ps.primes()) {
        if (p >= qlo && p <= qhi && p > 2) qs.push_back(p);
    }
    if (qs.empty()) throw ConfigError("minor_major_contrast: no prime denominators in [Q, 4Q]");
    std::mt19937_64 rng(seed);
    std::size_t attempts = 0;
    while (rep.minor.size() < samples) {
        if (++attempts > 100 * samples + 1000) throw InvariantViolation("minor_major_contrast: cannot find minor samples");
        const i64 q = static_cast<i64>(qs[std::uniform_int_distribution<std::size_t>(0, qs.size() - 1)(rng)]);
        const i64 a = std::uniform_int_distribution<i64>(1, q - 1)(rng);
        const double alpha = static_cast<double>(a) / static_cast<double>(q);
        if (arcs.classify(alpha).has_value()) continue;
        rep.minor.push_back({a, q, ratio(a, q), nonzero(q)});
    }
    for (i64 q = 1; q <= static_cast<i64>(major_q_max); ++q) {
        for (i64 a = 1; a <= q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            rep.major.push_back({a, q, ratio(a, q), nonzero(q)});
        }
    }
    std::vector<double> mi, ma, manz;
    for (const auto& s : rep.minor) mi.push_back(s.ratio);
    for (const auto& s : rep.major) {
        ma.push_back(s.ratio);
        if (s.model_nonzero) manz.push_back(s.ratio);
    }
    rep.median_minor = median(mi);
    rep.median_major = median(ma);
    rep.median_major_nonzero_model = median(manz);
    rep.max_minor = mi.empty() ? 0.0 : *std::max_element(mi.begin(), mi.end());
    return rep;
}

} // namespace chenprime
