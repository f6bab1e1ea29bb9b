#pragma once

// Exhaustive search for n = p1 + p2 + p3 with p1 <= p2 Chen primes.

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "chenprime/arith.hpp"
#include "chenprime/errors.hpp"
#include "chenprime/numeric.hpp"
#include "chenprime/parallel.hpp"

namespace chenprime {

struct Representation {
    u64 n;
    u64 p1, p2, p3;
    ChenVariant variant;
    unsigned p3_class;   // least k with p3 + 2 in P_k, i.e. Omega(p3 + 2)
};

inline void require_goldbach_n(u64 n) {
    if (n < 9 || n % 2 == 0 || n % 3 != 0) {
        throw PreconditionError("goldbach: n must be odd, divisible by 3 and >= 9 (got " + std::to_string(n) + ")");
    }
}

// Re-validates a representation against the table: primality, Chen predicates and the sum.
inline bool validate(const Representation& r, const FactorTable& table) {
    return r.p1 + r.p2 + r.p3 == r.n && r.p1 <= r.p2 && is_chen(r.p1, r.variant, table) &&
           is_chen(r.p2, r.variant, table) && table.is_prime(r.p3) && table.omega_big(r.p3 + 2) == r.p3_class;
}

constexpr u64 kNoLimit = std::numeric_limits<u64>::max();

// Ordered by (p1, p2); k_cap filters on Omega(p3 + 2). The table must cover [1, n + 2].
inline std::vector<Representation> find_representations(u64 n, const ChenVariant& variant, unsigned k_cap, u64 limit,
                                                        const FactorTable& table) {
    require_goldbach_n(n);
    if (!table.covers(1) || !table.covers(n + 2)) throw DomainError("find_representations: table must cover [1, n + 2]");
    std::vector<Representation> out;
    if (limit == 0) return out;
    const auto chen = chen_primes(n, variant, table);
    for (std::size_t i = 0; i < chen.size() && 2 * chen[i] < n; ++i) {
        for (std::size_t j = i; j < chen.size() && chen[i] + chen[j] < n; ++j) {
            const u64 p3 = n - chen[i] - chen[j];
            if (!table.is_prime(p3)) continue;
            const unsigned k = table.omega_big(p3 + 2);
            if (k > k_cap) continue;
            out.push_back({n, chen[i], chen[j], p3, variant, k});
            if (out.size() >= limit) return out;
        }
    }
    return out;
}

inline std::vector<Representation> find_representations(u64 n, const ChenVariant& variant = ChenVariant::basic(),
                                                        unsigned k_cap = std::numeric_limits<unsigned>::max(),
                                                        u64 limit = kNoLimit) {
    const FactorTable table(1, n + 2);
    return find_representations(n, variant, k_cap, limit, table);
}

struct SurveyRow {
    u64 n;
    u64 rep_count;        // triples p1 <= p2 Chen, p3 prime
    unsigned min_k_p3;    // min Omega(p3 + 2) over those triples; 0 when none
    u64 all_chen_count;   // triples with p3 also Chen
    bool has_all_chen;
};

struct SurveyReport {
    u64 lo, hi;
    ChenVariant variant;
    std::vector<SurveyRow> rows;
    std::vector<u64> failures;                   // n with no representation
    std::map<unsigned, u64> min_k_histogram;
    unsigned max_min_k = 0;
};

// Pair counts C(m) = #{p1 <= p2 Chen : p1 + p2 = m} are tabulated once, then
// every n is a sum over p3 of C(n - p3).
inline SurveyReport range_survey(u64 n_lo, u64 n_hi, const ChenVariant& variant, const FactorTable& table,
                                 unsigned threads = 1) {
    SurveyReport rep{n_lo, n_hi, variant, {}, {}, {}, 0};
    const u64 lo = std::max<u64>(n_lo, 9);
    if (n_hi < lo) return rep;
    if (!table.covers(1) || !table.covers(n_hi + 2)) throw DomainError("range_survey: table must cover [1, hi + 2]");
    const auto chen = chen_primes(n_hi, variant, table);
    std::vector<u64> pairs(n_hi + 1, 0);
    for (std::size_t i = 0; i < chen.size(); ++i) {
        for (std::size_t j = i; j < chen.size() && chen[i] + chen[j] <= n_hi; ++j) ++pairs[chen[i] + chen[j]];
    }
    std::vector<u64> primes;
    std::vector<unsigned> klass;
    std::vector<char> chen3;
    for (u64 p = 2; p <= n_hi; ++p) {
        if (!table.is_prime(p)) continue;
        primes.push_back(p);
        klass.push_back(table.omega_big(p + 2));
        chen3.push_back(is_chen(p, variant, table) ? 1 : 0);
    }
    std::vector<u64> ns;
    for (u64 n = lo; n <= n_hi; ++n) {
        if (n % 2 == 1 && n % 3 == 0) ns.push_back(n);
    }
    rep.rows.resize(ns.size());
    parallel_for(ns.size(), threads, [&](std::size_t i) {
        const u64 n = ns[i];
        SurveyRow row{n, 0, std::numeric_limits<unsigned>::max(), 0, false};
        for (std::size_t k = 0; k < primes.size() && primes[k] < n; ++k) {
            const u64 c = pairs[n - primes[k]];
            if (c == 0) continue;
            row.rep_count += c;
            row.min_k_p3 = std::min(row.min_k_p3, klass[k]);
            if (chen3[k]) row.all_chen_count += c;
        }
        if (row.rep_count == 0) row.min_k_p3 = 0;
        row.has_all_chen = row.all_chen_count > 0;
        rep.rows[i] = row;
    });
    for (const auto& row : rep.rows) {
        if (row.rep_count == 0) {
            rep.failures.push_back(row.n);
            continue;
        }
        ++rep.min_k_histogram[row.min_k_p3];
        rep.max_min_k = std::max(rep.max_min_k, row.min_k_p3);
    }
    return rep;
}

inline SurveyReport range_survey(u64 n_lo, u64 n_hi, const ChenVariant& variant = ChenVariant::basic(),
                                 unsigned threads = 1) {
    if (n_hi < std::max<u64>(n_lo, 9)) return SurveyReport{n_lo, n_hi, variant, {}, {}, {}, 0};
    const FactorTable table(1, n_hi + 2);
    return range_survey(n_lo, n_hi, variant, table, threads);
}

} // namespace chenprime
