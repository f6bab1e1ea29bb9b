// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "chenprime/circle.hpp"
#include "chenprime/fourier.hpp"
#include "chenprime/goldbach.hpp"
#include "chenprime/rosser.hpp"
#include "chenprime/selberg.hpp"
#include "chenprime/transference.hpp"
#include "oracles.hpp"

using namespace chenprime;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void run(int id, const char* name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("[%s] %2d %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome rosser_sandwich() {
    const PrimeSet ps(100'000);
    u64 checked = 0, bad = 0;
    for (double D : {10.0, 1e3, 1e5}) {
        const auto plus = build_rosser(D, RosserSign::plus, ps);
        const auto minus = build_rosser(D, RosserSign::minus, ps);
        for (u64 q = 1; q <= 100'000; ++q) {
            if (!is_squarefree(factorize_trial(q))) continue;
            ++checked;
            if (!sandwich_check(q, plus, minus).ok) ++bad;
        }
    }
    return {bad == 0, fmt("%llu (q, D) pairs, %llu violations", (unsigned long long)checked, (unsigned long long)bad)};
}

Outcome singular_series() {
    const double v = singular_series_S1(1'000'000);
    return {std::abs(v - 0.66016) <= 5e-4, fmt("S1 = %.8f", v)};
}

Outcome chen_census() {
    std::vector<u64> expect;
    for (u64 p = 2; p <= 10'000; ++p) {
        if (oracle::chen_basic(p)) expect.push_back(p);
    }
    const auto got = chen_primes(10'000, ChenVariant::basic());
    return {got == expect, fmt("library %zu, oracle %zu", got.size(), expect.size())};
}

Outcome fourier_identities() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double parseval = 0, conv = 0, energy = 0, triple = 0;
    for (u64 N : {101, 257, 509}) {
        for (int t = 0; t < 50; ++t) {
            std::vector<double> a(N), b(N), c(N);
            for (u64 x = 0; x < N; ++x) {
                a[x] = u(rng);
                b[x] = u(rng) < 0.5 ? 0.0 : u(rng);
                c[x] = u(rng);
            }
            const ZnWeight f(a), g(b), h(c);
            const auto& F = f.transform();
            double l = 0, r = 0;
            for (const auto& z : F) l += std::norm(z);
            for (double x : a) r += x * x;
            parseval = std::max(parseval, std::abs(l - N * r) / (N * r));
            const auto fg = convolve_direct(f, g);
            const auto& FG = fg.transform();
            const auto& G = g.transform();
            for (u64 k = 0; k < N; ++k) {
                const cplx rhs = F[k] * G[k];
                conv = std::max(conv, std::abs(FG[k] - rhs) / std::max(1.0, std::abs(rhs)));
            }
            energy = std::max(energy, additive_energy(f).rel_err);
            triple = std::max(triple, triple_sum(f, g, h, (t * 7) % N).rel_diff);
        }
    }
    const bool ok = parseval <= 1e-9 && conv <= 1e-9 && energy <= 1e-6 && triple <= 1e-8;
    return {ok, fmt("max rel err: parseval %.2e, convolution %.2e, energy %.2e, triple %.2e", parseval, conv, energy,
                    triple)};
}

Outcome pollard() {
    const auto s = pollard_sweep(11, 31, 200, 20240601);
    return {s.failures == 0 && s.instances == 1400,
            fmt("%llu instances, %llu (instance, y) checks, %llu failures, min count/bound %.3f",
                (unsigned long long)s.instances, (unsigned long long)s.checks, (unsigned long long)s.failures,
                s.min_ratio)};
}

Outcome bohr_size() {
    std::mt19937_64 rng(20240601);
    int bad = 0;
    for (int t = 0; t < 100; ++t) {
        const u64 N = t % 2 ? 509 : 101;
        const double eps = std::array{0.05, 0.1, 0.25}[t % 3];
        std::vector<u64> R(std::uniform_int_distribution<int>(0, 4)(rng));
        for (auto& r : R) r = std::uniform_int_distribution<u64>(0, N - 1)(rng);
        if (!bohr_set(R, eps, N).size_ok) ++bad;
    }
    return {bad == 0, fmt("100 instances, %d below ceil(eps^|R| N) - 1", bad)};
}

Outcome spm() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int bad = 0;
    double slack = 1e300;
    for (auto [W, b] : {std::pair<u64, u64>{2, 1}, {6, 5}, {30, 11}}) {
        const auto s = ExpSum::build(SieveContext::make(100'000, W, b, 8));
        std::vector<double> alphas(100);
        for (auto& a : alphas) a = u(rng);
        const auto r = spm_comparison(s, alphas);
        bad += static_cast<int>(std::count_if(r.rows.begin(), r.rows.end(), [](const SpmRow& x) { return !x.ok; }));
        slack = std::min(slack, r.min_slack);
    }
    return {bad == 0, fmt("3 contexts x 100 alphas, %d violations, min slack %.3f", bad, slack)};
}

Outcome selberg() {
    struct Toy {
        int stage;
        u64 W, M;
        double lo, hi;
    };
    double l1 = 0, lmax = 0, qerr = 0;
    for (const auto& t : {Toy{1, 2, 1, 2.0, 100.0}, Toy{1, 6, 5, 2.0, 300.0}, Toy{2, 6, 1, 5.0, 1000.0}}) {
        const auto s = build_selberg_levels(t.stage, t.M, t.W, t.lo, t.hi);
        l1 = std::max(l1, std::abs(s.lambda(1) - 1.0));
        lmax = std::max(lmax, s.max_abs_lambda());
        qerr = std::max(qerr, selberg_quadratic_form(s).rel_err);
    }
    return {l1 <= 1e-10 && lmax <= 1 + 1e-10 && qerr <= 1e-8,
            fmt("|lambda(1) - 1| %.1e, max|lambda| %.12f, diagonalization rel err %.1e", l1, lmax, qerr)};
}

Outcome goldbach() {
    const FactorTable table(1, 100'002);
    const auto s = range_survey(9, 100'000, ChenVariant::basic(), table);
    u64 mismatch = 0;
    for (const auto& row : s.rows) {
        const bool one = !find_representations(row.n, ChenVariant::basic(), ~0U, 1, table).empty();
        if (one != (row.rep_count > 0)) ++mismatch;
    }
    std::string hist;
    for (const auto& [k, c] : s.min_k_histogram) hist += fmt(" k=%u:%llu", k, (unsigned long long)c);
    return {s.failures.empty() && mismatch == 0,
            fmt("%zu n, %zu failures, limit=1 mismatches %llu, max min-k %u (recorded), histogram%s", s.rows.size(),
                s.failures.size(), (unsigned long long)mismatch, s.max_min_k, hist.c_str())};
}

Outcome contrast() {
    const auto ctx = SieveContext::make(1'000'000, 6, 5, 8);
    const auto s = ExpSum::build(ctx);
    const ArcDissection arcs(ctx.n, 2.0);
    const auto r = minor_major_contrast(s, arcs, 50, 20240601);
    return {r.median_minor < r.median_major,
            fmt("Q = %.1f, median minor %.4f vs median major (all centers q <= 10) %.4f; "
                "supplementary: median over centers with nonzero main term %.4f, max minor %.4f",
                arcs.Q(), r.median_minor, r.median_major, r.median_major_nonzero_model, r.max_minor)};
}

Outcome linear_sieve() {
    const double eg = std::exp(std::numbers::egamma);
    const auto v2 = linear_sieve_F_f(2.0), v3 = linear_sieve_F_f(3.0), v20 = linear_sieve_F_f(20.0);
    bool ok = std::abs(v2.F - eg) <= 1e-6 && v2.f == 0.0 && std::abs(v3.F - 2 * eg / 3) <= 1e-6;
    double pF = 1e9, pf = -1;
    for (int i = 0; i < 200; ++i) {
        const auto v = linear_sieve_F_f(2.0 + 18.0 * i / 199.0);
        ok = ok && v.F <= pF && v.f >= pf && v.f <= 1.0 && v.F >= 1.0;
        pF = v.F;
        pf = v.f;
    }
    ok = ok && std::abs(v20.F - 1) < 1e-2 && std::abs(1 - v20.f) < 1e-2;
    return {ok, fmt("F(2) = %.8f, F(3) = %.8f, F(20) = %.8f, f(20) = %.8f", v2.F, v3.F, v20.F, v20.f)};
}

Outcome transference() {
    const auto rep = run_transference(99'999, Profile::desk);
    int asserted = 0, diag = 0, diag_fail = 0;
    for (const auto& c : rep.checks) {
        if (c.asserted) {
            ++asserted;
        } else {
            ++diag;
            diag_fail += !c.holds;
        }
    }
    const bool ok = rep.asserted_ok() && rep.raw_triple > 0.0 && rep.ground_truth;
    return {ok, fmt("n = 99999, N = %llu, %d exact checks all hold = %s, %d diagnostics logged (%d false), "
                    "raw triple %.3e, %llu Z_N solutions all lifting, ground truth %s",
                    (unsigned long long)rep.ledger.N, asserted, rep.asserted_ok() ? "yes" : "no", diag, diag_fail,
                    rep.raw_triple, (unsigned long long)rep.zn_solutions, rep.ground_truth ? "yes" : "no")};
}

} // namespace

int main() {
    run(1, "Rosser sandwich", rosser_sandwich);
    run(2, "Singular series", singular_series);
    run(3, "Chen census", chen_census);
    run(4, "Fourier identities", fourier_identities);
    run(5, "Pollard lemma", pollard);
    run(6, "Bohr size", bohr_size);
    run(7, "Spm comparison", spm);
    run(8, "Selberg weights", selberg);
    run(9, "Ternary Goldbach survey", goldbach);
    run(10, "Minor/major contrast", contrast);
    run(11, "Linear sieve functions", linear_sieve);
    run(12, "End-to-end transference", transference);
    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
