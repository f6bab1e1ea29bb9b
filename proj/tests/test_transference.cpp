#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chenprime/report.hpp"
#include "chenprime/transference.hpp"
#include "oracles.hpp"

using namespace chenprime;

TEST(Ledger, VarpiFromConstants) {
    const auto L = choose_parameters(99'999, Profile::desk);
    EXPECT_DOUBLE_EQ(L.varpi, 1e-4);
    LedgerInputs in;
    in.C1 = 0.5;
    EXPECT_DOUBLE_EQ(choose_parameters(99'999, Profile::desk, in).varpi, 0.5e-4);
}

TEST(Ledger, PrimorialW) {
    // log 10^6 = 13.8: P(5) = 6 fits, P(7) = 30 does not
    EXPECT_EQ(select_W(1'000'000), (std::pair<u64, u64>{6, 5}));
    // log n < 6 leaves only W = 2
    EXPECT_EQ(select_W(300).first, 2U);
    // log n >= 30
    EXPECT_EQ(select_W(static_cast<u64>(std::exp(30.5))).first, 30U);
}

TEST(Ledger, DeskIntervalAndPrimeN) {
    const auto L = choose_parameters(99'999, Profile::desk);
    const double base = 99'999.0 / static_cast<double>(L.W);
    EXPECT_GE(static_cast<double>(L.N), (1 + 0.09 / 20) * base);
    EXPECT_LE(static_cast<double>(L.N), (1 + 0.09 / 10) * base);
    EXPECT_TRUE(oracle::is_prime(L.N));
    for (u64 m = static_cast<u64>(std::ceil(L.N_lo)); m < L.N; ++m) EXPECT_FALSE(oracle::is_prime(m));
    EXPECT_NEAR(L.R, std::pow(static_cast<double>(L.N), 0.1), 1e-12);
    EXPECT_EQ(L.provenance.at("kappa"), "desk default");
    EXPECT_EQ((L.b1 + L.b2 + L.b3) % L.W, 99'999 % L.W);
    EXPECT_EQ(L.n_prime * L.W + L.b1 + L.b2 + L.b3, 99'999U);
}

TEST(Ledger, KappaInequalityEvaluated) {
    // the inequality is computed in log space for both profiles
    auto desk = choose_parameters(99'999, Profile::desk);
    EXPECT_FALSE(desk.kappa_inequality_ok);
    LedgerInputs tiny;
    tiny.delta = 1e-200;
    tiny.epsilon = 1e-300;
    desk = choose_parameters(99'999, Profile::desk, tiny);
    EXPECT_GT(desk.kappa_lhs_log10, desk.kappa_rhs_log10);   // delta^{1/13} term dominates
}

TEST(Ledger, PaperProfileHasNoIntegerN) {
    try {
        choose_parameters(99'999, Profile::paper);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("contains no integer"), std::string::npos);
    }
}

TEST(Ledger, PaperConstantsAreConsistent) {
    ParameterLedger L;
    L.n = 99'999;
    fill_constants(L, Profile::paper, {});
    EXPECT_TRUE(L.kappa_inequality_ok);
    EXPECT_FALSE(L.k0_resolved);
    EXPECT_GE(L.k0_lower_bound, 81U);
    EXPECT_NEAR(L.log10_delta, 78 * -4.0 - 13 * std::log10(144.0), 1e-9);
}

TEST(SplitResidues, Examples) {
    EXPECT_EQ(split_residues(33, 6), (std::array<u64, 3>{5, 5, 5}));
    EXPECT_EQ(split_residues(9, 2), (std::array<u64, 3>{1, 1, 1}));
    EXPECT_THROW(split_residues(34, 6), PreconditionError);
    EXPECT_THROW(split_residues(35, 6), PreconditionError);
}

TEST(SplitResidues, ExhaustiveExistence) {
    for (u64 W : {2, 6, 30}) {
        for (u64 n = 9; n <= 3000; n += 6) {
            const auto b = split_residues(n, W);
            EXPECT_EQ((b[0] + b[1] + b[2]) % W, n % W);
            for (u64 x : b) EXPECT_EQ(std::gcd(x * (x + 2), W), 1U);
        }
    }
}

TEST(BuildWeights, SupportsMatchChenAndPrimeData) {
    const auto L = choose_parameters(99'999, Profile::desk);
    const FactorTable table(1, L.n + 2);
    const auto tw = build_weights(L, table);
    std::vector<u64> expect1;
    for (u64 p : chen_primes(L.n, ChenVariant::strict(tw.z1), table)) {
        if (p % L.W == L.b1 % L.W && p >= L.b1 && (p - L.b1) / L.W <= (L.n - L.b1) / (2 * L.W)) {
            expect1.push_back((p - L.b1) / L.W);
        }
    }
    EXPECT_EQ(tw.A1, expect1);
    std::vector<u64> expect3;
    for (u64 x = 0; x <= (L.n - L.b3) / L.W; ++x) {
        const u64 p = L.W * x + L.b3;
        if (oracle::is_prime(p) && static_cast<double>(oracle::smallest_factor(p + 2)) >= tw.z0) expect3.push_back(x);
    }
    EXPECT_EQ(tw.A3, expect3);
    for (const auto* w : {&tw.a1, &tw.a2, &tw.a3}) {
        for (double v : w->values()) ASSERT_GE(v, 0.0);
    }
    EXPECT_GT(tw.a3.mass(), 0.5);
    EXPECT_LT(tw.a3.mass(), 1.5);
}

TEST(Smoothing, FullBohrSetAveragesOut) {
    std::mt19937_64 rng(1);
    std::vector<double> v(101);
    for (auto& x : v) x = std::uniform_real_distribution<double>(0, 1)(rng);
    const ZnWeight a(v);
    auto L = choose_parameters(99'999, Profile::desk);
    const auto bohr = bohr_set({}, 0.5, 101);
    const auto spec = spectrum(a, 1e9);
    const auto r = smooth_and_bound(a, bohr, spec, L);
    for (u64 x = 0; x < 101; ++x) EXPECT_NEAR(r.smoothed[x], a.mass() / 101.0, 1e-12);
    EXPECT_TRUE(r.mass_ok);
    EXPECT_FALSE(r.sup_asserted);
}

TEST(Smoothing, BohrFourierCloseness) {
    std::mt19937_64 rng(3);
    auto L = choose_parameters(99'999, Profile::desk);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<u64> R(std::uniform_int_distribution<int>(1, 3)(rng));
        for (auto& r : R) r = std::uniform_int_distribution<u64>(0, 100)(rng);
        const double eps = trial % 2 ? 0.05 : 0.1;
        const auto bohr = bohr_set(R, eps, 101);
        const auto b = ZnWeight::normalized_indicator(101, bohr.members);
        for (u64 r : R) EXPECT_LE(std::abs(1.0 - dft(b)[r]), 16 * eps * eps + 1e-12);
        // same statement through smooth_and_bound, with R as the spectrum
        const Spectrum spec{0.0, R, 0.0, 0.0, true};
        EXPECT_TRUE(smooth_and_bound(ZnWeight::uniform(101), bohr, spec, L).betaone_ok);
    }
    EXPECT_THROW(smooth_and_bound(ZnWeight::uniform(101), BohrSet{{}, 0.1, 101, {}, 0, false}, Spectrum{}, L),
                 DomainError);
}

TEST(Threesum, IdentitySmoothingHasZeroDiff) {
    std::mt19937_64 rng(5);
    std::vector<double> v(101);
    for (auto& x : v) x = std::uniform_real_distribution<double>(0, 1)(rng);
    const ZnWeight a(v);
    auto L = choose_parameters(99'999, Profile::desk);
    const auto bohr = bohr_set({1}, 0.001, 101);   // B = {0}
    ASSERT_EQ(bohr.members, std::vector<u64>{0});
    const auto s = smooth_and_bound(a, bohr, spectrum(a, 1.0), L).smoothed;
    const auto c = threesum_comparison(a, a, a, s, s, s, 7, L);
    EXPECT_NEAR(c.diff, 0.0, 1e-10);
    EXPECT_TRUE(c.ok);
    EXPECT_GT(c.budget, 0.0);
}

TEST(Pollard, FullSetsViolateHypothesisAtFive) {
    std::vector<u64> all{0, 1, 2, 3, 4};
    EXPECT_EQ(pollard_count(5, all, all, all, 3), 25U);
    EXPECT_THROW(pollard_check(5, all, all, all, 3), PreconditionError);
    const auto bad = pollard_hypotheses(5, 5, 5, 5);
    ASSERT_EQ(bad.size(), 1U);
    EXPECT_NE(bad[0].find("2 theta^-2"), std::string::npos);
}

TEST(Pollard, FullSetsAtLargerPrime) {
    std::vector<u64> all(37);
    std::iota(all.begin(), all.end(), 0);
    const auto r = pollard_check(37, all, all, all, 0);
    EXPECT_EQ(r.count, 37U * 37U);
    EXPECT_TRUE(r.ok);
}

TEST(Pollard, ElevenExhaustiveTargets) {
    std::mt19937_64 rng(11);
    int instances = 0;
    while (instances < 50) {
        const auto X = random_pollard_instance(11, rng);
        if (X[0].size() < 8 || X[1].size() < 8 || X[2].size() < 8) continue;
        for (u64 y = 0; y < 11; ++y) {
            const auto r = pollard_check(11, X[0], X[1], X[2], y);
            EXPECT_EQ(r.count, oracle::sumset_count(11, X[0], X[1], X[2], y));
            EXPECT_TRUE(r.ok);
        }
        ++instances;
    }
}

TEST(Pollard, SweepToThirtyOne) {
    const auto s = pollard_sweep(11, 31, 40, 7);
    EXPECT_EQ(s.moduli, (std::vector<u64>{11, 13, 17, 19, 23, 29, 31}));
    EXPECT_EQ(s.instances, 7U * 40U);
    EXPECT_EQ(s.failures, 0U);
    EXPECT_GE(s.min_ratio, 1.0);
}

TEST(Pollard, HypothesisFailuresListed) {
    try {
        pollard_check(12, {1}, {1}, {1}, 0);
        FAIL();
    } catch (const PreconditionError& e) {
        const std::string m = e.what();
        EXPECT_NE(m.find("not prime"), std::string::npos);
        EXPECT_NE(m.find("theta_1 + theta_2 + theta_3"), std::string::npos);
    }
}

TEST(RunTransference, DeskEndToEnd) {
    const auto rep = run_transference(99'999, Profile::desk);
    EXPECT_TRUE(rep.asserted_ok());
    EXPECT_GT(rep.raw_triple, 0.0);
    EXPECT_TRUE(rep.ground_truth);
    EXPECT_EQ(rep.zn_solutions, rep.lifted_solutions);
    EXPECT_EQ(rep.lifted_solutions, rep.enumerated_solutions);
    bool saw_diag = false;
    for (const auto& c : rep.checks) saw_diag = saw_diag || !c.asserted;
    EXPECT_TRUE(saw_diag);
    const auto j = to_json(rep);
    EXPECT_EQ(j["ledger"]["profile"], "desk");
    EXPECT_TRUE(j["stages"].contains("pollard"));
}

TEST(Report, EnvelopeShape) {
    const auto j = make_envelope("chen", "desk", {{"bound", 50}}, json::array(), {{"x", 1.0, 2.0, true, false}});
    EXPECT_EQ(j["schema_version"], kSchemaVersion);
    EXPECT_EQ(j["version"], kVersion);
    EXPECT_EQ(j["assertions"][0]["status"], "diagnostic");
    EXPECT_TRUE(j.contains("timestamp"));
}
