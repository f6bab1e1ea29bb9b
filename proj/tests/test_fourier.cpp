#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chenprime/fourier.hpp"
#include "oracles.hpp"

using namespace chenprime;

namespace {

std::vector<double> random_values(u64 N, std::mt19937_64& rng, double sparsity = 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(N);
    for (auto& x : v) x = u(rng) < sparsity ? 0.0 : u(rng);
    return v;
}

double max_abs(const std::vector<cplx>& a) {
    double m = 0.0;
    for (const auto& z : a) m = std::max(m, std::abs(z));
    return m;
}

} // namespace

TEST(ZnWeight, RejectsNegative) {
    EXPECT_THROW(ZnWeight(std::vector<double>{1.0, -0.5}), DomainError);
    EXPECT_THROW(ZnWeight(std::vector<double>{}), DomainError);
    EXPECT_THROW(ZnWeight::normalized_indicator(5, {}), DomainError);
}

TEST(Dft, PointMassAndUniform) {
    const auto F = dft(ZnWeight::point_mass(101, 0));
    for (const auto& z : F) EXPECT_LT(std::abs(z - cplx(1.0, 0.0)), 1e-15);
    const auto U = dft(ZnWeight::uniform(101));
    EXPECT_NEAR(U[0].real(), 1.0, 1e-12);
    for (std::size_t r = 1; r < U.size(); ++r) EXPECT_LT(std::abs(U[r]), 1e-12);
}

TEST(Dft, MatchesDirectSum) {
    std::mt19937_64 rng(1);
    for (u64 N : {1, 2, 64, 101, 1024, 1031, 2003, 4096}) {
        const auto v = random_values(N, rng);
        const ZnWeight f(v);
        const auto F = dft(f);
        const auto O = oracle::dft(v);
        std::vector<cplx> diff(N);
        for (u64 r = 0; r < N; ++r) diff[r] = F[r] - O[r];
        EXPECT_LT(max_abs(diff), 1e-9 * std::max(1.0, f.mass())) << N;
        std::uniform_int_distribution<u64> pick(0, N - 1);
        for (int i = 0; i < 8; ++i) {
            const u64 r = pick(rng);
            EXPECT_LT(std::abs(dft_at(f, r) - O[r]), 1e-9 * std::max(1.0, f.mass()));
        }
    }
}

TEST(Dft, ParsevalAndInversion) {
    std::mt19937_64 rng(9);
    for (u64 N : {101, 257, 509, 2039}) {
        const auto v = random_values(N, rng, 0.5);
        const ZnWeight f(v);
        const auto& F = f.transform();
        double lhs = 0.0, rhs = 0.0;
        for (const auto& z : F) lhs += std::norm(z);
        for (double x : v) rhs += x * x;
        EXPECT_LT(std::abs(lhs - N * rhs), 1e-9 * N * rhs);
        const auto back = idft(F);
        for (u64 x = 0; x < N; ++x) ASSERT_NEAR(back[x].real(), v[x], 1e-9);
    }
}

TEST(Dft, CacheSharedByCopies) {
    const ZnWeight f = ZnWeight::point_mass(13, 3);
    const ZnWeight g = f;
    EXPECT_EQ(&f.transform(), &g.transform());
}

TEST(Convolve, IdentityAndTranslation) {
    std::mt19937_64 rng(4);
    const ZnWeight f(random_values(37, rng));
    const auto h = convolve(f, ZnWeight::point_mass(37, 0));
    for (u64 x = 0; x < 37; ++x) EXPECT_NEAR(h[x], f[x], 1e-12);
    const auto t = convolve(ZnWeight::point_mass(37, 30), ZnWeight::point_mass(37, 20));
    for (u64 x = 0; x < 37; ++x) EXPECT_NEAR(t[x], x == 13 ? 1.0 : 0.0, 1e-12);
    EXPECT_THROW(convolve(f, ZnWeight::uniform(36)), DomainError);
}

TEST(Convolve, MatchesDoubleLoopAndDiagonalizes) {
    std::mt19937_64 rng(6);
    for (u64 N : {64, 101, 1500}) {
        const auto a = random_values(N, rng), b = random_values(N, rng, 0.3);
        const ZnWeight f(a), g(b);
        const auto h = convolve(f, g);
        const auto o = N <= 256 ? oracle::convolve(a, b) : convolve_direct(f, g).values();
        for (u64 x = 0; x < N; ++x) ASSERT_NEAR(h[x], o[x], 1e-9 * std::max(1.0, o[x]));
        std::uniform_int_distribution<u64> pick(0, N - 1);
        for (int i = 0; i < 8; ++i) {
            const u64 r = pick(rng);
            const cplx lhs = dft_at(h, r), rhs = dft_at(f, r) * dft_at(g, r);
            EXPECT_LT(std::abs(lhs - rhs), 1e-9 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST(Spectrum, Trivial) {
    const auto f = ZnWeight::point_mass(17, 4);
    EXPECT_TRUE(spectrum(f, 1.5).members.empty());
    EXPECT_EQ(spectrum(f, 1e-9).members.size(), 17U);
    EXPECT_THROW(spectrum(f, 0.0), DomainError);
}

TEST(Spectrum, ThresholdAndChebyshev) {
    std::mt19937_64 rng(8);
    const auto v = random_values(101, rng, 0.7);
    const ZnWeight f(v);
    const auto O = oracle::dft(v);
    for (double d : {0.5, 1.0, 2.0, 5.0}) {
        const auto s = spectrum(f, d);
        std::vector<u64> expect;
        for (u64 r = 0; r < 101; ++r) {
            if (std::abs(O[r]) > d) expect.push_back(r);
        }
        EXPECT_EQ(s.members, expect);
        EXPECT_TRUE(s.bound_ok);
        EXPECT_LE(static_cast<double>(s.members.size()), s.chebyshev_bound);
    }
}

TEST(Bohr, Examples) {
    EXPECT_EQ(bohr_set({}, 0.1, 101).members.size(), 101U);
    EXPECT_EQ(bohr_set({0}, 0.1, 101).members.size(), 101U);
    const auto b = bohr_set({1}, 0.1, 101);
    std::vector<u64> expect;
    for (u64 x = 0; x <= 10; ++x) expect.push_back(x);
    for (u64 x = 91; x <= 100; ++x) expect.push_back(x);
    EXPECT_EQ(b.members, expect);
    EXPECT_TRUE(b.size_ok);
    EXPECT_THROW(bohr_set({1}, 0.6, 101), DomainError);
}

TEST(Bohr, MembershipMatchesDefinition) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 30; ++i) {
        const u64 N = i % 2 ? 101 : 509;
        std::vector<u64> R(std::uniform_int_distribution<int>(0, 4)(rng));
        for (auto& r : R) r = std::uniform_int_distribution<u64>(0, N - 1)(rng);
        const double eps = std::array{0.05, 0.1, 0.25}[i % 3];
        const auto b = bohr_set(R, eps, N);
        std::vector<u64> expect;
        for (u64 x = 0; x < N; ++x) {
            bool in = true;
            for (u64 r : R) {
                const double t = static_cast<double>(x * r % N) / static_cast<double>(N);
                in = in && std::min(t, 1.0 - t) <= eps + 1e-12;
            }
            if (in) expect.push_back(x);
        }
        EXPECT_EQ(b.members, expect);
        EXPECT_TRUE(b.size_ok);
    }
}

TEST(TripleSum, Trivial) {
    const auto d = ZnWeight::point_mass(13, 0);
    EXPECT_NEAR(triple_sum(d, d, d, 0).direct, 1.0, 1e-15);
    EXPECT_NEAR(triple_sum(d, d, d, 0).fourier, 1.0, 1e-12);
    const auto u = ZnWeight::uniform(13);
    const auto s = triple_sum(u, u, u, 5);
    EXPECT_NEAR(s.direct, 1.0 / 13.0, 1e-15);
    EXPECT_NEAR(s.fourier, 1.0 / 13.0, 1e-12);
}

TEST(TripleSum, DirectFourierOracle) {
    std::mt19937_64 rng(10);
    for (u64 N : {7, 50, 101}) {
        const auto a = random_values(N, rng), b = random_values(N, rng, 0.5), c = random_values(N, rng);
        const ZnWeight f(a), g(b), h(c);
        for (u64 t : {u64{0}, u64{3}, N - 1}) {
            const auto s = triple_sum(f, g, h, t);
            const double o = oracle::triple(a, b, c, t);
            EXPECT_NEAR(s.direct, o, 1e-10 * o);
            EXPECT_NEAR(s.fourier, o, 1e-9 * o);
            EXPECT_LT(s.rel_diff, 1e-9);
        }
    }
}

TEST(TripleSum, LargerPrimeModuli) {
    std::mt19937_64 rng(14);
    for (u64 N : {257, 509}) {
        const ZnWeight f(random_values(N, rng)), g(random_values(N, rng)), h(random_values(N, rng, 0.9));
        EXPECT_LT(triple_sum(f, g, h, 17).rel_diff, 1e-8);
    }
}
