#include <gtest/gtest.h>

#include <random>

#include "modcong/arith.hpp"
#include "modcong/matrix.hpp"
#include "modcong/poly.hpp"
#include "modcong/polyfactor.hpp"

using namespace modcong;

namespace {

PolyQ poly_from_ints(std::initializer_list<long> cs) {
    std::vector<Rat> v;
    for (long c : cs) v.emplace_back(c);
    return PolyQ(std::move(v));
}

MatQ random_matq(int n, std::mt19937_64& rng, int spread = 9) {
    MatQ m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m.at(i, j) = Rat(static_cast<long>(rng() % (2 * spread + 1)) - spread);
    return m;
}

// independent charpoly oracle: interpolate det(kI - M) at integer points
PolyQ charpoly_by_interpolation(const MatQ& m) {
    int n = m.rows();
    std::vector<Rat> pts, vals;
    for (long k = 0; k <= n; ++k) {
        MatQ a = m * Rat(-1);
        for (int i = 0; i < n; ++i) a.at(i, i) += Rat(k);
        pts.emplace_back(k);
        vals.push_back(a.det());
    }
    return interpolate(pts, vals);
}

}  // namespace

TEST(Kernel, SpecExamples) {
    EXPECT_TRUE(kernel(MatQ::identity(2)).empty());

    MatQ m(1, 2);
    m.at(0, 0) = 1;
    m.at(0, 1) = 1;
    auto k = kernel(m);
    ASSERT_EQ(k.size(), 1u);
    EXPECT_EQ(k[0].at(0, 0), Rat(1));
    EXPECT_EQ(k[0].at(1, 0), Rat(-1));

    MatQ m2(2, 2);
    m2.at(0, 0) = 1; m2.at(0, 1) = 2;
    m2.at(1, 0) = 2; m2.at(1, 1) = 4;
    auto k2 = kernel(m2);
    ASSERT_EQ(k2.size(), 1u);
    EXPECT_EQ(k2[0].at(0, 0), Rat(1));
    EXPECT_EQ(k2[0].at(1, 0), rat(-1, 2));
}

TEST(Kernel, RankNullityAndAnnihilation) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        MatQ m = random_matq(n, rng, 3);
        auto basis = kernel(m);
        EXPECT_EQ(static_cast<int>(basis.size()), n - m.rank());
        for (const auto& v : basis) {
            auto mv = m * v;
            EXPECT_TRUE(mv.is_zero());
        }
    }
}

TEST(Charpoly, SpecExamples) {
    EXPECT_EQ(charpoly(MatQ(3, 3)), poly_from_ints({0, 0, 0, 1}));
    EXPECT_EQ(charpoly(MatQ::identity(2)), poly_from_ints({1, -2, 1}));
    MatQ swap2(2, 2);
    swap2.at(0, 1) = 1;
    swap2.at(1, 0) = 1;
    EXPECT_EQ(charpoly(swap2), poly_from_ints({-1, 0, 1}));
    EXPECT_THROW(charpoly(MatQ(2, 3)), std::invalid_argument);
}

TEST(Charpoly, MatchesDeterminantInterpolation) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        MatQ m = random_matq(n, rng);
        // throw in some denominators
        for (int i = 0; i < n; ++i) m.at(i, (i * 2) % n) /= Rat(3);
        EXPECT_EQ(charpoly(m), charpoly_by_interpolation(m));
    }
}

TEST(Charpoly, CayleyHamilton) {
    std::mt19937_64 rng(11);
    for (int n = 2; n <= 6; ++n) {
        MatQ m = random_matq(n, rng, 5);
        EXPECT_TRUE(eval_poly_at(charpoly(m), m).is_zero());
    }
}

TEST(Hnf, SpecExamples) {
    EXPECT_EQ(hnf(MatZ::identity(3)), MatZ::identity(3));

    MatZ d2(2, 2);
    d2.at(0, 0) = 2;
    d2.at(1, 1) = 2;
    EXPECT_EQ(hnf(d2), d2);

    MatZ m(2, 2);
    m.at(0, 0) = 1; m.at(0, 1) = 2;
    m.at(1, 0) = 3; m.at(1, 1) = 4;
    MatZ expect(2, 2);
    expect.at(0, 0) = 1; expect.at(0, 1) = 0;
    expect.at(1, 0) = 0; expect.at(1, 1) = 2;
    EXPECT_EQ(hnf(m), expect);
}

TEST(Hnf, IdempotentAndDetPreserving) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 2 + static_cast<int>(rng() % 4);
        MatZ m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m.at(i, j) = static_cast<long>(rng() % 19) - 9;
        MatZ h = hnf(m);
        if (h.rows() < n) continue;  // singular
        EXPECT_EQ(hnf(h), h);
        Rat dm = m.to_matq().det(), dh = h.to_matq().det();
        if (dm < 0) dm = -dm;
        EXPECT_EQ(dm, dh);
    }
}

TEST(Hnf, MembershipTest) {
    MatZ m(2, 2);
    m.at(0, 0) = 1; m.at(0, 1) = 0;
    m.at(1, 0) = 0; m.at(1, 1) = 2;
    EXPECT_TRUE(hnf_contains(m, {Int(3), Int(4)}));
    EXPECT_FALSE(hnf_contains(m, {Int(3), Int(5)}));
}

TEST(FactorQ, SpecExamples) {
    auto f1 = factor_poly_q(poly_from_ints({-1, 0, 1}));
    ASSERT_EQ(f1.size(), 2u);
    EXPECT_EQ(f1[0].first, poly_from_ints({-1, 1}));
    EXPECT_EQ(f1[1].first, poly_from_ints({1, 1}));

    auto f2 = factor_poly_q(poly_from_ints({1, 0, 1}));
    ASSERT_EQ(f2.size(), 1u);
    EXPECT_EQ(f2[0].first, poly_from_ints({1, 0, 1}));
    EXPECT_EQ(f2[0].second, 1);

    auto f3 = factor_poly_q(poly_from_ints({1, 0, -10, 0, 1}));
    ASSERT_EQ(f3.size(), 1u);
    EXPECT_EQ(f3[0].first.degree(), 4);

    EXPECT_THROW(factor_poly_q(PolyQ()), std::invalid_argument);
}

TEST(FactorQ, RoundTripRandomProducts) {
    std::mt19937_64 rng(17);
    std::vector<PolyQ> pool = {
        poly_from_ints({-1, 1}), poly_from_ints({1, 1}),  poly_from_ints({2, 1}),
        poly_from_ints({1, 0, 1}), poly_from_ints({-2, 0, 1}), poly_from_ints({1, 1, 1}),
        poly_from_ints({-1, 1, 0, 1}), poly_from_ints({3, -1, 0, 0, 1}),
    };
    for (int trial = 0; trial < 12; ++trial) {
        PolyQ prod = PolyQ::constant(rat(static_cast<long>(rng() % 7) + 1,
                                         static_cast<long>(rng() % 5) + 1));
        for (int k = 0; k < 4; ++k) {
            const PolyQ& f = pool[rng() % pool.size()];
            int mult = 1 + static_cast<int>(rng() % 2);
            for (int e = 0; e < mult; ++e) prod = prod * f;
        }
        PolyQ rebuilt = PolyQ::constant(prod.lc());
        for (const auto& [f, m] : factor_poly_q(prod)) {
            EXPECT_TRUE(f.is_monic());
            for (int e = 0; e < m; ++e) rebuilt = rebuilt * f;
        }
        EXPECT_EQ(rebuilt, prod);
    }
}

TEST(FactorQ, LargeCoefficients) {
    // coefficients overflow 64 bits; also exercises rational clearing
    Int big = pow_int(Int(10), 25);
    PolyQ a({Rat(big), Rat(1)});                       // x + 10^25
    PolyQ b({Rat(-3), Rat(big * 7)});                  // 7*10^25 x - 3
    PolyQ c = poly_from_ints({1, 1, 0, 1});            // irreducible cubic
    PolyQ prod = a * b * c;
    auto fs = factor_poly_q(prod);
    ASSERT_EQ(fs.size(), 3u);
    PolyQ rebuilt = PolyQ::constant(prod.lc());
    for (const auto& [f, m] : fs)
        for (int e = 0; e < m; ++e) rebuilt = rebuilt * f;
    EXPECT_EQ(rebuilt, prod);
}

TEST(FactorModP, SpecExamples) {
    // x^2+1 mod 5 = (x+2)(x+3)
    auto f1 = factor_poly_mod_p(poly_from_ints({1, 0, 1}), Int(5));
    ASSERT_EQ(f1.size(), 2u);
    EXPECT_EQ(f1[0].first, poly_from_ints({2, 1}));
    EXPECT_EQ(f1[1].first, poly_from_ints({3, 1}));

    auto f2 = factor_poly_mod_p(poly_from_ints({1, 0, 1}), Int(3));
    ASSERT_EQ(f2.size(), 1u);
    EXPECT_EQ(f2[0].first.degree(), 2);

    auto f3 = factor_poly_mod_p(poly_from_ints({0, 0, 1}), Int(7));
    ASSERT_EQ(f3.size(), 1u);
    EXPECT_EQ(f3[0].first, poly_from_ints({0, 1}));
    EXPECT_EQ(f3[0].second, 2);

    // precondition failures
    EXPECT_THROW(factor_poly_mod_p(PolyQ({rat(1, 5), Rat(1)}), Int(5)), std::invalid_argument);
    EXPECT_THROW(factor_poly_mod_p(PolyQ({Rat(1), Rat(5)}), Int(5)), std::invalid_argument);
}

TEST(FactorModP, CharTwoAndMultiplicity) {
    // x^2+1 = (x+1)^2 mod 2
    auto f = factor_poly_mod_p(poly_from_ints({1, 0, 1}), Int(2));
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0].first, poly_from_ints({1, 1}));
    EXPECT_EQ(f[0].second, 2);

    // x^4 + x^2 + 1 = (x^2+x+1)^2 mod 2
    auto g = factor_poly_mod_p(poly_from_ints({1, 0, 1, 0, 1}), Int(2));
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g[0].first, poly_from_ints({1, 1, 1}));
    EXPECT_EQ(g[0].second, 2);
}

TEST(Poly, Arithmetic) {
    PolyQ a = poly_from_ints({1, 2, 1});   // (x+1)^2
    PolyQ b = poly_from_ints({1, 1});      // x+1
    auto [q, r] = a.divrem(b);
    EXPECT_EQ(q, b);
    EXPECT_TRUE(r.is_zero());
    EXPECT_EQ(poly_gcd(a, b), b);
    EXPECT_EQ(a.derivative(), poly_from_ints({2, 2}));
    EXPECT_EQ(a.eval(Rat(2)), Rat(9));

    auto sq = squarefree_decomposition(a * b * poly_from_ints({-1, 1}));
    // (x-1) * (x+1)^3
    ASSERT_EQ(sq.size(), 2u);
    EXPECT_EQ(sq[0].first, poly_from_ints({-1, 1}));
    EXPECT_EQ(sq[0].second, 1);
    EXPECT_EQ(sq[1].first, b);
    EXPECT_EQ(sq[1].second, 3);
}

TEST(Resultant, KnownValues) {
    // Res(x^2-2, x^2-3) = 1 (disjoint quadratics: prod (a_i - b_j) ... = (2-3)^2 - 0 = 1)
    PolyQ a = poly_from_ints({-2, 0, 1});
    PolyQ b = poly_from_ints({-3, 0, 1});
    EXPECT_EQ(resultant(a, b), Rat(1));
    // Res(f, g) = prod g(alpha) over roots of f: here g(2) = -1
    EXPECT_EQ(resultant(poly_from_ints({-2, 1}), poly_from_ints({-3, 1})), Rat(-1));
    // shared root
    EXPECT_EQ(resultant(a, a), Rat(0));
}

TEST(Arith, FactorAndPrimes) {
    auto f = factor(Int(2 * 2 * 3 * 25));
    ASSERT_EQ(f.size(), 3u);
    EXPECT_EQ(f[0], (std::pair<Int, int>(Int(2), 2)));
    EXPECT_EQ(f[1], (std::pair<Int, int>(Int(3), 1)));
    EXPECT_EQ(f[2], (std::pair<Int, int>(Int(5), 2)));

    // 64-bit-scale semiprime via Pollard rho
    Int p("2147483647"), q("2305843009213693951");
    auto g = factor(p * q);
    ASSERT_EQ(g.size(), 2u);
    EXPECT_EQ(g[0].first, p);
    EXPECT_EQ(g[1].first, q);

    EXPECT_EQ(primes_up_to(20), (std::vector<int64_t>{2, 3, 5, 7, 11, 13, 17, 19}));
    EXPECT_EQ(divisors(12), (std::vector<int64_t>{1, 2, 3, 4, 6, 12}));
    EXPECT_EQ(kronecker(Int(-11), Int(2)), -1);
}

int main_dummy;
