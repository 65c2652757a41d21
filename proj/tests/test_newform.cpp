#include <gtest/gtest.h>

#include <complex>

#include "modcong/newform.hpp"
#include "oracles.hpp"

using namespace modcong;

namespace {

PolyQ poly_from_ints(std::initializer_list<long> cs) {
    std::vector<Rat> v;
    for (long c : cs) v.emplace_back(c);
    return PolyQ(std::move(v));
}

// roots of an integer polynomial by Durand-Kerner, for coarse numeric screens
std::vector<std::complex<double>> numeric_roots(const PolyQ& f) {
    int n = f.degree();
    std::vector<std::complex<double>> cs(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) cs[static_cast<size_t>(i)] = f.coeff(i).get_d();
    std::vector<std::complex<double>> r(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) r[static_cast<size_t>(i)] = std::pow(std::complex<double>(0.4, 0.9), i);
    for (int iter = 0; iter < 500; ++iter) {
        for (int i = 0; i < n; ++i) {
            std::complex<double> num = cs[static_cast<size_t>(n)];
            for (int k = n - 1; k >= 0; --k) num = num * r[static_cast<size_t>(i)] + cs[static_cast<size_t>(k)];
            std::complex<double> den = 1;
            for (int j = 0; j < n; ++j)
                if (j != i) den *= (r[static_cast<size_t>(i)] - r[static_cast<size_t>(j)]);
            r[static_cast<size_t>(i)] -= num / den;
        }
    }
    return r;
}

}  // namespace

TEST(Sturm, Values) {
    EXPECT_EQ(sturm_bound(1), 1);
    EXPECT_EQ(sturm_bound(11), 2);
    EXPECT_EQ(sturm_bound(1937), 350);
}

TEST(Decompose, Level11) {
    auto classes = decompose(ModSymSpace::get(11));
    ASSERT_EQ(classes.size(), 1u);
    EXPECT_EQ(classes[0]->degree(), 1);
    auto eta = oracles::eta_11_coefficients(101);
    for (int64_t q : primes_up_to(100)) {
        FieldElement a = classes[0]->eigenvalue(q);
        EXPECT_TRUE(a.is_rational());
        EXPECT_EQ(a.rational_value(), Rat(eta[static_cast<size_t>(q)])) << "q=" << q;
    }
    EXPECT_EQ(classes[0]->eigenvalue(7).rational_value(), Rat(-2));
}

TEST(Decompose, Level23QuadraticField) {
    auto classes = decompose(ModSymSpace::get(23));
    ASSERT_EQ(classes.size(), 1u);
    EXPECT_EQ(classes[0]->degree(), 2);
    // a_2 satisfies x^2 + x - 1
    FieldElement a2 = classes[0]->eigenvalue(2);
    EXPECT_EQ(a2.min_poly(), poly_from_ints({-1, 1, 1}));
}

TEST(Decompose, Level26TwoRationalClasses) {
    auto classes = decompose(ModSymSpace::get(26));
    ASSERT_EQ(classes.size(), 2u);
    EXPECT_EQ(classes[0]->degree(), 1);
    EXPECT_EQ(classes[1]->degree(), 1);
    // 26a has a_2 = -1, 26b has a_2 = 1 (distinct rational eigenvalues)
    Rat x = classes[0]->eigenvalue(2).rational_value();
    Rat y = classes[1]->eigenvalue(2).rational_value();
    EXPECT_NE(x, y);
    EXPECT_EQ(x * y, Rat(-1));
}

TEST(Decompose, BlocksSpanNewSpaceAndConsistency) {
    for (int64_t n : {30, 33, 34, 37, 45, 57}) {
        auto space = ModSymSpace::get(n);
        auto classes = decompose(space);
        int total = 0;
        for (const auto& c : classes) total += c->degree();
        EXPECT_EQ(total, space->new_dim()) << "N=" << n;
        for (const auto& c : classes) {
            // min poly of a_q divides charpoly of T_q on the block
            for (int64_t q : {2, 3, 5, 7, 11}) {
                if (n % q == 0) continue;
                PolyQ mp = c->eigenvalue(q).min_poly();
                PolyQ cp = charpoly(c->hecke_on_block(q));
                EXPECT_TRUE((cp % mp).is_zero()) << "N=" << n << " q=" << q;
            }
        }
    }
}

TEST(Decompose, CharpolyProductProperty) {
    // charpoly(T_q | new) = product over classes of minpoly(a_q)^(deg/deg minpoly)
    for (int64_t n : {37, 45, 57}) {
        auto space = ModSymSpace::get(n);
        auto classes = decompose(space);
        auto [cols, piv] = space->new_subspace();
        for (int64_t q : {2, 3}) {
            if (n % q == 0) continue;
            MatQ tq = ModSymSpace::restrict_to(cols, piv, *space->hecke_quotient(q));
            PolyQ lhs = charpoly(tq);
            PolyQ rhs = PolyQ::constant(Rat(1));
            for (const auto& c : classes) {
                PolyQ mp = c->eigenvalue(q).min_poly();
                int e = c->degree() / mp.degree();
                for (int i = 0; i < e; ++i) rhs = rhs * mp;
            }
            EXPECT_EQ(lhs, rhs) << "N=" << n << " q=" << q;
        }
    }
}

TEST(Decompose, EichlerShimuraBound) {
    // |sigma(a_q)| <= 2 sqrt(q) under every embedding (numeric screen)
    for (int64_t n : {11, 23, 37, 45}) {
        for (const auto& c : decompose(ModSymSpace::get(n))) {
            for (int64_t q : {2, 3, 5, 13}) {
                if (n % q == 0) continue;
                PolyQ mp = c->eigenvalue(q).min_poly();
                for (const auto& root : numeric_roots(mp)) {
                    EXPECT_LT(std::abs(root.imag()), 1e-6);
                    EXPECT_LE(std::abs(root.real()), 2.0 * std::sqrt(static_cast<double>(q)) + 1e-6);
                }
            }
        }
    }
}

TEST(Decompose, DeterministicOrdering) {
    auto a = decompose(ModSymSpace::get(57));
    auto b = decompose(ModSymSpace::get(57));
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i]->degree(), b[i]->degree());
        EXPECT_EQ(a[i]->eigenvalue(2), b[i]->eigenvalue(2));
        EXPECT_EQ(a[i]->index(), static_cast<int>(i));
    }
}

TEST(Decompose, BadPrimeEigenvalueFlagged) {
    auto classes = decompose(ModSymSpace::get(11));
    EXPECT_TRUE(classes[0]->is_bad_prime(11));
    EXPECT_FALSE(classes[0]->is_bad_prime(7));
    // U_11 eigenvalue of 11a is 1
    EXPECT_EQ(classes[0]->eigenvalue(11).rational_value(), Rat(1));
}
