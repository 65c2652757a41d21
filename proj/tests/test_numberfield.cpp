#include <gtest/gtest.h>

#include <random>

#include "modcong/numberfield.hpp"
#include "modcong/order.hpp"
#include "modcong/primeideal.hpp"

using namespace modcong;

namespace {

PolyQ poly_from_ints(std::initializer_list<long> cs) {
    std::vector<Rat> v;
    for (long c : cs) v.emplace_back(c);
    return PolyQ(std::move(v));
}

}  // namespace

TEST(NumberFieldT, MakeField) {
    auto q = make_field(poly_from_ints({-1, 1}));  // x - 1
    EXPECT_EQ(q->degree(), 1);
    auto sqrt2 = make_field(poly_from_ints({-2, 0, 1}));
    EXPECT_EQ(sqrt2->degree(), 2);
    auto golden = make_field(poly_from_ints({-1, 1, 1}));  // x^2 + x - 1
    EXPECT_EQ(golden->degree(), 2);
    EXPECT_THROW(make_field(poly_from_ints({-1, 0, 1})), std::invalid_argument);  // (x-1)(x+1)
    EXPECT_THROW(make_field(poly_from_ints({-2, 0, 2})), std::invalid_argument);  // not monic
}

TEST(NumberFieldT, ElementArithmetic) {
    auto k = make_field(poly_from_ints({-2, 0, 1}));  // Q(sqrt2)
    FieldElement t = FieldElement::gen(k);
    EXPECT_EQ(t * t, FieldElement::from_rat(k, Rat(2)));
    FieldElement x = t + FieldElement::one(k);        // 1 + sqrt2
    FieldElement inv = x.inverse();                   // sqrt2 - 1
    EXPECT_EQ(x * inv, FieldElement::one(k));
    EXPECT_EQ(x.norm(), Rat(-1));                     // (1+s)(1-s) = -1
    EXPECT_EQ(x.trace(), Rat(2));
    EXPECT_EQ(t.trace(), Rat(0));
    EXPECT_EQ(t.min_poly(), poly_from_ints({-2, 0, 1}));
    EXPECT_EQ(x.min_poly(), poly_from_ints({-1, -2, 1}));  // x^2-2x-1
}

TEST(Compose, RationalShortCircuit) {
    auto q = make_field(poly_from_ints({-1, 1}));
    auto b = make_field(poly_from_ints({-2, 0, 1}));
    auto comp = compose_fields(q, b);
    EXPECT_TRUE(comp.field->same_as(*b));
    EXPECT_TRUE(comp.embed_a.verified());
    EXPECT_TRUE(comp.embed_b.verified());
    EXPECT_EQ(comp.embed_b.gen_image(), FieldElement::gen(b));
    EXPECT_EQ(comp.embed_a.apply(FieldElement::gen(q)), FieldElement::one(b));
}

TEST(Compose, Sqrt2Sqrt3) {
    auto a = make_field(poly_from_ints({-2, 0, 1}));
    auto b = make_field(poly_from_ints({-3, 0, 1}));
    auto comp = compose_fields(a, b);
    EXPECT_EQ(comp.c, 1);
    EXPECT_EQ(comp.field->min_poly(), poly_from_ints({1, 0, -10, 0, 1}));
    EXPECT_TRUE(comp.embed_a.verified());
    EXPECT_TRUE(comp.embed_b.verified());
    // embed_a(theta_A) + c*embed_b(theta_B) = theta_K
    FieldElement sum = comp.embed_a.gen_image() + comp.embed_b.gen_image() * Rat(comp.c);
    EXPECT_EQ(sum, FieldElement::gen(comp.field));
}

TEST(Compose, EqualFields) {
    auto a = make_field(poly_from_ints({-2, 0, 1}));
    auto comp = compose_fields(a, a);
    EXPECT_EQ(comp.field->degree(), 2);
    EXPECT_TRUE(comp.embed_a.verified());
    EXPECT_TRUE(comp.embed_b.verified());
    FieldElement sum = comp.embed_a.gen_image() + comp.embed_b.gen_image() * Rat(comp.c);
    EXPECT_EQ(sum, FieldElement::gen(comp.field));
}

TEST(Orders, GaussianIntegersAt5) {
    auto k = make_field(poly_from_ints({1, 0, 1}));
    auto o = ell_maximal_order(k, Int(5));
    EXPECT_EQ(o->basis(), MatQ::identity(2));
    EXPECT_EQ(o->index_over_equation_order(), Int(1));
}

TEST(Orders, Sqrt5At2EnlargesByIndex2) {
    auto k = make_field(poly_from_ints({-5, 0, 1}));
    auto o = ell_maximal_order(k, Int(2));
    EXPECT_EQ(o->index_over_equation_order(), Int(2));
    // contains (1+sqrt5)/2
    FieldElement half_golden(k, {rat(1, 2), rat(1, 2)});
    auto [num, den] = o->to_order_coords_integral(half_golden);
    EXPECT_EQ(den, Int(1));
}

TEST(Orders, Sqrt2At3Unchanged) {
    auto k = make_field(poly_from_ints({-2, 0, 1}));
    auto o = ell_maximal_order(k, Int(3));
    EXPECT_EQ(o->basis(), MatQ::identity(2));
}

TEST(Orders, Idempotent) {
    auto k = make_field(poly_from_ints({-5, 0, 1}));
    auto o = ell_maximal_order(k, Int(2));
    // rebuilding from the produced basis reproduces the same lattice
    Order again(k, Int(2), o->basis());
    EXPECT_TRUE(again.same_lattice(*o));
}

TEST(PrimesAbove, GaussianExamples) {
    auto k = make_field(poly_from_ints({1, 0, 1}));
    auto o5 = ell_maximal_order(k, Int(5));
    auto ps5 = primes_above(o5, Int(5));
    ASSERT_EQ(ps5.size(), 2u);
    for (const auto& p : ps5) {
        EXPECT_EQ(p->ramification_index(), 1);
        EXPECT_EQ(p->residue_degree(), 1);
    }

    auto o2 = ell_maximal_order(k, Int(2));
    auto ps2 = primes_above(o2, Int(2));
    ASSERT_EQ(ps2.size(), 1u);
    EXPECT_EQ(ps2[0]->ramification_index(), 2);
    EXPECT_EQ(ps2[0]->residue_degree(), 1);
}

TEST(PrimesAbove, RationalField) {
    auto q = make_field(poly_from_ints({-1, 1}));
    auto o = ell_maximal_order(q, Int(7));
    auto ps = primes_above(o, Int(7));
    ASSERT_EQ(ps.size(), 1u);
    EXPECT_EQ(ps[0]->ramification_index(), 1);
    EXPECT_EQ(ps[0]->residue_degree(), 1);
    EXPECT_EQ(ps[0]->valuation(FieldElement::from_rat(q, Rat(49 * 3))), 2);
}

TEST(Valuation, SpecExamples) {
    auto k = make_field(poly_from_ints({1, 0, 1}));
    auto o = ell_maximal_order(k, Int(2));
    auto lam = primes_above(o, Int(2))[0];
    EXPECT_EQ(lam->valuation(FieldElement::zero(k)), VAL_INFINITY);
    EXPECT_EQ(lam->valuation(FieldElement::from_rat(k, Rat(2))), 2);  // (1+i)^2 = 2i
    FieldElement onei(k, {Rat(1), Rat(1)});
    EXPECT_EQ(lam->valuation(onei), 1);
}

TEST(Valuation, AxiomsOnRandomElements) {
    std::mt19937_64 rng(23);
    auto k = make_field(poly_from_ints({-1, 1, 1}));  // golden field, disc 5
    for (Int ell : {Int(2), Int(5), Int(11)}) {
        auto o = ell_maximal_order(k, ell);
        auto primes = primes_above(o, ell);
        for (const auto& lam : primes) {
            for (int t = 0; t < 20; ++t) {
                FieldElement x(k, {Rat(static_cast<long>(rng() % 19) - 9),
                                   Rat(static_cast<long>(rng() % 19) - 9)});
                FieldElement y(k, {Rat(static_cast<long>(rng() % 19) - 9),
                                   Rat(static_cast<long>(rng() % 19) - 9)});
                int vx = lam->valuation(x), vy = lam->valuation(y);
                int vxy = lam->valuation(x * y);
                if (vx != VAL_INFINITY && vy != VAL_INFINITY) {
                    EXPECT_EQ(vxy, vx + vy);
                    EXPECT_GE(lam->valuation(x + y), std::min(vx, vy));
                }
            }
        }
    }
}

TEST(PrimesAbove, SumEFEqualsDegreeRandomFields) {
    std::mt19937_64 rng(29);
    std::vector<PolyQ> pool = {
        poly_from_ints({-2, 0, 1}), poly_from_ints({-5, 0, 1}), poly_from_ints({1, 0, 1}),
        poly_from_ints({1, 1, 1}),  poly_from_ints({-2, -1, 0, 1}), poly_from_ints({2, 3, 0, 1}),
        poly_from_ints({1, 0, -10, 0, 1}), poly_from_ints({-1, 1, 1, 1}),
        poly_from_ints({7, -3, 2, 0, 1}),
    };
    std::vector<int64_t> ells = primes_up_to(50);
    for (int t = 0; t < 50; ++t) {
        const PolyQ& f = pool[rng() % pool.size()];
        if (!is_irreducible(f)) continue;
        Int ell(ells[rng() % ells.size()]);
        auto k = NumberField::make_trusted(f);
        auto o = ell_maximal_order(k, ell);
        auto primes = primes_above(o, ell);
        int total = 0;
        for (const auto& lam : primes) total += lam->ramification_index() * lam->residue_degree();
        EXPECT_EQ(total, k->degree());
        // valuation of ell at each prime equals its ramification index
        for (const auto& lam : primes)
            EXPECT_EQ(lam->valuation(FieldElement::from_rat(k, Rat(ell))), lam->ramification_index());
    }
}

TEST(RestrictPlace, RationalSubfield) {
    auto k = make_field(poly_from_ints({-2, 0, 1}));
    auto q = make_field(poly_from_ints({-1, 1}));
    auto ok = ell_maximal_order(k, Int(5));
    auto lam = primes_above(ok, Int(5))[0];
    FieldEmbedding emb(q, FieldElement::one(k));
    auto mu = restrict_place(lam, emb);
    EXPECT_EQ(mu->residue_degree(), 1);
    EXPECT_EQ(mu->ell(), Int(5));
}

TEST(RestrictPlace, IdentityEmbedding) {
    auto k = make_field(poly_from_ints({1, 0, 1}));
    auto ok = ell_maximal_order(k, Int(5));
    auto primes = primes_above(ok, Int(5));
    FieldEmbedding id(k, FieldElement::gen(k));
    for (const auto& lam : primes) {
        auto mu = restrict_place(lam, id, ok);
        EXPECT_EQ(mu->hnf_basis(), lam->hnf_basis());
    }
}

TEST(RestrictPlace, QuadraticInsideBiquadratic) {
    auto a = make_field(poly_from_ints({-2, 0, 1}));
    auto b = make_field(poly_from_ints({-3, 0, 1}));
    auto comp = compose_fields(a, b);
    auto ok = ell_maximal_order(comp.field, Int(5));
    auto primes = primes_above(ok, Int(5));
    auto oa = ell_maximal_order(a, Int(5));
    // 5 is inert in Q(sqrt2): unique restriction target with f = 2
    for (const auto& lam : primes) {
        auto mu = restrict_place(lam, comp.embed_a, oa);
        EXPECT_EQ(mu->residue_degree(), 2);
    }
}

TEST(RestrictPlace, ValuationCompatibility) {
    std::mt19937_64 rng(31);
    auto a = make_field(poly_from_ints({-2, 0, 1}));
    auto b = make_field(poly_from_ints({-3, 0, 1}));
    auto comp = compose_fields(a, b);
    for (Int ell : {Int(2), Int(3), Int(5), Int(7), Int(11)}) {
        auto ok = ell_maximal_order(comp.field, ell);
        auto oa = ell_maximal_order(a, ell);
        for (const auto& lam : primes_above(ok, ell)) {
            auto mu = restrict_place(lam, comp.embed_a, oa);
            int e_rel = lam->ramification_index() / mu->ramification_index();
            for (int t = 0; t < 8; ++t) {
                FieldElement x(a, {Rat(static_cast<long>(rng() % 9) - 4),
                                   Rat(static_cast<long>(rng() % 9) - 4)});
                if (x.is_zero()) continue;
                EXPECT_EQ(lam->valuation(comp.embed_a.apply(x)), mu->valuation(x) * e_rel);
            }
        }
    }
}
