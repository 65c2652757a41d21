#include <gtest/gtest.h>

#include "modcong/congruence.hpp"
#include "oracles.hpp"

using namespace modcong;

namespace {

PolyQ poly_from_ints(std::initializer_list<long> cs) {
    std::vector<Rat> v;
    for (long c : cs) v.emplace_back(c);
    return PolyQ(std::move(v));
}

// synthetic record-backed class over a given field with given eigenvalues
NewformClassPtr synthetic_class(int64_t level, int index, const PolyQ& minpoly,
                                const std::map<int64_t, std::vector<Rat>>& eigs, int64_t bound) {
    auto field = make_field(minpoly);
    std::map<int64_t, FieldElement> m;
    for (const auto& [q, coords] : eigs) m.emplace(q, FieldElement(field, coords));
    return std::make_shared<NewformClass>(level, index, field, std::move(m), bound, false);
}

NewformClassPtr class_at(int64_t level, size_t idx) {
    return decompose(ModSymSpace::get(level)).at(idx);
}

}  // namespace

TEST(MakePlace, BothFieldsRational) {
    auto c26 = decompose(ModSymSpace::get(26));
    PlaceSet ps(c26[0], c26[1], Int(7));
    ASSERT_EQ(ps.places().size(), 1u);
    EXPECT_EQ(ps.places()[0].e, 1);
    EXPECT_EQ(ps.places()[0].f, 1);
}

TEST(MakePlace, RationalAndGoldenField) {
    // eigen fields Q and Q(sqrt5) via x^2 - x - 1
    auto f = synthetic_class(101, 0, poly_from_ints({-1, 1}),
                             {{2, {Rat(1)}}, {3, {Rat(2)}}}, 3);
    auto g = synthetic_class(101, 1, poly_from_ints({-1, -1, 1}),
                             {{2, {Rat(0), Rat(1)}}, {3, {Rat(1), Rat(1)}}}, 3);
    // 11 splits in Q(sqrt5)
    PlaceSet ps11(f, g, Int(11));
    ASSERT_EQ(ps11.places().size(), 2u);
    for (const auto& pl : ps11.places()) EXPECT_EQ(pl.f, 1);
    // 3 is inert
    PlaceSet ps3(f, g, Int(3));
    ASSERT_EQ(ps3.places().size(), 1u);
    EXPECT_EQ(ps3.places()[0].f, 2);
}

TEST(MakePlace, RejectsBadEll) {
    auto c = class_at(11, 0);
    EXPECT_THROW(PlaceSet(c, c, Int(2)), std::invalid_argument);
    EXPECT_THROW(PlaceSet(c, c, Int(11)), std::invalid_argument);
    EXPECT_THROW(PlaceSet(c, c, Int(9)), std::invalid_argument);
}

TEST(CongruenceExponent, SameClassIsInfinite) {
    auto c = class_at(11, 0);
    PlaceSet ps(c, c, Int(7));
    EXPECT_EQ(congruence_exponent(ps, 0), VAL_INFINITY);
}

TEST(CongruenceExponent, Classic77vs11Mod3) {
    // 77 = 7*11; the third rational class at 77 is congruent to 11a mod 3
    auto f = class_at(77, 2);
    auto g = class_at(11, 0);
    PlaceSet ps(f, g, Int(3));
    ASSERT_EQ(ps.places().size(), 1u);
    // oracle: both rational, so n_max = min over q <= B of v_3(a_q - b_q)
    int64_t b = sturm_bound(77);
    int expect = VAL_INFINITY;
    for (int64_t q : ps.test_primes(b)) {
        Rat d = f->eigenvalue(q).rational_value() - g->eigenvalue(q).rational_value();
        if (d == 0) continue;
        expect = std::min(expect, valuation_int(d.get_num(), Int(3)));
    }
    EXPECT_EQ(congruence_exponent(ps, 0), expect);
    EXPECT_EQ(expect, 1);  // the classical mod-3 congruence, and not mod 9
}

TEST(CongruenceExponent, RoutesAgree) {
    // force both routes on pairs they both support and compare
    struct Pair { int64_t nf; size_t fi; int64_t ng; size_t gi; int64_t ell; };
    for (auto [nf, fi, ng, gi, ell] : {Pair{77, 2, 11, 0, 3}, Pair{26, 0, 26, 1, 3},
                                       Pair{23, 0, 11, 0, 5}, Pair{67, 0, 67, 2, 5}}) {
        auto f = class_at(nf, fi);
        auto g = class_at(ng, gi);
        PlaceSet glob(f, g, Int(ell), 16, PlaceSet::Route::Global);
        PlaceSet pair(f, g, Int(ell), 16, PlaceSet::Route::Pairs);
        int64_t b = sturm_bound(std::lcm(nf, ng));
        // compare multisets of (e, f, n_max)
        auto collect = [&](PlaceSet& ps) {
            std::multiset<std::tuple<int, int, int>> out;
            for (size_t i = 0; i < ps.places().size(); ++i)
                out.insert({ps.places()[i].e, ps.places()[i].f, ps.exponent(i, b)});
            return out;
        };
        EXPECT_EQ(collect(glob), collect(pair)) << nf << "/" << ng << " ell=" << ell;
    }
}

TEST(CongruenceExponent, MonotonicityInBound) {
    auto f = class_at(77, 2);
    auto g = class_at(11, 0);
    PlaceSet ps(f, g, Int(3));
    int64_t b = sturm_bound(77);
    int at_b = ps.exponent(0, b);
    int at_b20 = ps.exponent(0, b + 20);
    EXPECT_LE(at_b20, at_b);
    EXPECT_EQ(at_b20, at_b);  // flag-style check: expected equality in practice
}

TEST(CongruencePrimes, Level26PairMatchesGcdOracle) {
    auto c26 = decompose(ModSymSpace::get(26));
    // oracle: both classes rational; gcd of |a_q - b_q| over good q <= 30
    Int g_all(0);
    for (int64_t q : primes_up_to(30)) {
        if (26 % q == 0) continue;
        Rat d = c26[0]->eigenvalue(q).rational_value() - c26[1]->eigenvalue(q).rational_value();
        g_all = gcd(g_all, d.get_num());
    }
    std::vector<Int> expected;
    for (auto& [p, e] : factor(abs(g_all))) {
        (void)e;
        if (p != 2 && 26 % p.get_si() != 0) expected.push_back(p);
    }
    auto found = congruence_primes(c26[0], c26[1], 30);
    ASSERT_EQ(found.size(), expected.size());
    for (size_t i = 0; i < found.size(); ++i) {
        EXPECT_EQ(found[i].first, expected[i]);
        EXPECT_GE(found[i].second, 1);
    }
}

TEST(CongruencePrimes, SameClassRejected) {
    auto c = class_at(11, 0);
    EXPECT_THROW(congruence_primes(c, c, 30), std::invalid_argument);
}

TEST(Carayol, SpecExamples) {
    EXPECT_TRUE(carayol_check(1859, 11).pass);   // ratio 13^2
    auto r = carayol_check(88, 11);              // ratio 2^3
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.offending_prime, 2);
    EXPECT_TRUE(carayol_check(26, 26).pass);
    EXPECT_THROW(carayol_check(11, 26), std::invalid_argument);
}

TEST(ResidualIrreducibility, EisensteinAt11) {
    auto c = class_at(11, 0);
    PlaceSet ps5(c, c, Int(5));
    EXPECT_EQ(residual_irreducibility_heuristic(c, ps5.places()[0], 10),
              ResidualIrreducibility::PossiblyReducible);
    PlaceSet ps7(c, c, Int(7));
    EXPECT_EQ(residual_irreducibility_heuristic(c, ps7.places()[0], 10),
              ResidualIrreducibility::CertifiedIrreducible);
}

TEST(StrongIrreducibility, Level11) {
    auto c = class_at(11, 0);
    PlaceSet ps5(c, c, Int(5));
    EXPECT_EQ(strong_irreducibility_check(c, ps5.places()[0], 20), StrongIrreducibility::Automatic);
    PlaceSet ps3(c, c, Int(3));
    EXPECT_EQ(strong_irreducibility_check(c, ps3.places()[0], 20), StrongIrreducibility::Pass);
}

TEST(Minimality, PrimeLevelVacuous) {
    auto c = class_at(11, 0);
    auto provider = default_class_provider();
    EXPECT_TRUE(minimality_check(c, Int(7), sturm_bound(11), provider).pass);
}

TEST(Minimality, Level77ClassFailsAgainst11) {
    // the class at 77 congruent to 11a mod 3 is not minimal at 3
    auto c = class_at(77, 2);
    auto provider = default_class_provider();
    auto res = minimality_check(c, Int(3), sturm_bound(77), provider);
    EXPECT_FALSE(res.pass);
    EXPECT_EQ(res.witness_level, 11);
}

TEST(Uniqueness, SingleClassPasses) {
    auto c = class_at(11, 0);
    auto provider = default_class_provider();
    EXPECT_TRUE(uniqueness_check(c, Int(7), sturm_bound(11), provider).pass);
}

TEST(Uniqueness, Level67FailsAtCongruencePrime) {
    // classes 0 and 2 at level 67 are congruent mod 5
    auto c67 = decompose(ModSymSpace::get(67));
    auto primes = congruence_primes(c67[0], c67[2], 50);
    ASSERT_FALSE(primes.empty());
    EXPECT_EQ(primes[0].first, Int(5));
    auto provider = default_class_provider();
    auto res = uniqueness_check(c67[0], Int(5), sturm_bound(67), provider);
    EXPECT_FALSE(res.pass);
    EXPECT_EQ(res.witness_index, 2);
}

TEST(CmCheck, SpecExamples) {
    auto c11 = class_at(11, 0);
    EXPECT_FALSE(cm_check(c11, 50).has_cm);

    // level 27: CM by Q(sqrt(-3))
    auto c27 = class_at(27, 0);
    auto r27 = cm_check(c27, 100);
    EXPECT_TRUE(r27.has_cm);
    EXPECT_EQ(r27.discriminant, Int(-3));

    // level 32: CM by Q(i), discriminant -4
    auto c32 = class_at(32, 0);
    auto r32 = cm_check(c32, 100);
    EXPECT_TRUE(r32.has_cm);
    EXPECT_EQ(r32.discriminant, Int(-4));
}

TEST(TheoremReport, Classic77vs11) {
    auto rep = theorem_report(class_at(77, 2), class_at(11, 0), Int(3));
    EXPECT_EQ(rep.p, 7);
    EXPECT_EQ(rep.k, 1);
    EXPECT_TRUE(rep.carayol.pass);
    EXPECT_TRUE(rep.minimality.pass);
    EXPECT_TRUE(rep.uniqueness.pass);
    EXPECT_EQ(rep.m, 2);
    EXPECT_TRUE(rep.hypotheses_pass);
    EXPECT_TRUE(rep.corollary2_annotation);
    EXPECT_EQ(rep.predicted_v_ell_a, 1);
    EXPECT_TRUE(rep.lowering_instance);
    EXPECT_FALSE(rep.cm_of_g.has_cm);
    EXPECT_FALSE(rep.to_text().empty());
}

TEST(TheoremReport, SameLevelRejected) {
    auto c26 = decompose(ModSymSpace::get(26));
    // N_f / N_g = 1 is not p^k with k >= 1: handled as checklist failure
    auto rep = theorem_report(c26[0], c26[1], Int(7));
    EXPECT_EQ(rep.p, 0);
    EXPECT_FALSE(rep.hypotheses_pass);
}

TEST(TheoremReport, DivisibilityHardError) {
    EXPECT_THROW(theorem_report(class_at(11, 0), class_at(26, 0), Int(7)), std::invalid_argument);
}
