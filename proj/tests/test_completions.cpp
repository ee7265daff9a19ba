#include <doctest.h>

#include <pretr/beilinson.hpp>
#include <pretr/completions.hpp>

#include "fixtures.hpp"

using namespace pretr;

TEST_CASE("direct sums, matrices, and the zero object") {
    BaseCategory bq = build_dg_quiver_category(fixtures::chain_with_homotopies());

    NormalObject zero = zero_object();
    Morphism id0 = Morphism::identity(bq, zero);
    CHECK(id0.is_zero());
    CHECK(compose(id0, id0) == id0);

    NormalObject a = embed_object(bq, "A");
    NormalObject aa = direct_sum({a, a});
    Morphism id = Morphism::identity(bq, aa);
    CHECK(id.terms().size() == 2);
    CHECK(compose(id, id) == id);

    // d acts entrywise: package om in both diagonal slots of End(A (+) A)
    NormalObject cc = direct_sum({embed_object(bq, "C"), embed_object(bq, "C")});
    int om = bq.resolve_from_source(bq.object_index("A"), "om");
    Morphism m(bq, aa, cc, -1);
    m.add_term(EntryKey{0, 0, om}, Scalar(1));
    m.add_term(EntryKey{1, 1, om}, Scalar(2));
    Morphism dm = m.differential();
    int gb = bq.resolve_from_source(bq.object_index("A"), "g*b");
    CHECK(dm.terms().at(EntryKey{0, 0, gb}) == Scalar(1));
    CHECK(dm.terms().at(EntryKey{1, 1, gb}) == Scalar(2));

    // morphisms through the zero object are empty matrices
    Morphism to_zero = Morphism::zero(bq, a, zero, 0);
    Morphism from_zero = Morphism::zero(bq, zero, cc, 0);
    CHECK(compose(from_zero, to_zero).is_zero());
}

TEST_CASE("translation formulas") {
    BaseCategory bq = build_dg_quiver_category(fixtures::chain_with_homotopies());
    NormalObject a0 = embed_object(bq, "A");
    NormalObject bm1 = shift_object(embed_object(bq, "B"), -1);
    NormalObject cm2 = shift_object(embed_object(bq, "C"), -2);

    int beta = bq.resolve_from_source(bq.object_index("A"), "b");
    int gamma = bq.resolve_from_source(bq.object_index("B"), "g");
    int omega = bq.resolve_from_source(bq.object_index("A"), "om");
    int gb = bq.resolve_from_source(bq.object_index("A"), "g*b");

    // degree of <j a i> is |a| + i - j
    Morphism tb = Morphism::unit(bq, a0, bm1, EntryKey{0, 0, beta});
    CHECK(tb.degree() == 0 + 0 - (-1));

    // <l b j> o <j a i> = <l (b o a) i>
    Morphism tg = Morphism::unit(bq, bm1, cm2, EntryKey{0, 0, gamma});
    Morphism tgb = compose(tg, tb);
    CHECK(tgb == Morphism::unit(bq, a0, cm2, EntryKey{0, 0, gb}));

    // d<j a i> = (-1)^j <j da i>
    Morphism tom = Morphism::unit(bq, a0, cm2, EntryKey{0, 0, omega});
    Morphism d_tom = tom.differential();
    CHECK(d_tom.terms().at(EntryKey{0, 0, gb}) == Scalar(1));  // (-1)^{-2}

    Morphism tom_odd = Morphism::unit(bq, a0, shift_object(embed_object(bq, "C"), -1),
                                      EntryKey{0, 0, omega});
    CHECK(tom_odd.differential().terms().at(EntryKey{0, 0, gb}) == Scalar(-1));  // (-1)^{-1}

    // identity of A[i] is <i id i>
    Morphism ids = Morphism::identity(bq, shift_object(a0, 3));
    CHECK(ids.degree() == 0);
    CHECK(compose(ids, ids) == ids);

    // nested shifts add
    CHECK(shift_object(shift_object(a0, 2), -5) == shift_object(a0, -3));
}

TEST_CASE("maurer-cartan checking and twists") {
    BaseCategory q = build_path_category(fixtures::chain_with_relation());
    BaseCategory bq = build_dg_quiver_category(fixtures::chain_with_homotopies());

    SUBCASE("zero twist is always admissible") {
        NormalObject a = embed_object(q, "A");
        Morphism zero = Morphism::zero(q, a, a, 1);
        CHECK(check_maurer_cartan(zero).ok);
    }

    SUBCASE("twist candidates of the wrong degree are rejected") {
        NormalObject a = embed_object(q, "A");
        Morphism id = Morphism::identity(q, a);
        CHECK_THROWS(check_maurer_cartan(id));
        Morphism b = Morphism::unit(q, a, embed_object(q, "B"),
                                    EntryKey{0, 0, q.resolve_from_source(q.object_index("A"), "b")});
        CHECK_THROWS(check_maurer_cartan(b));  // not an endomorphism
    }

    SUBCASE("the chain complex twist holds with the relation") {
        Morphism tw = fixtures::chain_complex_twist(q);
        auto mc = check_maurer_cartan(tw);
        CHECK(mc.ok);
        NormalObject c = twist_object(tw);
        CHECK(is_one_sided(c));
        CHECK(c.twist.size() == 2);
    }

    SUBCASE("the same matrix fails without the relation") {
        Morphism tw = fixtures::chain_complex_twist(bq);
        auto mc = check_maurer_cartan(tw);
        CHECK(!mc.ok);
        int gb = bq.resolve_from_source(bq.object_index("A"), "g*b");
        CHECK(mc.residual.terms().size() == 1);
        CHECK(mc.residual.terms().at(EntryKey{2, 0, gb}) == Scalar(1));
        CHECK_THROWS(twist_object(tw));
    }

    SUBCASE("twisting by zero recovers the plain differential") {
        Morphism tw = fixtures::chain_complex_twist(q);
        NormalObject c = twist_object(tw);
        NormalObject u = tw.src();
        // a morphism between zero-twist objects differentiates as in the sum
        // completion; the twisted one picks up the connecting terms
        Morphism idu = Morphism::identity(q, u);
        CHECK(idu.differential().is_zero());
        Morphism idc = Morphism::identity(q, c);
        CHECK(idc.differential().is_zero());
    }

    SUBCASE("a twisted endomorphism merges into the twist") {
        // cone of the identity carries twist id; retwisting by a
        // maurer-cartan endomorphism adds entries
        NormalObject a = embed_object(bq, "A");
        Morphism ida = Morphism::identity(bq, a);
        NormalObject cid = cone(ida);
        CHECK(is_one_sided(cid));
        CHECK(cid.twist.size() == 1);
        Morphism alpha = Morphism::zero(bq, cid, cid, 1);
        NormalObject retw = twist_object(alpha);
        CHECK(retw == cid);
    }

    SUBCASE("a nonzero twisted endomorphism adds to the twist") {
        int gb = bq.resolve_from_source(bq.object_index("A"), "g*b");
        NormalObject u =
            direct_sum({embed_object(bq, "A"), shift_object(embed_object(bq, "C"), -1)});
        Morphism p(bq, u, u, 1);
        p.add_term(EntryKey{1, 0, gb}, Scalar(1));
        NormalObject twisted = twist_object(p);
        // a further degree-1 endomorphism of the twisted object
        Morphism alpha(bq, twisted, twisted, 1);
        alpha.add_term(EntryKey{1, 0, gb}, Scalar(2));
        CHECK(check_maurer_cartan(alpha).ok);
        NormalObject merged = twist_object(alpha);
        CHECK(merged.summands == twisted.summands);
        CHECK(merged.twist.at(EntryKey{1, 0, gb}) == Scalar(3));
    }
}

TEST_CASE("one-sided predicate and permutation normalization") {
    BaseCategory q = build_path_category(fixtures::chain_with_relation());
    NormalObject c = twist_object(fixtures::chain_complex_twist(q));
    CHECK(is_one_sided(c));

    // permuted summand order: (C[-2], A, B[-1]) with matching entries
    NormalObject perm;
    perm.summands = {c.summands[2], c.summands[0], c.summands[1]};
    int beta = q.resolve_from_source(q.object_index("A"), "b");
    int gamma = q.resolve_from_source(q.object_index("B"), "g");
    perm.twist[EntryKey{2, 1, beta}] = Scalar(1);
    perm.twist[EntryKey{0, 2, gamma}] = Scalar(1);
    CHECK(!is_one_sided(perm));
    auto fixed = permute_to_one_sided(perm);
    REQUIRE(fixed.has_value());
    CHECK(is_one_sided(fixed->first));
    CHECK(fixed->first == c);
    Morphism iso = permutation_isomorphism(q, perm, fixed->first, fixed->second);
    CHECK(iso.degree() == 0);

    // a two-cycle of entries can never be normalized away
    NormalObject cyc;
    cyc.summands = {Summand{q.object_index("A"), 0}, Summand{q.object_index("A"), 1}};
    int ida = q.identity_id(q.object_index("A"));
    cyc.twist[EntryKey{1, 0, ida}] = Scalar(1);
    cyc.twist[EntryKey{0, 1, ida}] = Scalar(-1);
    CHECK(!permute_to_one_sided(cyc).has_value());
}

TEST_CASE("normalize object expressions into the canonical layering") {
    BaseCategory q = build_path_category(fixtures::chain_with_relation());
    ObjectExpr e = ObjectExpr::sum({ObjectExpr::base("A"),
                                    ObjectExpr::shift(ObjectExpr::base("B"), -1),
                                    ObjectExpr::shift(ObjectExpr::shift(ObjectExpr::base("C"), -1), -1)});
    NormalObject u = normalize(q, e);
    CHECK(u == fixtures::chain_complex_twist(q).src());

    Morphism tw = fixtures::chain_complex_twist(q);
    ObjectExpr te = ObjectExpr::twist(e, tw.terms());
    CHECK(normalize(q, te) == twist_object(tw));

    // shift of a sum distributes; shift of a twist flips the twist sign
    ObjectExpr se = ObjectExpr::shift(te, 1);
    NormalObject shifted = normalize(q, se);
    CHECK(shifted == shift_object(twist_object(tw), 1));
    for (const auto& [k, coef] : shifted.twist) {
        (void)k;
        CHECK(coef == Scalar(-1));
    }
    CHECK(normalize(q, ObjectExpr::shift(se, -1)) == twist_object(tw));
}

TEST_CASE("axiom checker passes on all four completions of the seeds") {
    BaseCategory q = build_path_category(fixtures::chain_with_relation());
    BaseCategory bq = build_dg_quiver_category(fixtures::chain_with_homotopies());
    for (const BaseCategory* cat : {&q, &bq}) {
        DgView seed = seed_view(*cat);
        for (const DgView& view :
             {direct_sum_completion(seed), translation_completion(seed), twist_completion(seed),
              pretriangulated_hull(seed)}) {
            CheckReport r = check_dg_axioms(view);
            INFO(r.to_string());
            CHECK(r.pass());
        }
    }
}

TEST_CASE("cones of closed maps are admissible twisted complexes") {
    BaseCategory bq = build_dg_quiver_category(fixtures::chain_with_homotopies());
    int beta = bq.resolve_from_source(bq.object_index("A"), "b");
    Morphism f = Morphism::unit(bq, embed_object(bq, "A"), embed_object(bq, "B"),
                                EntryKey{0, 0, beta});
    NormalObject c = cone(f);
    CHECK(is_one_sided(c));
    CHECK(c.summands.size() == 2);
    CHECK(c.summands[0].shift == 1);
    // maurer-cartan already validated inside cone(); re-check explicitly
    Morphism q(bq, NormalObject{c.summands, {}}, NormalObject{c.summands, {}}, 1);
    for (const auto& [k, coef] : c.twist) q.add_term(k, coef);
    CHECK(check_maurer_cartan(q).ok);
}
