#include <doctest.h>

#include <pretr/homology.hpp>

#include <atomic>
#include <pretr/lift.hpp>

#include "fixtures.hpp"

using namespace pretr;

namespace {

Morphism unit_from(const BaseCategory& cat, const std::string& src_obj, const std::string& label) {
    int src = cat.object_index(src_obj);
    int id = cat.resolve_from_source(src, label);
    NormalObject s = embed_object(cat, src_obj);
    NormalObject d = embed_object(cat, cat.object_label(cat.basis(id).dst));
    return Morphism::unit(cat, s, d, EntryKey{0, 0, id});
}

std::shared_ptr<TableFunctor> chain_lift(const BaseCategory& q, const BaseCategory& bq,
                                         const std::string& pinned) {
    H0FunctorTable table;
    for (const std::string v : {"A", "B", "C"}) table.objects[v] = embed_object(bq, v);
    table.arrow_images["b"] = unit_from(bq, "A", "b");
    table.arrow_images["g"] = unit_from(bq, "B", "g");
    table.pinned_homotopies[{"g", "b"}] = unit_from(bq, "A", pinned);
    return quiver_functor_lift(q, bq, table);
}

/// Expected entry set of a twist, as (row, col, label, coefficient).
struct TwistEntry {
    int row;
    int col;
    std::string label;
    Scalar coeff;
};

void check_twist(const BaseCategory& cat, const NormalObject& x,
                 const std::vector<TwistEntry>& expected) {
    REQUIRE(x.twist.size() == expected.size());
    for (const TwistEntry& e : expected) {
        bool found = false;
        for (const auto& [k, c] : x.twist) {
            if (k.row == e.row && k.col == e.col && cat.basis(k.basis).label == e.label) {
                CHECK(c == e.coeff);
                found = true;
            }
        }
        INFO(e.label);
        CHECK(found);
    }
}

}  // namespace

TEST_CASE("translation lift: signs and shifted objects") {
    BaseCategory q = build_path_category(fixtures::chain_with_relation());
    BaseCategory bq = build_dg_quiver_category(fixtures::chain_with_homotopies());
    auto f = chain_lift(q, bq, "om");
    auto trans = std::make_shared<TranslationLift>(f);

    NormalObject a0 = embed_object(q, "A");
    NormalObject bm1 = shift_object(embed_object(q, "B"), -1);

    SUBCASE("objects translate") {
        CHECK(trans->map_object(bm1) == shift_object(embed_object(bq, "B"), -1));
    }

    SUBCASE("zero shifts reproduce the underlying functor") {
        Chain plain = {down(unit_from(q, "A", "b"))};
        CHECK(trans->apply(plain) == f->apply(plain));
    }

    SUBCASE("a single negative shift flips the sign") {
        int beta = q.resolve_from_source(q.object_index("A"), "b");
        Morphism decorated = Morphism::unit(q, a0, bm1, EntryKey{0, 0, beta});
        Susp v = trans->apply({down(decorated)});
        int beta_t = bq.resolve_from_source(bq.object_index("A"), "b");
        Morphism expected = Morphism::unit(bq, embed_object(bq, "A"),
                                           shift_object(embed_object(bq, "B"), -1),
                                           EntryKey{0, 0, beta_t});
        CHECK(v == Susp{Scalar(-1) * expected});
    }

    SUBCASE("identity chains keep strict units") {
        NormalObject a5 = shift_object(embed_object(q, "A"), 5);
        Morphism id5 = Morphism::identity(q, a5);
        Susp v = trans->apply({down(id5)});
        CHECK(up(v) == Morphism::identity(bq, trans->map_object(a5)));
    }
}

TEST_CASE("sum lift: matrices, blocks, and intermediate sums") {
    BaseCategory q = build_path_category(fixtures::chain_with_relation());
    BaseCategory bq = build_dg_quiver_category(fixtures::chain_with_homotopies());
    auto f = chain_lift(q, bq, "om");
    auto trans = std::make_shared<TranslationLift>(f);
    auto sums = std::make_shared<SumLift>(trans);

    NormalObject a2 = direct_sum({embed_object(q, "A"), embed_object(q, "A")});
    NormalObject b2s = direct_sum({embed_object(q, "B"), embed_object(q, "B")});
    NormalObject c1 = embed_object(q, "C");

    int beta = q.resolve_from_source(q.object_index("A"), "b");
    int gamma = q.resolve_from_source(q.object_index("B"), "g");

    SUBCASE("first component acts entrywise") {
        Morphism m(q, a2, b2s, 0);
        m.add_term(EntryKey{0, 0, beta}, Scalar(2));
        m.add_term(EntryKey{1, 1, beta}, Scalar(5));
        Susp v = sums->apply({down(m)});
        int beta_t = bq.resolve_from_source(bq.object_index("A"), "b");
        CHECK(v.m.terms().at(EntryKey{0, 0, beta_t}) == Scalar(2));
        CHECK(v.m.terms().at(EntryKey{1, 1, beta_t}) == Scalar(5));
        CHECK(v.m.terms().size() == 2);
    }

    SUBCASE("single-summand chains reduce to the underlying value") {
        Chain plain = {down(unit_from(q, "B", "g")), down(unit_from(q, "A", "b"))};
        Chain boxed;
        boxed.push_back(down(Morphism::unit(q, direct_sum({embed_object(q, "B")}), c1,
                                            EntryKey{0, 0, gamma})));
        boxed.push_back(down(Morphism::unit(q, direct_sum({embed_object(q, "A")}),
                                            direct_sum({embed_object(q, "B")}),
                                            EntryKey{0, 0, beta})));
        CHECK(up(sums->apply(boxed)).terms() == up(f->apply(plain)).terms());
    }

    SUBCASE("a two-step chain sums over the intermediate summands") {
        Morphism m1(q, a2, b2s, 0);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) m1.add_term(EntryKey{r, c, beta}, Scalar(1));
        Morphism m2(q, b2s, c1, 0);
        m2.add_term(EntryKey{0, 0, gamma}, Scalar(1));
        m2.add_term(EntryKey{0, 1, gamma}, Scalar(1));
        Susp v = sums->apply({down(m2), down(m1)});
        // each middle index contributes one copy of the homotopy value
        REQUIRE(v.m.terms().size() == 2);
        int om_t = bq.resolve_from_source(bq.object_index("A"), "om");
        CHECK(v.m.terms().at(EntryKey{0, 0, om_t}) == Scalar(2));
        CHECK(v.m.terms().at(EntryKey{0, 1, om_t}) == Scalar(2));
    }
}

TEST_CASE("maurer-cartan images of twists") {
    BaseCategory q = build_path_category(fixtures::chain_with_relation());
    BaseCategory bq = build_dg_quiver_category(fixtures::chain_with_homotopies());
    auto f = chain_lift(q, bq, "om");
    auto sums = std::make_shared<SumLift>(std::make_shared<TranslationLift>(f));

    SUBCASE("zero twist maps to zero") {
        NormalObject u = direct_sum({embed_object(q, "A"), embed_object(q, "B")});
        Morphism p = Morphism::zero(q, u, u, 1);
        Morphism image = object_mc_image(*sums, p);
        CHECK(image.is_zero());
    }

    SUBCASE("the chain complex maps to the expected twisted shape") {
        Morphism p = fixtures::chain_complex_twist(q);
        Morphism image = object_mc_image(*sums, p);
        CHECK(check_maurer_cartan(image).ok);
        NormalObject expected_src = sums->map_object(p.src());
        CHECK(image.src() == expected_src);
        check_twist(bq, NormalObject{image.src().summands, image.terms()},
                    {{1, 0, "b", Scalar(-1)},
                     {2, 1, "g", Scalar(-1)},
                     {2, 0, "om", Scalar(-1)}});
    }

    SUBCASE("maurer-cartan failures upstream are rejected") {
        Morphism bad = fixtures::chain_complex_twist(bq);  // residual g*b
        CHECK_THROWS(object_mc_image(*sums, bad));
    }
}

TEST_CASE("hull lift reproduces the two non-equal images of the chain complex") {
    BaseCategory q = build_path_category(fixtures::chain_with_relation());
    BaseCategory bq = build_dg_quiver_category(fixtures::chain_with_homotopies());
    auto f = chain_lift(q, bq, "om");
    auto g = chain_lift(q, bq, "ta");
    auto fs = lift_to_hull(f);
    auto gs = lift_to_hull(g);

    NormalObject c = twist_object(fixtures::chain_complex_twist(q));

    SUBCASE("embedded objects restrict to the underlying functor") {
        NormalObject a = embed_object(q, "A");
        CHECK(fs->map_object(a) == embed_object(bq, "A"));
        Chain pair = {down(unit_from(q, "B", "g")), down(unit_from(q, "A", "b"))};
        CHECK(fs->apply(pair) == f->apply(pair));
    }

    SUBCASE("images are one-sided with unit-coefficient twists") {
        NormalObject fc = fs->map_object(c);
        NormalObject gc = gs->map_object(c);
        CHECK(is_one_sided(fc));
        CHECK(is_one_sided(gc));
        check_twist(bq, fc,
                    {{1, 0, "b", Scalar(-1)},
                     {2, 1, "g", Scalar(-1)},
                     {2, 0, "om", Scalar(-1)}});
        check_twist(bq, gc,
                    {{1, 0, "b", Scalar(-1)},
                     {2, 1, "g", Scalar(-1)},
                     {2, 0, "ta", Scalar(-1)}});
        CHECK(fc.summands == gc.summands);
        CHECK(fc != gc);
    }

    SUBCASE("relation residuals vanish across all stages") {
        std::vector<NormalObject> shift_probes = {
            embed_object(q, "A"), shift_object(embed_object(q, "B"), -1),
            shift_object(embed_object(q, "C"), -2), shift_object(embed_object(q, "A"), 1)};
        std::vector<NormalObject> sum_probes = {
            direct_sum({embed_object(q, "A"), shift_object(embed_object(q, "B"), -1)}),
            embed_object(q, "C"), zero_object()};
        std::vector<NormalObject> twist_probes = {c, embed_object(q, "A"),
                                                  shift_object(embed_object(q, "C"), -2)};

        const AInfFunctor& trans_stage = fs->translation_stage();
        const AInfFunctor& sum_stage = fs->sum_stage();

        for (std::size_t n = 1; n <= 3; ++n) {
            for (const Chain& chain : enumerate_basis_chains(q, shift_probes, n))
                CHECK(functor_relation_residual(trans_stage, chain).is_zero());
            for (const Chain& chain : enumerate_basis_chains(q, sum_probes, n))
                CHECK(functor_relation_residual(sum_stage, chain).is_zero());
            for (const Chain& chain : enumerate_basis_chains(q, twist_probes, n)) {
                CHECK(functor_relation_residual(*fs, chain).is_zero());
                CHECK(functor_relation_residual(*gs, chain).is_zero());
            }
        }
    }

    SUBCASE("random longer chains also satisfy the relation") {
        std::vector<NormalObject> probes = {c, embed_object(q, "A"), embed_object(q, "B"),
                                            shift_object(c, 1)};
        for (const Chain& chain : random_basis_chains(q, probes, 4, 25, 20240517))
            CHECK(functor_relation_residual(*fs, chain).is_zero());
    }

    SUBCASE("the parallel sweep visits every chain exactly once") {
        std::vector<NormalObject> probes = {c, embed_object(q, "A")};
        std::atomic<long long> parallel_count{0};
        std::atomic<bool> ok{true};
        parallel_for_each_basis_chain(q, probes, 2, true, 3, [&](const Chain& chain) {
            parallel_count.fetch_add(1);
            if (!functor_relation_residual(*fs, chain).is_zero()) ok = false;
        });
        long long serial_count = 0;
        for_each_basis_chain(q, probes, 2, true, [&](const Chain&) { ++serial_count; });
        CHECK(parallel_count.load() == serial_count);
        CHECK(ok.load());
    }

    SUBCASE("non-one-sided sources are refused") {
        NormalObject cyc;
        int ida = q.identity_id(q.object_index("A"));
        cyc.summands = {Summand{q.object_index("A"), 0}, Summand{q.object_index("A"), 1}};
        cyc.twist[EntryKey{1, 0, ida}] = Scalar(1);
        cyc.twist[EntryKey{0, 1, ida}] = Scalar(-1);
        CHECK_THROWS(fs->map_object(cyc));
    }
}
