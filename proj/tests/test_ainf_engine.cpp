#include <doctest.h>

#include <pretr/ainf.hpp>
#include <pretr/homology.hpp>

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

/// Example functor data: the chain quiver into the dg chain with
/// homotopies, with the length-two homotopy pinned.
std::shared_ptr<TableFunctor> chain_lift(const BaseCategory& q, const BaseCategory& bq,
                                         const std::string& pinned) {
    H0FunctorTable table;
    for (const std::string v : {"A", "B", "C"}) table.objects[v] = embed_object(bq, v);
    table.arrow_images["b"] = unit_from(bq, "A", "b");
    table.arrow_images["g"] = unit_from(bq, "B", "g");
    if (!pinned.empty()) table.pinned_homotopies[{"g", "b"}] = unit_from(bq, "A", pinned);
    return quiver_functor_lift(q, bq, table);
}

}  // namespace

TEST_CASE("suspended structure maps") {
    BaseCategory bq = build_dg_quiver_category(fixtures::chain_with_homotopies());
    Morphism om = unit_from(bq, "A", "om");
    Morphism gb = unit_from(bq, "A", "g*b");
    Morphism idb = Morphism::identity(bq, embed_object(bq, "B"));
    Morphism beta = unit_from(bq, "A", "b");

    CHECK(b1(down(Morphism::identity(bq, embed_object(bq, "A")))).is_zero());
    CHECK(b1(down(om)) == Susp{Scalar(-1) * gb});
    CHECK(b2(down(idb), down(beta)) == down(beta));
    CHECK(b2(down(beta), down(Morphism::identity(bq, beta.src()))) == down(beta));
    // odd argument against the right identity picks up the sign
    Morphism ta = unit_from(bq, "A", "ta");
    CHECK(b2(down(ta), down(Morphism::identity(bq, ta.src()))) == Susp{Scalar(-1) * ta});
}

TEST_CASE("stasheff identities hold on seeds and their completions") {
    BaseCategory q = build_path_category(fixtures::chain_with_relation());
    BaseCategory bq = build_dg_quiver_category(fixtures::chain_with_homotopies());
    for (const BaseCategory* cat : {&q, &bq}) {
        DgView seed = seed_view(*cat);
        for (const DgView& view : {seed, pretriangulated_hull(seed)}) {
            StasheffReport r = check_stasheff(view);
            INFO(view.name);
            CHECK(r.pass());
            CHECK(r.chains_checked > 0);
        }
    }
}

TEST_CASE("degenerate chains are recognized") {
    BaseCategory q = build_path_category(fixtures::chain_with_relation());
    Morphism b = unit_from(q, "A", "b");
    Morphism g = unit_from(q, "B", "g");
    Morphism idb = Morphism::identity(q, embed_object(q, "B"));

    CHECK(is_degenerate_chain({down(g), down(Scalar(2) * idb), down(b)}));
    CHECK(is_degenerate_chain({down(b), down(Morphism::identity(q, b.src()))}));
    CHECK(!is_degenerate_chain({down(g), down(b)}));
}

TEST_CASE("quiver lift produces a relation-exact functor") {
    BaseCategory q = build_path_category(fixtures::chain_with_relation());
    BaseCategory bq = build_dg_quiver_category(fixtures::chain_with_homotopies());

    auto f = chain_lift(q, bq, "om");
    auto g = chain_lift(q, bq, "ta");

    SUBCASE("the homotopy component carries the relation-checked sign") {
        Morphism om = unit_from(bq, "A", "om");
        Chain pair = {down(unit_from(q, "B", "g")), down(unit_from(q, "A", "b"))};
        CHECK(f->apply(pair) == down(om));
        // and the default (canonical) solver picks the same sign
        auto canonical = chain_lift(q, bq, "");
        CHECK(canonical->apply(pair) == down(om));
        CHECK(g->apply(pair) == down(unit_from(bq, "A", "ta")));
    }

    SUBCASE("relation residual vanishes on every composable chain") {
        DgView seed = seed_view(q);
        for (std::size_t n = 1; n <= 3; ++n)
            for (const Chain& chain : enumerate_basis_chains(q, seed.probes, n))
                for (const auto& functor : {f, g}) {
                    Susp r = functor_relation_residual(*functor, chain);
                    INFO("n = ", n);
                    CHECK(r.is_zero());
                }
    }

    SUBCASE("strict units") {
        Morphism ida = Morphism::identity(q, embed_object(q, "A"));
        CHECK(up(f->apply({down(ida)})) == Morphism::identity(bq, embed_object(bq, "A")));
        Chain with_id = {down(unit_from(q, "A", "b")), down(ida)};
        CHECK(f->apply(with_id).is_zero());
    }

    SUBCASE("underlying functor on homotopy classes") {
        Morphism ida = Morphism::identity(q, embed_object(q, "A"));
        CHECK(h0_image(*f, ida) == Morphism::identity(bq, embed_object(bq, "A")));
        Morphism b_img = h0_image(*f, unit_from(q, "A", "b"));
        CHECK(b_img == unit_from(bq, "A", "b"));
        Morphism g_img_f = h0_image(*f, unit_from(q, "B", "g"));
        Morphism g_img_g = h0_image(*g, unit_from(q, "B", "g"));
        CHECK(h0_equal(bq, g_img_f, g_img_g));
    }
}

TEST_CASE("a non-functorial table is rejected") {
    BaseCategory q = build_path_category(fixtures::chain_with_relation());
    // target without the homotopies: the composite is not a coboundary
    QuiverPresentation plain;
    plain.name = "plain";
    plain.vertices = {"A", "B", "C"};
    plain.arrows = {{"b", "A", "B", 0}, {"g", "B", "C", 0}};
    BaseCategory target = build_path_category(plain);
    H0FunctorTable table;
    for (const std::string v : {"A", "B", "C"}) table.objects[v] = embed_object(target, v);
    table.arrow_images["b"] = unit_from(target, "A", "b");
    table.arrow_images["g"] = unit_from(target, "B", "g");
    CHECK_THROWS_WITH_AS(quiver_functor_lift(q, target, table),
                         doctest::Contains("not a coboundary"), std::invalid_argument);
}

TEST_CASE("path length above two is refused") {
    BaseCategory b3 = beilinson_category(3);
    BaseCategory b2 = beilinson_category(2);
    H0FunctorTable table;
    CHECK_THROWS_WITH_AS(quiver_functor_lift(b3, b2, table), doctest::Contains("path length"),
                         std::invalid_argument);
}

TEST_CASE("multilinearity of functor evaluation") {
    BaseCategory q = build_path_category(fixtures::chain_with_relation());
    BaseCategory bq = build_dg_quiver_category(fixtures::chain_with_homotopies());
    auto f = chain_lift(q, bq, "om");

    Morphism b = unit_from(q, "A", "b");
    Morphism g = unit_from(q, "B", "g");
    Chain scaled = {down(Scalar(3) * g), down(Scalar::rational(1, 2) * b)};
    Chain plain = {down(g), down(b)};
    CHECK(f->apply(scaled) == Scalar::rational(3, 2) * f->apply(plain));
}
