#include <doctest.h>

#include <pretr/beilinson.hpp>
#include <pretr/completions.hpp>
#include <pretr/morphism.hpp>
#include <pretr/sampling.hpp>

#include "fixtures.hpp"

#include <random>

using namespace pretr;

namespace {

Morphism unit_from(const BaseCategory& cat, const std::string& src_obj, const std::string& label) {
    int src = cat.object_index(src_obj);
    int id = cat.resolve_from_source(src, label);
    NormalObject s = embed_object(cat, src_obj);
    NormalObject d = embed_object(cat, cat.object_label(cat.basis(id).dst));
    return Morphism::unit(cat, s, d, EntryKey{0, 0, id});
}

}  // namespace

TEST_CASE("differential and composition on embedded objects") {
    BaseCategory q = build_path_category(fixtures::chain_with_relation());
    BaseCategory bq = build_dg_quiver_category(fixtures::chain_with_homotopies());
    BaseCategory b2 = beilinson_category(2);

    SUBCASE("identities are closed and neutral") {
        for (const BaseCategory* cat : {&q, &bq, &b2})
            for (std::size_t i = 0; i < cat->object_count(); ++i) {
                NormalObject x = embed_object(*cat, cat->object_label(static_cast<int>(i)));
                Morphism id = Morphism::identity(*cat, x);
                CHECK(id.differential().is_zero());
                CHECK(compose(id, id) == id);
            }
    }

    SUBCASE("degree-0 categories have zero differential") {
        Morphism x0 = unit_from(b2, "O(-1)", "x0");
        CHECK(x0.differential().is_zero());
    }

    SUBCASE("the composite vanishes with the relation but not without") {
        Morphism g_q = unit_from(q, "B", "g");
        Morphism b_q = unit_from(q, "A", "b");
        CHECK(compose(g_q, b_q).is_zero());

        Morphism g_b = unit_from(bq, "B", "g");
        Morphism b_b = unit_from(bq, "A", "b");
        Morphism gb = compose(g_b, b_b);
        CHECK(!gb.is_zero());
        CHECK(gb == unit_from(bq, "A", "g*b"));
        CHECK(compose(gb, Morphism::identity(bq, gb.src())) == gb);
    }

    SUBCASE("the homotopy bounds the composite") {
        Morphism om = unit_from(bq, "A", "om");
        CHECK(om.degree() == -1);
        Morphism d_om = om.differential();
        CHECK(d_om == unit_from(bq, "A", "g*b"));
    }

    SUBCASE("endpoint mismatch is rejected") {
        Morphism g = unit_from(q, "B", "g");
        CHECK_THROWS(compose(g, g));
    }
}

TEST_CASE("axiom checker accepts the seed categories") {
    BaseCategory q = build_path_category(fixtures::chain_with_relation());
    BaseCategory bq = build_dg_quiver_category(fixtures::chain_with_homotopies());
    for (const BaseCategory* cat : {&q, &bq}) {
        CheckReport r = check_dg_axioms(seed_view(*cat));
        INFO(r.to_string());
        CHECK(r.pass());
        CHECK(r.pairs_checked > 0);
        CHECK(r.triples_checked > 0);
    }
}

TEST_CASE("axiom checker runs on a viewed k-category with zero differential") {
    BaseCategory b2 = beilinson_category(2);
    DgView view = as_dg(b2);
    CheckReport r = check_dg_axioms(view);
    INFO(r.to_string());
    CHECK(r.pass());
    // the coercion leaves every differential at zero
    for (const Morphism& u : hom_units(b2, view.probes[0], view.probes[2]))
        CHECK(u.differential().is_zero());
    // and refuses categories that already carry one
    BaseCategory bq = build_dg_quiver_category(fixtures::chain_with_homotopies());
    CHECK_THROWS(as_dg(bq));
}

TEST_CASE("extension to complexes commutes with shifts and cones") {
    BaseCategory b1 = beilinson_category(1);
    ProductWindow w = make_product_window(1, 1, 1, 1);
    AdditiveFunctorTable pull = pullback_table(b1, w);

    std::mt19937 rng(31337);
    for (int trial = 0; trial < 10; ++trial) {
        NormalObject x = random_bounded_complex(b1, rng, 3);
        CHECK(pull.apply_to_object(shift_object(x, 1)) == shift_object(pull.apply_to_object(x), 1));
        CHECK(pull.apply_to_object(shift_object(x, -2)) ==
              shift_object(pull.apply_to_object(x), -2));
        // cones of random closed maps are taken to cones on the nose
        NormalObject y = random_bounded_complex(b1, rng, 2);
        Morphism phi = random_closed_element(b1, x, y, 0, rng);
        CHECK(pull.apply_to_object(cone(phi)) == cone(pull.apply_to_morphism(phi)));
    }
}

TEST_CASE("a corrupted differential fails degree validation") {
    BaseCategory::Builder b("broken", Field::rationals());
    int va = b.add_object("A");
    int vc = b.add_object("C");
    int ida = b.add_basis(va, va, 0, "1");
    int idc = b.add_basis(vc, vc, 0, "1");
    int om = b.add_basis(va, vc, -1, "om");
    int beta = b.add_basis(va, vc, 0, "beta");
    b.set_identity(va, ida);
    b.set_identity(vc, idc);
    b.set_composition(ida, ida, {{ida, Scalar(1)}});
    b.set_composition(idc, idc, {{idc, Scalar(1)}});
    b.set_composition(idc, om, {{om, Scalar(1)}});
    b.set_composition(om, ida, {{om, Scalar(1)}});
    b.set_composition(idc, beta, {{beta, Scalar(1)}});
    b.set_composition(beta, ida, {{beta, Scalar(1)}});
    // d(beta) := om has degree -1 instead of |beta| + 1
    b.set_differential(beta, {{om, Scalar(1)}});
    CHECK_THROWS(b.build());
}
