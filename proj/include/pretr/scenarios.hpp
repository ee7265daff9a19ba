#pragma once

#include <pretr/beilinson.hpp>
#include <pretr/io.hpp>
#include <pretr/lift.hpp>
#include <pretr/sampling.hpp>

#include <chrono>
#include <sstream>
#include <string>
#include <vector>

namespace pretr {

struct SessionConfig {
    Field field = Field::rationals();
    int check_depth = 3;
    int search_depth = 1;
    bool json_output = false;

    void validate() const {
        if (check_depth < 1 || search_depth < 1)
            throw std::invalid_argument("SessionConfig: depths must be at least 1");
    }
};

struct ReportLine {
    std::string label;
    bool pass = false;
    std::string detail;
};

struct ScenarioReport {
    std::string name;
    std::vector<ReportLine> lines;

    bool pass() const {
        for (const auto& l : lines)
            if (!l.pass) return false;
        return true;
    }

    void add(const std::string& label, bool ok, const std::string& detail = "") {
        lines.push_back(ReportLine{label, ok, detail});
    }

    std::string to_text() const {
        std::ostringstream os;
        os << "scenario " << name << "\n";
        for (const auto& l : lines) {
            os << (l.pass ? "  pass  " : "  FAIL  ") << l.label;
            if (!l.detail.empty()) os << " -- " << l.detail;
            os << "\n";
        }
        os << (pass() ? "result: pass" : "result: FAIL") << "\n";
        return os.str();
    }

    io::json to_json() const {
        io::json j;
        j["scenario"] = name;
        j["pass"] = pass();
        io::json items = io::json::array();
        for (const auto& l : lines) {
            io::json e;
            e["label"] = l.label;
            e["pass"] = l.pass;
            if (!l.detail.empty()) e["detail"] = l.detail;
            items.push_back(e);
        }
        j["checks"] = items;
        return j;
    }
};

namespace scenarios {

/// Fixtures of the worked three-object example: the relation-bound quiver
/// and its dg counterpart with two independent homotopies.
inline QuiverPresentation three_chain_with_relation() {
    QuiverPresentation p;
    p.name = "Q3";
    p.vertices = {"A", "B", "C"};
    p.arrows = {{"b", "A", "B", 0}, {"g", "B", "C", 0}};
    p.relations.push_back(PathCombo{{Scalar(1), Path{1, 0}}});
    return p;
}

inline QuiverPresentation three_chain_with_homotopies() {
    QuiverPresentation p;
    p.name = "B3h";
    p.vertices = {"A", "B", "C"};
    p.arrows = {{"b", "A", "B", 0},
                {"g", "B", "C", 0},
                {"om", "A", "C", -1},
                {"ta", "A", "C", -1}};
    p.differentials["om"] = PathCombo{{Scalar(1), Path{1, 0}}};
    p.differentials["ta"] = PathCombo{{Scalar(1), Path{1, 0}}};
    return p;
}

inline Morphism embedded_unit(const BaseCategory& cat, const std::string& src_obj,
                              const std::string& label) {
    int src = cat.object_index(src_obj);
    int id = cat.resolve_from_source(src, label);
    return Morphism::unit(cat, embed_object(cat, src_obj),
                          embed_object(cat, cat.object_label(cat.basis(id).dst)),
                          EntryKey{0, 0, id});
}

inline NormalObject three_chain_complex(const BaseCategory& cat) {
    NormalObject u = direct_sum({embed_object(cat, "A"), shift_object(embed_object(cat, "B"), -1),
                                 shift_object(embed_object(cat, "C"), -2)});
    Morphism q(cat, u, u, 1);
    q.add_term(EntryKey{1, 0, cat.resolve_from_source(cat.object_index("A"), "b")}, Scalar(1));
    q.add_term(EntryKey{2, 1, cat.resolve_from_source(cat.object_index("B"), "g")}, Scalar(1));
    return twist_object(q);
}

inline std::shared_ptr<TableFunctor> three_chain_functor(const BaseCategory& q,
                                                         const BaseCategory& bq,
                                                         const std::string& homotopy) {
    H0FunctorTable table;
    for (const std::string v : {"A", "B", "C"}) table.objects[v] = embed_object(bq, v);
    table.arrow_images["b"] = embedded_unit(bq, "A", "b");
    table.arrow_images["g"] = embedded_unit(bq, "B", "g");
    table.pinned_homotopies[{"g", "b"}] = embedded_unit(bq, "A", homotopy);
    return quiver_functor_lift(q, bq, table);
}

/// Two lifts of the same underlying functor whose hull images of a short
/// complex are certified non-isomorphic.
inline ScenarioReport run_example_two_lifts(const SessionConfig& cfg) {
    ScenarioReport report;
    report.name = "example-5.3";
    BaseCategory q = build_path_category(three_chain_with_relation(), cfg.field);
    BaseCategory bq = build_dg_quiver_category(three_chain_with_homotopies(), cfg.field);
    auto f = three_chain_functor(q, bq, "om");
    auto g = three_chain_functor(q, bq, "ta");
    auto fs = lift_to_hull(f);
    auto gs = lift_to_hull(g);
    NormalObject c = three_chain_complex(q);
    NormalObject fc = fs->map_object(c);
    NormalObject gc = gs->map_object(c);

    report.add("images are one-sided twisted complexes", is_one_sided(fc) && is_one_sided(gc));

    auto shape_matches = [&](const NormalObject& x, const std::string& homotopy) {
        if (x.twist.size() != 3) return false;
        bool has_b = false, has_g = false, has_h = false;
        for (const auto& [k, coeff] : x.twist) {
            if (!coeff.is_unit_sign()) return false;
            const std::string& label = bq.basis(k.basis).label;
            if (k.row == 1 && k.col == 0 && label == "b") has_b = true;
            if (k.row == 2 && k.col == 1 && label == "g") has_g = true;
            if (k.row == 2 && k.col == 0 && label == homotopy) has_h = true;
        }
        return has_b && has_g && has_h;
    };
    report.add("twist matrices carry the connecting maps and the chosen homotopy, "
               "all with unit coefficients",
               shape_matches(fc, "om") && shape_matches(gc, "ta"));

    Morphism fq(bq, NormalObject{fc.summands, {}}, NormalObject{fc.summands, {}}, 1);
    for (const auto& [k, coeff] : fc.twist) fq.add_term(k, coeff);
    Morphism gq(bq, NormalObject{gc.summands, {}}, NormalObject{gc.summands, {}}, 1);
    for (const auto& [k, coeff] : gc.twist) gq.add_term(k, coeff);
    report.add("maurer-cartan residual is exactly zero",
               check_maurer_cartan(fq).ok && check_maurer_cartan(gq).ok);

    HomComplex between(bq, fc, gc);
    report.add("the space of closed degree-0 morphisms between the images is {0}",
               between.cocycle_dim(0) == 0,
               "dim Z^0 = " + std::to_string(between.cocycle_dim(0)));
    report.add("all degree -1 morphisms between the images vanish", between.dim(-1) == 0);

    IsoVerdict v = decide_h0_isomorphic(bq, fc, gc, cfg.search_depth);
    report.add("not H0-isomorphic: certified", v.not_isomorphic(), v.certificate);
    IsoVerdict vf0 = decide_h0_isomorphic(bq, fc, zero_object(), cfg.search_depth);
    IsoVerdict vg0 = decide_h0_isomorphic(bq, gc, zero_object(), cfg.search_depth);
    report.add("neither image is isomorphic to the zero object",
               vf0.not_isomorphic() && vg0.not_isomorphic());

    // the underlying functors on classes coincide
    bool same_h0 = true;
    for (const std::string arrows : {"b", "g"}) {
        Morphism a = arrows == "b" ? embedded_unit(q, "A", "b") : embedded_unit(q, "B", "g");
        same_h0 = same_h0 && h0_equal(bq, h0_image(*f, a), h0_image(*g, a));
    }
    report.add("the two lifts induce the same underlying functor", same_h0);
    return report;
}

/// The rank-nine obstruction against modeling the twist functor by a
/// strict table on generators.
inline ScenarioReport run_no_naive_table(const SessionConfig& cfg) {
    ScenarioReport report;
    report.name = "beilinson-nogo";
    BaseCategory b2 = beilinson_category(2, cfg.field);
    NormalObject c = koszul_complex(b2);
    NormalObject om1 = embed_object(b2, "O(-1)");
    NormalObject om2 = embed_object(b2, "O(-2)");

    HomComplex to_m2(b2, c, om2);
    report.add("dim Z^0 Hom(C, O(-2)) = 3", to_m2.cocycle_dim(0) == 3,
               "computed " + std::to_string(to_m2.cocycle_dim(0)));

    int id_om2 = b2.identity_id(b2.object_index("O(-2)"));
    std::vector<Morphism> z;
    for (int j = 0; j < 3; ++j) {
        Morphism m(b2, c, om2, 0);
        m.add_term(EntryKey{0, j, id_om2}, Scalar(1));
        z.push_back(m);
    }
    HomComplex to_m1(b2, c, om1);
    Matrix rows(9, to_m1.dim(0));
    std::vector<Morphism> comps;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Morphism comp = compose(embedded_unit(b2, "O(-2)", "y" + std::to_string(i)),
                                    z[static_cast<std::size_t>(j)]);
            std::vector<Scalar> co = to_m1.coordinates(comp);
            for (std::size_t cidx = 0; cidx < co.size(); ++cidx)
                rows(static_cast<std::size_t>(3 * i + j), cidx) = co[cidx];
            comps.push_back(comp);
        }
    std::size_t rank = rows.rank_fraction_free();
    report.add("rank 9: no naive tensor functor exists", rank == 9,
               "rank of the nine composites = " + std::to_string(rank));
    report.add("the images of the commuting pair differ for every unit-scalar table",
               !(comps[3] - comps[1]).is_zero());
    return report;
}

/// The full plane model: lift the twist table, apply the hull lift to the
/// Koszul resolution, and count classes against the section-count oracle.
inline ScenarioReport run_plane_twist_model(const SessionConfig& cfg) {
    ScenarioReport report;
    report.name = "twist-p2";
    BaseCategory b2 = beilinson_category(2, cfg.field);
    auto f = twist_by_line_bundle_model(b2);
    report.add("quiver lift of the twist table succeeded", true);

    bool h0_ok = true;
    for (int i = 0; i <= 2; ++i) {
        Morphism xi = embedded_unit(b2, "O(-1)", "x" + std::to_string(i));
        h0_ok = h0_ok &&
                h0_image(*f, xi) == embedded_unit(b2, "O(-2)", "y" + std::to_string(i));
    }
    report.add("underlying functor sends sections to sections", h0_ok);

    DgView seed = seed_view(b2);
    bool relations_ok = true;
    long long chains = 0;
    for (std::size_t n = 1; n <= 3; ++n)
        for (const Chain& chain : enumerate_basis_chains(b2, seed.probes, n)) {
            ++chains;
            relations_ok = relations_ok && functor_relation_residual(*f, chain).is_zero();
        }
    report.add("functor relation holds on every seed chain", relations_ok,
               std::to_string(chains) + " chains");

    auto fs = lift_to_hull(f);
    NormalObject c = koszul_complex(b2);
    NormalObject fc = fs->map_object(c);
    report.add("hull image of the resolution is one-sided", is_one_sided(fc));
    const std::size_t expected[3] = {15, 10, 6};
    bool dims_ok = true;
    std::string detail;
    for (int j = 0; j <= 2; ++j) {
        HomComplex hc(b2, fc, embed_object(b2, line_bundle_label(-j)));
        std::size_t got = hc.cohomology_dim(0);
        dims_ok = dims_ok && got == expected[j];
        detail += (j ? ", " : "") + std::to_string(got);
    }
    report.add("class counts 15, 10, 6 against the section-count oracle", dims_ok, detail);
    return report;
}

/// Adjunction between the pullback and the first-projection direct image
/// on random bounded complexes over the line and the product window.
inline ScenarioReport run_line_adjunction(const SessionConfig& cfg, int trials = 50,
                                          std::uint32_t seed = 20240229) {
    ScenarioReport report;
    report.name = "adjunction-p1";
    BaseCategory b1 = beilinson_category(1, cfg.field);
    ProductWindow w = make_product_window(1, 1, 1, 1, cfg.field);
    AdditiveFunctorTable pull = pullback_table(b1, w);
    AdditiveFunctorTable push = direct_image_table(w, b1, false);
    std::mt19937 rng(seed);
    bool ok = true;
    int done = 0;
    for (int trial = 0; trial < trials; ++trial) {
        NormalObject x = random_bounded_complex(b1, rng, 3);
        NormalObject y = random_bounded_complex(w.product, rng, 3);
        HomComplex lhs(w.product, pull.apply_to_object(x), y);
        HomComplex rhs(b1, x, push.apply_to_object(y));
        if (lhs.cohomology_dim(0) != rhs.cohomology_dim(0)) ok = false;
        ++done;
    }
    report.add("class counts agree across the adjunction", ok,
               std::to_string(done) + " random complex pairs");
    return report;
}

inline ScenarioReport run_scenario(const std::string& name, const SessionConfig& cfg) {
    if (name == "example-5.3") return run_example_two_lifts(cfg);
    if (name == "beilinson-nogo") return run_no_naive_table(cfg);
    if (name == "twist-p2") return run_plane_twist_model(cfg);
    if (name == "adjunction-p1") return run_line_adjunction(cfg);
    throw std::invalid_argument("unknown scenario '" + name +
                                "' (known: example-5.3, beilinson-nogo, twist-p2, adjunction-p1)");
}

}  // namespace scenarios
}  // namespace pretr
