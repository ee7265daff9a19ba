#pragma once

#include <pretr/beilinson.hpp>
#include <pretr/presentation.hpp>

namespace fixtures {

/// A -> B -> C with the composite relation g o b = 0.
inline pretr::QuiverPresentation chain_with_relation() {
    pretr::QuiverPresentation p;
    p.name = "Q";
    p.vertices = {"A", "B", "C"};
    p.arrows = {{"b", "A", "B", 0}, {"g", "B", "C", 0}};
    p.relations.push_back(pretr::PathCombo{{pretr::Scalar(1), pretr::Path{1, 0}}});
    return p;
}

/// Same chain without the relation, plus two degree -1 arrows A -> C
/// whose differentials both hit the composite g o b.
inline pretr::QuiverPresentation chain_with_homotopies() {
    pretr::QuiverPresentation p;
    p.name = "Bq";
    p.vertices = {"A", "B", "C"};
    p.arrows = {{"b", "A", "B", 0},
                {"g", "B", "C", 0},
                {"om", "A", "C", -1},
                {"ta", "A", "C", -1}};
    p.differentials["om"] = pretr::PathCombo{{pretr::Scalar(1), pretr::Path{1, 0}}};
    p.differentials["ta"] = pretr::PathCombo{{pretr::Scalar(1), pretr::Path{1, 0}}};
    return p;
}

/// The three-term complex A -> B[-1] -> C[-2] as a twist candidate on its
/// underlying sum; valid only where the composite vanishes.
inline pretr::Morphism chain_complex_twist(const pretr::BaseCategory& cat) {
    using namespace pretr;
    NormalObject u = direct_sum({embed_object(cat, "A"), shift_object(embed_object(cat, "B"), -1),
                                 shift_object(embed_object(cat, "C"), -2)});
    Morphism q(cat, u, u, 1);
    q.add_term(EntryKey{1, 0, cat.resolve_from_source(cat.object_index("A"), "b")}, Scalar(1));
    q.add_term(EntryKey{2, 1, cat.resolve_from_source(cat.object_index("B"), "g")}, Scalar(1));
    return q;
}

}  // namespace fixtures
