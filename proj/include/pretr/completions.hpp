#pragma once

#include <pretr/morphism.hpp>

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pretr {

// ---------------------------------------------------------------------------
// Structural object operations
// ---------------------------------------------------------------------------

inline NormalObject embed_object(const BaseCategory& cat, const std::string& label) {
    return NormalObject{{Summand{cat.object_index(label), 0}}, {}};
}

inline NormalObject zero_object() { return NormalObject{}; }

/// Direct sum: concatenated summands, block-diagonal twist.
inline NormalObject direct_sum(const std::vector<NormalObject>& parts) {
    NormalObject r;
    int offset = 0;
    for (const auto& p : parts) {
        for (const auto& s : p.summands) r.summands.push_back(s);
        for (const auto& [k, c] : p.twist)
            r.twist.emplace(EntryKey{k.row + offset, k.col + offset, k.basis}, c);
        offset += static_cast<int>(p.summands.size());
    }
    return r;
}

/// Translation of a whole object: all summand shifts move by `by` and the
/// twist picks up the sign (-1)^by, which keeps the defining degree-`by`
/// isomorphism closed.
inline NormalObject shift_object(const NormalObject& x, int by) {
    NormalObject r = x;
    for (auto& s : r.summands) s.shift += by;
    if (by % 2 != 0)
        for (auto& [k, c] : r.twist) c = -c;
    return r;
}

/// Residual of the Maurer-Cartan equation d(q) + q o q for a degree-1
/// endomorphism q of (a possibly already twisted) object.
inline Morphism maurer_cartan_residual(const Morphism& q) {
    if (!q.is_endo()) throw std::invalid_argument("maurer_cartan: not an endomorphism");
    if (!q.is_zero() && q.degree() != 1)
        throw std::invalid_argument("maurer_cartan: twist must have degree 1");
    return q.differential() + compose(q, q);
}

struct MaurerCartanCheck {
    bool ok = false;
    Morphism residual;
};

inline MaurerCartanCheck check_maurer_cartan(const Morphism& q) {
    Morphism r = maurer_cartan_residual(q);
    return MaurerCartanCheck{r.is_zero(), r};
}

/// Twisted complex over `x`: rejects any q with nonzero Maurer-Cartan
/// residual. When x already carries a twist p, the result is the merged
/// object with twist p + q.
inline NormalObject twist_object(const Morphism& q) {
    MaurerCartanCheck mc = check_maurer_cartan(q);
    if (!mc.ok)
        throw std::invalid_argument("twist_object: Maurer-Cartan residual is nonzero: " +
                                    mc.residual.to_string());
    NormalObject r = q.src();
    for (const auto& [k, c] : q.terms()) term_add(r.twist, k, c);
    return r;
}

/// Mapping cone of a closed degree-0 morphism: src[1] (+) dst with the
/// morphism itself in the connecting block.
inline NormalObject cone(const Morphism& phi) {
    if (phi.degree() != 0 && !phi.is_zero())
        throw std::invalid_argument("cone: morphism must have degree 0");
    if (!phi.is_closed()) throw std::invalid_argument("cone: morphism must be closed");
    NormalObject shifted = shift_object(phi.src(), 1);
    NormalObject r = direct_sum({shifted, phi.dst()});
    int offset = static_cast<int>(shifted.summands.size());
    for (const auto& [k, c] : phi.terms())
        term_add(r.twist, EntryKey{k.row + offset, k.col, k.basis}, c);
    return r;
}

/// Normalizes an algebraic object term into Twist(Sum(Shift(Base))) form.
inline NormalObject normalize(const BaseCategory& cat, const ObjectExpr& e) {
    switch (e.kind()) {
        case ObjectExpr::Kind::Base:
            return embed_object(cat, e.base_label());
        case ObjectExpr::Kind::Sum: {
            std::vector<NormalObject> parts;
            parts.reserve(e.parts().size());
            for (const auto& p : e.parts()) parts.push_back(normalize(cat, p));
            return direct_sum(parts);
        }
        case ObjectExpr::Kind::Shift:
            return shift_object(normalize(cat, e.parts().front()), e.shift_by());
        case ObjectExpr::Kind::Twist: {
            NormalObject inner = normalize(cat, e.parts().front());
            Morphism q(cat, inner, inner, 1);
            for (const auto& [k, c] : e.twist_data()) q.add_term(k, c);
            return twist_object(q);
        }
    }
    throw std::logic_error("normalize: unreachable");
}

// ---------------------------------------------------------------------------
// One-sided twisted complexes
// ---------------------------------------------------------------------------

/// One-sided = the twist matrix is strictly lower triangular: entries map
/// earlier summands to strictly later ones, as the differential of a
/// complex written left to right does.
inline bool is_one_sided(const NormalObject& x) {
    for (const auto& [k, c] : x.twist) {
        (void)c;
        if (k.row <= k.col) return false;
    }
    return true;
}

/// Attempts to reorder summands so the twist becomes strictly lower
/// triangular. Returns the permuted object and the permutation (new
/// position of each old summand), or nothing when entries form a cycle or
/// hit a diagonal.
inline std::optional<std::pair<NormalObject, std::vector<int>>> permute_to_one_sided(
    const NormalObject& x) {
    const int n = static_cast<int>(x.summands.size());
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
    std::vector<int> indeg(static_cast<std::size_t>(n), 0);
    for (const auto& [k, c] : x.twist) {
        (void)c;
        if (k.row == k.col) return std::nullopt;
        out[static_cast<std::size_t>(k.col)].push_back(k.row);
        ++indeg[static_cast<std::size_t>(k.row)];
    }
    // Kahn's algorithm, smallest original index first for determinism.
    std::vector<int> order;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int i = 0; i < n; ++i)
            if (!used[static_cast<std::size_t>(i)] && indeg[static_cast<std::size_t>(i)] == 0) {
                pick = i;
                break;
            }
        if (pick < 0) return std::nullopt;
        used[static_cast<std::size_t>(pick)] = true;
        order.push_back(pick);
        for (int j : out[static_cast<std::size_t>(pick)]) --indeg[static_cast<std::size_t>(j)];
    }
    std::vector<int> new_pos(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) new_pos[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])] = p;
    NormalObject r;
    r.summands.reserve(x.summands.size());
    for (int p = 0; p < n; ++p)
        r.summands.push_back(x.summands[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])]);
    for (const auto& [k, c] : x.twist)
        r.twist.emplace(EntryKey{new_pos[static_cast<std::size_t>(k.row)],
                                 new_pos[static_cast<std::size_t>(k.col)], k.basis},
                        c);
    return std::make_pair(r, new_pos);
}

/// The permutation isomorphism from x to its one-sided normalization:
/// closed, degree 0, strict inverse given by the transpose permutation.
inline Morphism permutation_isomorphism(const BaseCategory& cat, const NormalObject& x,
                                        const NormalObject& permuted,
                                        const std::vector<int>& new_pos) {
    Morphism m(cat, x, permuted, 0);
    for (std::size_t i = 0; i < x.summands.size(); ++i)
        m.add_term(EntryKey{new_pos[i], static_cast<int>(i),
                            cat.identity_id(x.summands[i].object)},
                   Scalar(1));
    return m;
}

// ---------------------------------------------------------------------------
// Completion views and the axiom checker
// ---------------------------------------------------------------------------

/// A dg category presented to the checker: the base category together with
/// a finite roster of probe objects. Completions of a finite category have
/// unboundedly many objects, so exhaustive verification always runs over
/// such a roster; the factories below choose representative rosters.
struct DgView {
    const BaseCategory* base = nullptr;
    std::string name;
    std::vector<NormalObject> probes;
};

inline DgView seed_view(const BaseCategory& cat) {
    DgView v{&cat, cat.name(), {}};
    for (std::size_t i = 0; i < cat.object_count(); ++i)
        v.probes.push_back(embed_object(cat, cat.object_label(static_cast<int>(i))));
    return v;
}

/// A k-linear category viewed as a dg category: hom spaces concentrated in
/// degree 0 with zero differential. The representation is shared; this
/// checks the preconditions and names the coercion.
inline DgView as_dg(const BaseCategory& cat) {
    if (cat.degree_support() != std::pair<int, int>{0, 0})
        throw std::invalid_argument("as_dg: hom spaces must be concentrated in degree 0");
    for (std::size_t id = 0; id < cat.basis_count(); ++id)
        if (!cat.diff_basis(static_cast<int>(id)).empty())
            throw std::invalid_argument("as_dg: category already carries a differential");
    return seed_view(cat);
}

/// Every closed degree-0 basis morphism between distinct probe objects, in
/// deterministic order; used to seed cones for twist probes.
std::vector<Morphism> closed_degree0_units(const DgView& view);

inline DgView direct_sum_completion(const DgView& inner, std::size_t max_extra = 4) {
    DgView v{inner.base, inner.name + "^sum", {}};
    v.probes.push_back(zero_object());
    for (const auto& p : inner.probes) v.probes.push_back(p);
    std::size_t added = 0;
    for (std::size_t i = 0; i + 1 < inner.probes.size() && added < max_extra; ++i, ++added)
        v.probes.push_back(direct_sum({inner.probes[i], inner.probes[i + 1]}));
    if (inner.probes.size() >= 3)
        v.probes.push_back(direct_sum({inner.probes[0], inner.probes[1], inner.probes[2]}));
    else if (!inner.probes.empty())
        v.probes.push_back(direct_sum({inner.probes[0], inner.probes[0]}));
    return v;
}

inline DgView translation_completion(const DgView& inner,
                                     std::vector<int> shifts = {-2, 0, 1}) {
    DgView v{inner.base, inner.name + "^shift", {}};
    for (const auto& p : inner.probes)
        for (int s : shifts) v.probes.push_back(shift_object(p, s));
    return v;
}

inline DgView twist_completion(const DgView& inner, std::size_t max_cones = 4) {
    DgView v{inner.base, inner.name + "^twist", {}};
    for (const auto& p : inner.probes) v.probes.push_back(p);
    std::size_t added = 0;
    for (const Morphism& phi : closed_degree0_units(inner)) {
        if (added >= max_cones) break;
        v.probes.push_back(cone(phi));
        ++added;
    }
    if (!inner.probes.empty() && added == 0)
        v.probes.push_back(cone(Morphism::identity(*inner.base, inner.probes.front())));
    return v;
}

inline DgView pretriangulated_hull(const DgView& inner, std::size_t max_cones = 4) {
    DgView shifted = translation_completion(inner, {-1, 0});
    DgView v{inner.base, inner.name + "^pretr", {}};
    for (const auto& p : inner.probes) v.probes.push_back(p);
    std::size_t added = 0;
    std::vector<Morphism> closed = closed_degree0_units(DgView{inner.base, "", shifted.probes});
    for (const Morphism& phi : closed) {
        if (added >= max_cones) break;
        NormalObject c = cone(phi);
        if (!is_one_sided(c)) continue;
        v.probes.push_back(c);
        ++added;
    }
    for (auto& p : v.probes)
        if (!is_one_sided(p))
            throw std::invalid_argument("pretriangulated_hull: probe is not one-sided");
    return v;
}

/// All hom-basis unit morphisms between two objects, every degree.
inline std::vector<Morphism> hom_units(const BaseCategory& cat, const NormalObject& x,
                                       const NormalObject& y) {
    std::vector<Morphism> out;
    auto xs = std::make_shared<const NormalObject>(x);
    auto ys = std::make_shared<const NormalObject>(y);
    for (std::size_t col = 0; col < x.summands.size(); ++col) {
        for (std::size_t row = 0; row < y.summands.size(); ++row) {
            const auto& hom = cat.hom(x.summands[col].object, y.summands[row].object);
            for (const auto& [deg, ids] : hom) {
                (void)deg;
                for (int id : ids)
                    out.push_back(Morphism::unit(
                        cat, xs, ys, EntryKey{static_cast<int>(row), static_cast<int>(col), id}));
            }
        }
    }
    return out;
}

inline std::vector<Morphism> closed_degree0_units(const DgView& view) {
    std::vector<Morphism> out;
    for (std::size_t i = 0; i < view.probes.size(); ++i)
        for (std::size_t j = 0; j < view.probes.size(); ++j) {
            if (i == j) continue;
            for (const Morphism& u : hom_units(*view.base, view.probes[i], view.probes[j]))
                if (u.degree() == 0 && u.is_closed()) out.push_back(u);
        }
    return out;
}

struct CheckIssue {
    std::string clause;
    std::string witness;
};

struct CheckReport {
    std::string subject;
    long long units_checked = 0;
    long long pairs_checked = 0;
    long long triples_checked = 0;
    std::vector<CheckIssue> issues;

    bool pass() const { return issues.empty(); }

    std::string to_string() const {
        std::ostringstream os;
        os << subject << ": " << (pass() ? "pass" : "FAIL") << " (units " << units_checked
           << ", pairs " << pairs_checked << ", triples " << triples_checked << ")";
        for (const auto& i : issues) os << "\n  " << i.clause << ": " << i.witness;
        return os.str();
    }
};

/// Verifies the dg category axioms over the view's probe roster:
/// d^2 = 0 and unit laws on every basis morphism, the graded Leibniz rule
/// on all composable basis pairs, associativity on all composable basis
/// triples (skipped when depth < 3). Failures are report entries carrying
/// the witnessing chain, never exceptions.
inline CheckReport check_dg_axioms(const DgView& view, int depth = 3) {
    CheckReport report;
    report.subject = view.name;
    const BaseCategory& cat = *view.base;

    auto record = [&report](const std::string& clause, const std::string& witness) {
        if (report.issues.size() < 32) report.issues.push_back(CheckIssue{clause, witness});
    };

    for (const auto& x : view.probes) {
        Morphism id = Morphism::identity(cat, x);
        if (!id.differential().is_zero()) record("d_of_identity", object_label(cat, x));
    }

    std::vector<std::vector<std::vector<Morphism>>> units(view.probes.size());
    for (std::size_t i = 0; i < view.probes.size(); ++i) {
        units[i].resize(view.probes.size());
        for (std::size_t j = 0; j < view.probes.size(); ++j)
            units[i][j] = hom_units(cat, view.probes[i], view.probes[j]);
    }

    for (std::size_t i = 0; i < view.probes.size(); ++i)
        for (std::size_t j = 0; j < view.probes.size(); ++j)
            for (const Morphism& u : units[i][j]) {
                ++report.units_checked;
                if (!u.differential().differential().is_zero())
                    record("d_squared", u.to_string());
                Morphism idl = compose(Morphism::identity(cat, view.probes[j]), u);
                Morphism idr = compose(u, Morphism::identity(cat, view.probes[i]));
                if (idl != u) record("unit_left", u.to_string());
                if (idr != u) record("unit_right", u.to_string());
            }

    for (std::size_t i = 0; i < view.probes.size(); ++i)
        for (std::size_t j = 0; j < view.probes.size(); ++j)
            for (std::size_t k = 0; k < view.probes.size(); ++k)
                for (const Morphism& g : units[j][k])
                    for (const Morphism& f : units[i][j]) {
                        ++report.pairs_checked;
                        Scalar sign = (g.degree() % 2 == 0) ? Scalar(1) : Scalar(-1);
                        Morphism lhs = compose(g, f).differential();
                        Morphism rhs =
                            compose(g.differential(), f) + sign * compose(g, f.differential());
                        if (lhs != rhs)
                            record("leibniz", g.to_string() + "  o  " + f.to_string());
                    }

    if (depth >= 3) {
        for (std::size_t i = 0; i < view.probes.size(); ++i)
            for (std::size_t j = 0; j < view.probes.size(); ++j)
                for (std::size_t k = 0; k < view.probes.size(); ++k)
                    for (std::size_t l = 0; l < view.probes.size(); ++l)
                        for (const Morphism& h : units[k][l])
                            for (const Morphism& g : units[j][k])
                                for (const Morphism& f : units[i][j]) {
                                    ++report.triples_checked;
                                    if (compose(compose(h, g), f) != compose(h, compose(g, f)))
                                        record("associativity", h.to_string() + " o " +
                                                                    g.to_string() + " o " +
                                                                    f.to_string());
                                }
    }
    return report;
}

}  // namespace pretr
