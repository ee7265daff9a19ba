#pragma once

#include <pretr/ainf.hpp>
#include <pretr/matrix.hpp>

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace pretr {

/// The hom cochain complex of an object pair: explicit ordered bases per
/// degree and exact matrices of the differential, twist terms included.
class HomComplex {
public:
    HomComplex(const BaseCategory& cat, NormalObject src, NormalObject dst)
        : cat_(&cat), src_(std::move(src)), dst_(std::move(dst)) {
        for (const Morphism& u : hom_units(cat, src_, dst_))
            basis_[u.degree()].push_back(u.terms().begin()->first);
        for (const auto& [deg, keys] : basis_) {
            const std::vector<EntryKey>& next = keys_at(deg + 1);
            Matrix d(next.size(), keys.size());
            for (std::size_t c = 0; c < keys.size(); ++c) {
                Morphism du = Morphism::unit(cat, src_, dst_, keys[c]).differential();
                for (const auto& [k, coef] : du.terms()) d(index_of(deg + 1, k), c) = coef;
            }
            d_[deg] = std::move(d);
        }
    }

    const BaseCategory& category() const { return *cat_; }
    const NormalObject& src() const { return src_; }
    const NormalObject& dst() const { return dst_; }

    std::size_t dim(int degree) const {
        auto it = basis_.find(degree);
        return it == basis_.end() ? 0 : it->second.size();
    }

    std::pair<int, int> degree_window() const {
        if (basis_.empty()) return {0, 0};
        return {basis_.begin()->first, basis_.rbegin()->first};
    }

    /// Exact matrix of d out of the given degree (rows index degree + 1).
    Matrix differential_matrix(int degree) const {
        auto it = d_.find(degree);
        if (it != d_.end()) return it->second;
        return Matrix(dim(degree + 1), dim(degree));
    }

    std::size_t cocycle_dim(int degree) const {
        return dim(degree) - differential_matrix(degree).rank_fraction_free();
    }

    std::size_t coboundary_dim(int degree) const {
        return differential_matrix(degree - 1).rank_fraction_free();
    }

    std::size_t cohomology_dim(int degree) const {
        return cocycle_dim(degree) - coboundary_dim(degree);
    }

    std::vector<Scalar> coordinates(const Morphism& m) const {
        if (!(m.src() == src_) || !(m.dst() == dst_))
            throw std::invalid_argument("HomComplex: morphism endpoints do not match");
        std::vector<Scalar> v(dim(m.degree()), Scalar(0));
        for (const auto& [k, c] : m.terms()) v[index_of(m.degree(), k)] = c;
        return v;
    }

    Morphism from_coordinates(int degree, const std::vector<Scalar>& v) const {
        const std::vector<EntryKey>& keys = keys_at(degree);
        if (v.size() != keys.size())
            throw std::invalid_argument("HomComplex: coordinate size mismatch");
        Morphism m = Morphism::zero(*cat_, src_, dst_, degree);
        for (std::size_t i = 0; i < keys.size(); ++i) m.add_term(keys[i], v[i]);
        return m;
    }

    /// Solves d(h) = x for a closed x; returns the canonical solution
    /// (free coordinates zero under the basis order) or nothing when x is
    /// not a coboundary.
    std::optional<Morphism> solve_coboundary(const Morphism& x) const {
        if (!x.differential().is_zero())
            throw std::invalid_argument("solve_coboundary: target is not closed");
        if (x.is_zero()) return from_coordinates(x.degree() - 1, std::vector<Scalar>(dim(x.degree() - 1), Scalar(0)));
        auto sol = solve_linear(differential_matrix(x.degree() - 1), coordinates(x));
        if (!sol) return std::nullopt;
        return from_coordinates(x.degree() - 1, *sol);
    }

    /// Canonical representative of a cocycle modulo coboundaries: the
    /// residue after reducing against the column space of d.
    Morphism canonical_representative(const Morphism& z) const {
        Matrix d = differential_matrix(z.degree() - 1);
        // rows = images of the (degree-1) basis, reduced below
        Matrix rows(d.cols(), d.rows());
        for (std::size_t i = 0; i < d.rows(); ++i)
            for (std::size_t j = 0; j < d.cols(); ++j) rows(j, i) = d(i, j);
        std::vector<std::size_t> pivots = rows.rref();
        std::vector<Scalar> reduced = reduce_mod_rowspace(rows, pivots, coordinates(z));
        return from_coordinates(z.degree(), reduced);
    }

private:
    const BaseCategory* cat_;
    NormalObject src_;
    NormalObject dst_;
    std::map<int, std::vector<EntryKey>> basis_;
    std::map<int, Matrix> d_;

    const std::vector<EntryKey>& keys_at(int degree) const {
        static const std::vector<EntryKey> kEmpty;
        auto it = basis_.find(degree);
        return it == basis_.end() ? kEmpty : it->second;
    }

    std::size_t index_of(int degree, const EntryKey& k) const {
        const std::vector<EntryKey>& keys = keys_at(degree);
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (keys[i] == k) return i;
        throw std::logic_error("HomComplex: basis key not found");
    }
};

inline HomComplex hom_complex(const BaseCategory& cat, const NormalObject& x,
                              const NormalObject& y) {
    return HomComplex(cat, x, y);
}

// ---------------------------------------------------------------------------
// H0 of functors
// ---------------------------------------------------------------------------

/// Underlying-category image of a closed morphism: the first functor
/// component, desuspended.
inline Morphism h0_image(const AInfFunctor& f, const Morphism& closed) {
    if (!closed.differential().is_zero())
        throw std::invalid_argument("h0_image: morphism is not closed");
    return up(f.apply({down(closed)}));
}

/// Homotopy classes are compared after reduction mod coboundaries.
inline bool h0_equal(const BaseCategory& cat, const Morphism& a, const Morphism& b) {
    HomComplex hc(cat, a.src(), a.dst());
    return hc.canonical_representative(a) == hc.canonical_representative(b);
}

/// Witness that the image functor respects composition up to homotopy:
/// returns h with d(h) = F1(a o b) - F1(a) o F1(b).
inline std::optional<Morphism> h0_composition_witness(const AInfFunctor& f, const Morphism& a,
                                                      const Morphism& b) {
    Morphism lhs = h0_image(f, compose(a, b));
    Morphism rhs = compose(h0_image(f, a), h0_image(f, b));
    HomComplex hc(f.target_base(), rhs.src(), rhs.dst());
    return hc.solve_coboundary(lhs - rhs);
}

// ---------------------------------------------------------------------------
// Deciding isomorphism in the homotopy category
// ---------------------------------------------------------------------------

struct IsoVerdict {
    enum class Kind { Isomorphic, NotIsomorphic, Undecided } kind = Kind::Undecided;
    std::string certificate;
    std::optional<Morphism> forward;
    std::optional<Morphism> backward;

    bool isomorphic() const { return kind == Kind::Isomorphic; }
    bool not_isomorphic() const { return kind == Kind::NotIsomorphic; }
};

namespace detail {

/// Basis of H^0 as canonical cocycle representatives.
inline std::vector<Morphism> h0_basis(const HomComplex& hc) {
    Matrix d = hc.differential_matrix(0);
    // kernel via rref of d
    Matrix m = d;
    std::vector<std::size_t> pivots = m.rref();
    std::vector<bool> is_pivot(d.cols(), false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    std::vector<std::vector<Scalar>> kernel;
    for (std::size_t free = 0; free < d.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<Scalar> v(d.cols(), Scalar(0));
        v[free] = Scalar(1);
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
        kernel.push_back(std::move(v));
    }
    // reduce kernel vectors mod coboundaries and keep an independent set
    std::vector<Morphism> reps;
    Matrix bmat = hc.differential_matrix(-1);
    std::vector<std::vector<Scalar>> rows;
    for (std::size_t j = 0; j < bmat.cols(); ++j) {
        std::vector<Scalar> row(d.cols(), Scalar(0));
        for (std::size_t i = 0; i < bmat.rows(); ++i) row[i] = bmat(i, j);
        rows.push_back(std::move(row));
    }
    auto rank_of = [&](const std::vector<std::vector<Scalar>>& rws) {
        Matrix mm(rws.size(), d.cols());
        for (std::size_t r = 0; r < rws.size(); ++r)
            for (std::size_t c = 0; c < d.cols(); ++c) mm(r, c) = rws[r][c];
        return mm.rank_fraction_free();
    };
    std::size_t base_rank = rank_of(rows);
    for (const auto& v : kernel) {
        rows.push_back(v);
        std::size_t r = rank_of(rows);
        if (r > base_rank) {
            base_rank = r;
            reps.push_back(hc.canonical_representative(hc.from_coordinates(0, v)));
        } else {
            rows.pop_back();
        }
    }
    return reps;
}

inline bool is_h0_zero(const BaseCategory& cat, const NormalObject& x) {
    HomComplex endo(cat, x, x);
    Morphism id = Morphism::identity(cat, x);
    if (id.is_zero()) return true;
    return endo.solve_coboundary(id).has_value();
}

}  // namespace detail

/// Searches for mutually inverse homotopy classes between two objects.
/// Sound in both directions: a witness pair verifiably composes to
/// identities up to explicit coboundaries, and a negative answer carries a
/// rank certificate. When neither applies within the searched coefficient
/// lattice, the verdict is Undecided.
inline IsoVerdict decide_h0_isomorphic(const BaseCategory& cat, const NormalObject& x,
                                       const NormalObject& y, int search_radius = 1,
                                       std::size_t max_dim = 8) {
    IsoVerdict verdict;
    if (x == y) {
        verdict.kind = IsoVerdict::Kind::Isomorphic;
        verdict.certificate = "objects coincide; identity witnesses";
        verdict.forward = Morphism::identity(cat, x);
        verdict.backward = Morphism::identity(cat, x);
        return verdict;
    }
    bool xz = detail::is_h0_zero(cat, x);
    bool yz = detail::is_h0_zero(cat, y);
    if (xz && yz) {
        verdict.kind = IsoVerdict::Kind::Isomorphic;
        verdict.certificate = "both objects are homotopy-zero; zero maps witness";
        verdict.forward = Morphism::zero(cat, x, y, 0);
        verdict.backward = Morphism::zero(cat, y, x, 0);
        return verdict;
    }
    if (xz != yz) {
        verdict.kind = IsoVerdict::Kind::NotIsomorphic;
        verdict.certificate =
            "exactly one object is homotopy-zero (its identity is a coboundary)";
        return verdict;
    }
    HomComplex fwd(cat, x, y);
    HomComplex bwd(cat, y, x);
    std::vector<Morphism> u = detail::h0_basis(fwd);
    std::vector<Morphism> v = detail::h0_basis(bwd);
    if (u.empty() || v.empty()) {
        verdict.kind = IsoVerdict::Kind::NotIsomorphic;
        verdict.certificate = "a hom space has zero classes in degree 0 while neither object "
                              "is homotopy-zero";
        return verdict;
    }
    // span certificate: [id] must lie in the span of all composite classes
    HomComplex endo_x(cat, x, x);
    HomComplex endo_y(cat, y, y);
    Morphism idx = endo_x.canonical_representative(Morphism::identity(cat, x));
    Morphism idy = endo_y.canonical_representative(Morphism::identity(cat, y));
    auto span_contains = [](const HomComplex& hc, const std::vector<Morphism>& gens,
                            const Morphism& target) {
        Matrix rows(gens.size() + 1, hc.dim(0));
        for (std::size_t r = 0; r < gens.size(); ++r) {
            std::vector<Scalar> co = hc.coordinates(gens[r]);
            for (std::size_t c = 0; c < co.size(); ++c) rows(r, c) = co[c];
        }
        Matrix with = rows;
        std::vector<Scalar> t = hc.coordinates(target);
        for (std::size_t c = 0; c < t.size(); ++c) with(gens.size(), c) = t[c];
        return with.rank_fraction_free() == rows.rank_fraction_free();
    };
    std::vector<Morphism> xcomps;
    std::vector<Morphism> ycomps;
    for (const Morphism& a : u)
        for (const Morphism& b : v) {
            xcomps.push_back(endo_x.canonical_representative(compose(b, a)));
            ycomps.push_back(endo_y.canonical_representative(compose(a, b)));
        }
    if (!span_contains(endo_x, xcomps, idx) || !span_contains(endo_y, ycomps, idy)) {
        verdict.kind = IsoVerdict::Kind::NotIsomorphic;
        verdict.certificate = "composition pairing is degenerate: the identity class is not in "
                              "the span of composite classes";
        return verdict;
    }
    if (u.size() > max_dim || v.size() > max_dim) {
        verdict.certificate = "hom spaces exceed the configured search dimension";
        return verdict;
    }
    // lattice search over forward coefficients; the inverse condition is
    // linear in the backward coefficients and solved exactly
    std::vector<long long> coeff(u.size(), -search_radius);
    auto advance = [&]() {
        for (std::size_t i = 0; i < coeff.size(); ++i) {
            if (coeff[i] < search_radius) {
                ++coeff[i];
                for (std::size_t j = 0; j < i; ++j) coeff[j] = -search_radius;
                return true;
            }
        }
        return false;
    };
    do {
        bool all_zero = true;
        for (long long c : coeff)
            if (c != 0) all_zero = false;
        if (all_zero) continue;
        Morphism cand = Morphism::zero(cat, x, y, 0);
        for (std::size_t i = 0; i < u.size(); ++i) cand = cand + Scalar(coeff[i]) * u[i];
        // unknowns: coefficients of v; equations: [cand o w] = [id_x] and
        // [w o cand] = [id_y] in coordinates of the endo complexes
        std::size_t rows_x = endo_x.dim(0);
        std::size_t rows_y = endo_y.dim(0);
        Matrix sys(rows_x + rows_y, v.size());
        std::vector<Scalar> rhs;
        for (std::size_t i = 0; i < rows_x + rows_y; ++i) rhs.push_back(Scalar(0));
        for (std::size_t j = 0; j < v.size(); ++j) {
            std::vector<Scalar> cx = endo_x.coordinates(endo_x.canonical_representative(
                compose(v[j], cand)));
            std::vector<Scalar> cy = endo_y.coordinates(endo_y.canonical_representative(
                compose(cand, v[j])));
            for (std::size_t i = 0; i < rows_x; ++i) sys(i, j) = cx[i];
            for (std::size_t i = 0; i < rows_y; ++i) sys(rows_x + i, j) = cy[i];
        }
        std::vector<Scalar> idxc = endo_x.coordinates(idx);
        std::vector<Scalar> idyc = endo_y.coordinates(idy);
        for (std::size_t i = 0; i < rows_x; ++i) rhs[i] = idxc[i];
        for (std::size_t i = 0; i < rows_y; ++i) rhs[rows_x + i] = idyc[i];
        auto sol = solve_linear(sys, rhs);
        if (!sol) continue;
        Morphism inverse = Morphism::zero(cat, y, x, 0);
        for (std::size_t j = 0; j < v.size(); ++j) inverse = inverse + (*sol)[j] * v[j];
        // verify the witnesses honestly
        HomComplex ex(cat, x, x);
        HomComplex ey(cat, y, y);
        bool ok = ex.solve_coboundary(compose(inverse, cand) - Morphism::identity(cat, x))
                      .has_value() &&
                  ey.solve_coboundary(compose(cand, inverse) - Morphism::identity(cat, y))
                      .has_value();
        if (!ok) continue;
        verdict.kind = IsoVerdict::Kind::Isomorphic;
        verdict.certificate = "mutually inverse classes found and verified";
        verdict.forward = cand;
        verdict.backward = inverse;
        return verdict;
    } while (advance());
    verdict.certificate = "no witness within the searched coefficient lattice";
    return verdict;
}

// ---------------------------------------------------------------------------
// Functor lift for quivers of path length at most two
// ---------------------------------------------------------------------------

/// Input table of the quiver lift: images of objects and of arrows (closed
/// degree-0 representatives of their homotopy classes), plus optional
/// pinned representatives for longer basis paths and pinned homotopies per
/// composable arrow pair.
struct H0FunctorTable {
    std::map<std::string, NormalObject> objects;               // vertex -> image
    std::map<std::string, Morphism> arrow_images;              // arrow basis label -> closed rep
    std::map<std::string, Morphism> pinned_representatives;    // path basis label -> closed rep
    std::map<std::pair<std::string, std::string>, Morphism> pinned_homotopies;
};

/// Basis id of a single arrow (needed to look up length-one factors).
inline int arrow_basis(const BaseCategory& cat, int arrow_id) {
    for (std::size_t id = 0; id < cat.basis_count(); ++id) {
        const BasisElem& b = cat.basis(static_cast<int>(id));
        if (b.path_length == 1 &&
            cat.path_arrows(static_cast<int>(id)) == std::vector<int>{arrow_id})
            return static_cast<int>(id);
    }
    throw std::invalid_argument("arrow_basis: arrow is not a basis element");
}

/// Builds the functor of the suspended world determined by an underlying
/// functor into the homotopy category of the target, for a source quiver
/// category with all paths of length at most two. First components are the
/// chosen closed representatives; second components are coboundary
/// witnesses for the length-two composition defects; all higher components
/// vanish.
inline std::shared_ptr<TableFunctor> quiver_functor_lift(const BaseCategory& source,
                                                         const BaseCategory& target,
                                                         const H0FunctorTable& table) {
    if (!source.has_path_metadata())
        throw std::invalid_argument("quiver_functor_lift: source must come from a quiver");
    if (source.max_path_length() > 2)
        throw std::invalid_argument(
            "quiver_functor_lift: path length exceeds two; the two-step construction does not "
            "apply");
    auto f = std::make_shared<TableFunctor>(source, target);
    for (std::size_t i = 0; i < source.object_count(); ++i) {
        const std::string& label = source.object_label(static_cast<int>(i));
        auto it = table.objects.find(label);
        if (it == table.objects.end())
            throw std::invalid_argument("quiver_functor_lift: missing image for object '" +
                                        label + "'");
        f->set_object(label, it->second);
    }

    // first component on basis elements; arrows first, then length-two
    // paths whose default representatives come from composing arrow images
    std::map<int, Morphism> images;
    for (int pass = 1; pass <= 2; ++pass) {
        for (std::size_t id = 0; id < source.basis_count(); ++id) {
            const BasisElem& b = source.basis(static_cast<int>(id));
            if (source.is_identity(static_cast<int>(id))) continue;
            if (b.path_length != pass) continue;
            Morphism value = [&]() {
                auto pin = table.pinned_representatives.find(b.label);
                if (pin != table.pinned_representatives.end()) return pin->second;
                if (b.path_length == 1) {
                    auto it = table.arrow_images.find(b.label);
                    if (it == table.arrow_images.end())
                        throw std::invalid_argument(
                            "quiver_functor_lift: missing image for arrow '" + b.label + "'");
                    return it->second;
                }
                // length two: canonical representative of the composite class
                const std::vector<int>& arrows = source.path_arrows(static_cast<int>(id));
                Morphism outer = images.at(arrow_basis(source, arrows[0]));
                Morphism inner = images.at(arrow_basis(source, arrows[1]));
                Morphism composite = compose(outer, inner);
                HomComplex hc(target, composite.src(), composite.dst());
                return hc.canonical_representative(composite);
            }();
            if (!value.differential().is_zero())
                throw std::invalid_argument("quiver_functor_lift: representative of '" + b.label +
                                            "' is not closed");
            images.emplace(static_cast<int>(id), value);
            f->set_f1(static_cast<int>(id), value);
        }
    }

    // second component on composable non-identity basis pairs
    for (std::size_t g = 0; g < source.basis_count(); ++g) {
        if (source.is_identity(static_cast<int>(g))) continue;
        for (std::size_t h = 0; h < source.basis_count(); ++h) {
            if (source.is_identity(static_cast<int>(h))) continue;
            const BasisElem& bg = source.basis(static_cast<int>(g));
            const BasisElem& bh = source.basis(static_cast<int>(h));
            if (bg.src != bh.dst) continue;
            // F1 extended linearly to the reduced composite
            Morphism f_of_composite = Morphism::zero(
                target, images.at(static_cast<int>(h)).src(),
                images.at(static_cast<int>(g)).dst(), bg.degree + bh.degree);
            for (const auto& [rid, c] : source.compose_basis(static_cast<int>(g),
                                                             static_cast<int>(h)))
                f_of_composite = f_of_composite + c * images.at(rid);
            Morphism defect =
                compose(images.at(static_cast<int>(g)), images.at(static_cast<int>(h))) -
                f_of_composite;
            HomComplex hc(target, f_of_composite.src(), f_of_composite.dst());
            Morphism witness = [&]() {
                auto pin = table.pinned_homotopies.find({bg.label, bh.label});
                if (pin != table.pinned_homotopies.end()) {
                    if (!(pin->second.differential() == defect))
                        throw std::invalid_argument(
                            "quiver_functor_lift: pinned homotopy for (" + bg.label + ", " +
                            bh.label + ") does not bound the composition defect");
                    return pin->second;
                }
                auto h0 = hc.solve_coboundary(defect);
                if (!h0)
                    throw std::invalid_argument(
                        "quiver_functor_lift: composition defect of (" + bg.label + ", " +
                        bh.label + ") is not a coboundary; the table is not a functor into the "
                        "homotopy category");
                return *h0;
            }();
            if (!witness.is_zero() || !defect.is_zero())
                f->set_f2(static_cast<int>(g), static_cast<int>(h), witness);
        }
    }
    return f;
}

}  // namespace pretr
