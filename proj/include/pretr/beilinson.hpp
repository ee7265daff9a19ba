#pragma once

#include <pretr/completions.hpp>
#include <pretr/functor_table.hpp>
#include <pretr/homology.hpp>
#include <pretr/lift.hpp>
#include <pretr/presentation.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace pretr {

// ---------------------------------------------------------------------------
// Beilinson quiver windows and the monomial model
// ---------------------------------------------------------------------------

inline std::string line_bundle_label(int twist) { return "O(" + std::to_string(twist) + ")"; }

inline std::string step_letter(int step) {
    // arrows one step away from O carry x, two steps y, then z, w, v, u
    static const char* letters[] = {"x", "y", "z", "w", "v", "u"};
    if (step < 1 || step > 6)
        throw std::invalid_argument("beilinson: window wider than 6 is not supported");
    return letters[step - 1];
}

/// Quiver presentation of the line bundles O(-w),...,O on projective
/// n-space: n+1 parallel arrows between consecutive twists, and the
/// commutation relations between consecutive steps.
inline QuiverPresentation beilinson_presentation(int n, int window) {
    if (n < 0) throw std::invalid_argument("beilinson: dimension must be >= 0");
    if (window < 0) throw std::invalid_argument("beilinson: window must be >= 0");
    QuiverPresentation p;
    p.name = "B" + std::to_string(n) + (window == n ? "" : "w" + std::to_string(window));
    for (int i = window; i >= 0; --i) p.vertices.push_back(line_bundle_label(-i));
    for (int step = window; step >= 1; --step) {
        for (int v = 0; v <= n; ++v) {
            Arrow a;
            a.name = step_letter(step) + std::to_string(v);
            a.src = line_bundle_label(-step);
            a.dst = line_bundle_label(-step + 1);
            p.arrows.push_back(a);
        }
    }
    auto arrow_id = [&p](const std::string& name) {
        for (std::size_t i = 0; i < p.arrows.size(); ++i)
            if (p.arrows[i].name == name) return static_cast<int>(i);
        throw std::logic_error("beilinson: arrow lookup");
    };
    for (int step = window; step >= 2; --step) {
        for (int i = 0; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) {
                int outer_i = arrow_id(step_letter(step - 1) + std::to_string(i));
                int outer_j = arrow_id(step_letter(step - 1) + std::to_string(j));
                int inner_i = arrow_id(step_letter(step) + std::to_string(i));
                int inner_j = arrow_id(step_letter(step) + std::to_string(j));
                // a_i o b_j = a_j o b_i
                p.relations.push_back(PathCombo{{Scalar(1), Path{outer_i, inner_j}},
                                                {Scalar(-1), Path{outer_j, inner_i}}});
            }
    }
    return p;
}

inline BaseCategory beilinson_window_category(int n, int window,
                                              Field field = Field::rationals()) {
    return build_path_category(beilinson_presentation(n, window), field);
}

/// The full strong exceptional window O(-n),...,O on P^n.
inline BaseCategory beilinson_category(int n, Field field = Field::rationals()) {
    return beilinson_window_category(n, n, field);
}

/// Monomials in n+1 variables as sorted exponent sequences; the hom space
/// Hom(O(-i), O(-j)) of a Beilinson window is modeled by monomials of
/// degree i-j, which gives composition an independent oracle.
using Monomial = std::vector<int>;  // variable indices, weakly increasing

inline long long monomial_count(int n, int degree) {
    // dim Sym^degree(k^{n+1}) = C(degree + n, n)
    if (degree < 0) return 0;
    long long r = 1;
    for (int i = 1; i <= n; ++i) r = r * (degree + i) / i;
    return r;
}

/// Variable multiset of a path basis label in a Beilinson window category:
/// each arrow contributes its variable index.
inline Monomial path_monomial(const BaseCategory& cat, int basis_id) {
    const BasisElem& b = cat.basis(basis_id);
    Monomial m;
    if (!cat.has_path_metadata())
        throw std::invalid_argument("path_monomial: category has no path metadata");
    if (b.path_length == 0) return m;
    std::string digits;
    for (char c : b.label) {
        if (c >= '0' && c <= '9') {
            digits.push_back(c);
        } else if (!digits.empty()) {
            m.push_back(std::stoi(digits));
            digits.clear();
        }
    }
    if (!digits.empty()) m.push_back(std::stoi(digits));
    std::sort(m.begin(), m.end());
    return m;
}

/// The canonical path representing a monomial from O(src_twist): variables
/// sorted ascending are assigned left to right, which is exactly the
/// lexicographically least path in its relation class.
inline int monomial_to_basis(const BaseCategory& cat, int src_twist, const Monomial& mono) {
    Monomial sorted = mono;
    std::sort(sorted.begin(), sorted.end());
    std::string label = "1";
    const int len = static_cast<int>(sorted.size());
    const int depth = -src_twist;  // path starts at O(-depth)
    if (len > 0) {
        if (len > depth)
            throw std::invalid_argument("monomial_to_basis: monomial leaves the window");
        label.clear();
        // label lists arrows outermost first: position k is the arrow at
        // step depth - len + 1 + k, carrying the k-th smallest variable
        for (int k = 0; k < len; ++k) {
            if (k) label += "*";
            label += step_letter(depth - len + 1 + k) +
                     std::to_string(sorted[static_cast<std::size_t>(k)]);
        }
    }
    int src = cat.object_index(line_bundle_label(src_twist));
    return cat.resolve_from_source(src, label);
}

// ---------------------------------------------------------------------------
// The Koszul resolution on the projective plane
// ---------------------------------------------------------------------------

/// The three-term complex O(-2)^3 -> O(-1)^3 -> O quasi-isomorphic to
/// O(-3), as a one-sided twisted complex over the plane window.
inline NormalObject koszul_complex(const BaseCategory& b2) {
    auto y = [&b2](int i) {
        return b2.resolve_from_source(b2.object_index("O(-2)"), "y" + std::to_string(i));
    };
    auto x = [&b2](int i) {
        return b2.resolve_from_source(b2.object_index("O(-1)"), "x" + std::to_string(i));
    };
    std::vector<NormalObject> parts;
    for (int k = 0; k < 3; ++k) parts.push_back(embed_object(b2, "O(-2)"));
    for (int k = 0; k < 3; ++k)
        parts.push_back(shift_object(embed_object(b2, "O(-1)"), -1));
    parts.push_back(shift_object(embed_object(b2, "O(0)"), -2));
    NormalObject plain = direct_sum(parts);
    Morphism q(b2, plain, plain, 1);
    // columns: O(-2) copies 0..2; rows: O(-1) copies 3..5; top slot 6
    q.add_term(EntryKey{3, 0, y(1)}, Scalar(-1));
    q.add_term(EntryKey{3, 1, y(2)}, Scalar(1));
    q.add_term(EntryKey{4, 0, y(0)}, Scalar(1));
    q.add_term(EntryKey{4, 2, y(2)}, Scalar(-1));
    q.add_term(EntryKey{5, 1, y(0)}, Scalar(-1));
    q.add_term(EntryKey{5, 2, y(1)}, Scalar(1));
    q.add_term(EntryKey{6, 3, x(0)}, Scalar(1));
    q.add_term(EntryKey{6, 4, x(1)}, Scalar(1));
    q.add_term(EntryKey{6, 5, x(2)}, Scalar(1));
    return twist_object(q);
}

// ---------------------------------------------------------------------------
// Product windows
// ---------------------------------------------------------------------------

/// Window categories on a product of two projective spaces, carrying the
/// factor categories so entries can be translated through the monomial
/// model.
struct ProductWindow {
    int dim_a = 0;
    int dim_b = 0;
    int window_a = 0;
    int window_b = 0;
    BaseCategory factor_a;
    BaseCategory factor_b;
    BaseCategory product;

    static std::string object_label(int i, int j) {
        return line_bundle_label(i) + "x" + line_bundle_label(j);
    }

    std::pair<int, int> parse_object(const std::string& label) const {
        auto mid = label.find(")xO(");
        if (label.size() < 7 || label.substr(0, 2) != "O(" || mid == std::string::npos ||
            label.back() != ')')
            throw std::invalid_argument("ProductWindow: bad object label '" + label + "'");
        int i = std::stoi(label.substr(2, mid - 2));
        int j = std::stoi(label.substr(mid + 4, label.size() - mid - 5));
        return {i, j};
    }

    bool in_window(int i, int j) const {
        return i <= 0 && j <= 0 && i >= -window_a && j >= -window_b;
    }
};

inline ProductWindow make_product_window(int a, int b, int window_a, int window_b,
                                         Field field = Field::rationals()) {
    ProductWindow w;
    w.dim_a = a;
    w.dim_b = b;
    w.window_a = window_a;
    w.window_b = window_b;
    w.factor_a = beilinson_window_category(a, window_a, field);
    w.factor_b = beilinson_window_category(b, window_b, field);
    w.product = kunneth_product(w.factor_a, w.factor_b,
                                "B" + std::to_string(a) + "," + std::to_string(b) + "w" +
                                    std::to_string(window_a) + "," + std::to_string(window_b));
    return w;
}

namespace detail {

inline std::pair<std::string, std::string> split_product_label(const std::string& label) {
    auto pos = label.find("\xE2\x8A\xA0");
    if (pos == std::string::npos)
        throw std::invalid_argument("split_product_label: no product separator in '" + label +
                                    "'");
    return {label.substr(0, pos), label.substr(pos + 3)};
}

}  // namespace detail

/// Factor basis ids of a product basis element.
inline std::pair<int, int> product_factors(const ProductWindow& w, int basis_id) {
    const BasisElem& b = w.product.basis(basis_id);
    auto [la, lb] = detail::split_product_label(b.label);
    int src_a = b.src / static_cast<int>(w.factor_b.object_count());
    int src_b = b.src % static_cast<int>(w.factor_b.object_count());
    return {w.factor_a.resolve_from_source(src_a, la), w.factor_b.resolve_from_source(src_b, lb)};
}

inline int product_basis(const ProductWindow& w, int i_src, int j_src, const std::string& la,
                         const std::string& lb) {
    int src = w.product.object_index(ProductWindow::object_label(i_src, j_src));
    return w.product.resolve_from_source(src, la + "\xE2\x8A\xA0" + lb);
}

// ---------------------------------------------------------------------------
// Pullback and direct image tables
// ---------------------------------------------------------------------------

/// The pullback along the first projection: O(i) goes to O(i) x O(0) and a
/// section goes to itself paired with the identity.
inline AdditiveFunctorTable pullback_table(const BaseCategory& line, const ProductWindow& w) {
    AdditiveFunctorTable t(line, w.product);
    for (std::size_t i = 0; i < line.object_count(); ++i) {
        const std::string& label = line.object_label(static_cast<int>(i));
        int twist = std::stoi(label.substr(2, label.size() - 3));
        t.set_object(label, embed_object(w.product, ProductWindow::object_label(twist, 0)));
    }
    for (std::size_t id = 0; id < line.basis_count(); ++id) {
        const BasisElem& b = line.basis(static_cast<int>(id));
        if (line.is_identity(static_cast<int>(id))) continue;
        int src_twist = std::stoi(line.object_label(b.src).substr(2, std::string::npos));
        int pid = product_basis(w, src_twist, 0, b.label, "1");
        NormalObject s = embed_object(w.product, ProductWindow::object_label(src_twist, 0));
        int dst_twist = std::stoi(line.object_label(b.dst).substr(2, std::string::npos));
        NormalObject d = embed_object(w.product, ProductWindow::object_label(dst_twist, 0));
        t.set_morphism(static_cast<int>(id),
                       Morphism::unit(w.product, s, d, EntryKey{0, 0, pid}));
    }
    t.validate();
    return t;
}

/// The direct image along a projection: summands whose twist along the
/// other factor is negative are deleted, the rest keep their surviving
/// twist.
inline AdditiveFunctorTable direct_image_table(const ProductWindow& w, const BaseCategory& line,
                                               bool along_second) {
    AdditiveFunctorTable t(w.product, line);
    for (std::size_t i = 0; i < w.product.object_count(); ++i) {
        const std::string& label = w.product.object_label(static_cast<int>(i));
        auto [ta, tb] = w.parse_object(label);
        int kept = along_second ? tb : ta;
        int other = along_second ? ta : tb;
        if (other < 0)
            t.set_object(label, zero_object());
        else
            t.set_object(label, embed_object(line, line_bundle_label(kept)));
    }
    for (std::size_t id = 0; id < w.product.basis_count(); ++id) {
        if (w.product.is_identity(static_cast<int>(id))) continue;
        const BasisElem& b = w.product.basis(static_cast<int>(id));
        auto [sa, sb] = w.parse_object(w.product.object_label(b.src));
        auto [da, db] = w.parse_object(w.product.object_label(b.dst));
        int s_other = along_second ? sa : sb;
        int d_other = along_second ? da : db;
        if (s_other < 0 || d_other < 0) continue;  // zero morphism by default
        auto [fa, fb] = product_factors(w, static_cast<int>(id));
        int kept_factor = along_second ? fb : fa;
        const BaseCategory& kept_cat = along_second ? w.factor_b : w.factor_a;
        const BasisElem& kb = kept_cat.basis(kept_factor);
        int s_kept = along_second ? sb : sa;
        int d_kept = along_second ? db : da;
        NormalObject s = embed_object(line, line_bundle_label(s_kept));
        NormalObject d = embed_object(line, line_bundle_label(d_kept));
        int lid = line.resolve_from_source(line.object_index(line_bundle_label(s_kept)), kb.label);
        t.set_morphism(static_cast<int>(id), Morphism::unit(line, s, d, EntryKey{0, 0, lid}));
    }
    t.validate();
    return t;
}

// ---------------------------------------------------------------------------
// Tensor product of complexes
// ---------------------------------------------------------------------------

/// Tensor of two one-sided complexes over a product window, landing in a
/// wider window: summands multiply twists, and the second factor's
/// differential acquires the sign of the first factor's cohomological
/// degree.
inline NormalObject tensor_complexes(const ProductWindow& small, const ProductWindow& big,
                                     const NormalObject& x, const NormalObject& k) {
    auto tensor_object = [&](int xo, int ko) {
        auto [xi, xj] = small.parse_object(small.product.object_label(xo));
        auto [ki, kj] = small.parse_object(small.product.object_label(ko));
        int i = xi + ki;
        int j = xj + kj;
        if (!big.in_window(i, j))
            throw std::invalid_argument("tensor_complexes: output twist O(" + std::to_string(i) +
                                        ")xO(" + std::to_string(j) + ") is outside the window");
        return big.product.object_index(ProductWindow::object_label(i, j));
    };
    auto tensor_basis = [&](int xb, int kb, int src_product_obj) {
        auto [xa, xbf] = product_factors(small, xb);
        auto [ka, kbf] = product_factors(small, kb);
        Monomial ma = path_monomial(small.factor_a, xa);
        Monomial mka = path_monomial(small.factor_a, ka);
        ma.insert(ma.end(), mka.begin(), mka.end());
        Monomial mb = path_monomial(small.factor_b, xbf);
        Monomial mkb = path_monomial(small.factor_b, kbf);
        mb.insert(mb.end(), mkb.begin(), mkb.end());
        auto [si, sj] = big.parse_object(big.product.object_label(src_product_obj));
        int ba = monomial_to_basis(big.factor_a, si, ma);
        int bb = monomial_to_basis(big.factor_b, sj, mb);
        return product_basis(big, si, sj, big.factor_a.basis(ba).label,
                             big.factor_b.basis(bb).label);
    };

    const std::size_t nx = x.summands.size();
    const std::size_t nk = k.summands.size();
    std::vector<Summand> summands;
    summands.reserve(nx * nk);
    for (std::size_t p = 0; p < nx; ++p)
        for (std::size_t q = 0; q < nk; ++q)
            summands.push_back(Summand{tensor_object(x.summands[p].object, k.summands[q].object),
                                       x.summands[p].shift + k.summands[q].shift});
    auto slot = [&](std::size_t p, std::size_t q) {
        return static_cast<int>(p * nk + q);
    };
    NormalObject plain{summands, {}};
    Morphism twist(big.product, plain, plain, 1);
    // first factor differential (x) identity
    for (const auto& [key, c] : x.twist) {
        for (std::size_t q = 0; q < nk; ++q) {
            int kid = small.product.identity_id(k.summands[q].object);
            int bid = tensor_basis(key.basis, kid,
                                   summands[static_cast<std::size_t>(
                                                slot(static_cast<std::size_t>(key.col), q))]
                                       .object);
            twist.add_term(EntryKey{slot(static_cast<std::size_t>(key.row), q),
                                    slot(static_cast<std::size_t>(key.col), q), bid},
                           c);
        }
    }
    // identity (x) second factor differential, with the Koszul sign
    for (const auto& [key, c] : k.twist) {
        for (std::size_t p = 0; p < nx; ++p) {
            int xid = small.product.identity_id(x.summands[p].object);
            int bid = tensor_basis(xid, key.basis,
                                   summands[static_cast<std::size_t>(
                                                slot(p, static_cast<std::size_t>(key.col)))]
                                       .object);
            Scalar sign = (x.summands[p].shift % 2 == 0) ? Scalar(1) : Scalar(-1);
            twist.add_term(EntryKey{slot(p, static_cast<std::size_t>(key.row)),
                                    slot(p, static_cast<std::size_t>(key.col)), bid},
                           sign * c);
        }
    }
    return twist_object(twist);
}

// ---------------------------------------------------------------------------
// The transform pipeline
// ---------------------------------------------------------------------------

/// Validates the finitely checkable shadow of the pipeline functor's
/// defining property: the degree-0 class counts between images of the wide
/// window's generators must match the global section counts of the
/// corresponding twists on the product space.
inline std::vector<std::string> validate_pipeline_functor(const ProductWindow& big,
                                                          const ProductWindow& small,
                                                          const TableFunctor& p) {
    std::vector<std::string> failures;
    for (std::size_t i = 0; i < big.product.object_count(); ++i) {
        if (!p.has_object(static_cast<int>(i))) continue;
        for (std::size_t j = 0; j < big.product.object_count(); ++j) {
            if (!p.has_object(static_cast<int>(j))) continue;
            auto [ia, ib] = big.parse_object(big.product.object_label(static_cast<int>(i)));
            auto [ja, jb] = big.parse_object(big.product.object_label(static_cast<int>(j)));
            long long expected =
                monomial_count(big.dim_a, ja - ia) * monomial_count(big.dim_b, jb - ib);
            NormalObject pi = p.map_object(embed_object(big.product,
                                                        big.product.object_label(static_cast<int>(i))));
            NormalObject pj = p.map_object(embed_object(big.product,
                                                        big.product.object_label(static_cast<int>(j))));
            HomComplex hc(small.product, pi, pj);
            long long got = static_cast<long long>(hc.cohomology_dim(0));
            if (got != expected)
                failures.push_back("hom dimension from " +
                                   big.product.object_label(static_cast<int>(i)) + " to " +
                                   big.product.object_label(static_cast<int>(j)) + ": expected " +
                                   std::to_string(expected) + ", computed " + std::to_string(got));
        }
    }
    return failures;
}

/// The composite transform determined by a kernel complex and a window
/// functor: pull back along the first factor, tensor with the kernel, pass
/// through the hull lift of the window functor, and push down along the
/// second factor.
class FmPipeline {
public:
    FmPipeline(const BaseCategory& source_line, const BaseCategory& target_line,
               const ProductWindow& small, const ProductWindow& big, NormalObject kernel,
               std::shared_ptr<const TableFunctor> window_functor)
        : source_line_(&source_line),
          target_line_(&target_line),
          small_(&small),
          big_(&big),
          kernel_(std::move(kernel)),
          window_functor_(std::move(window_functor)),
          pullback_(pullback_table(source_line, small)),
          direct_image_(direct_image_table(small, target_line, true)),
          hull_(lift_to_hull(window_functor_)) {
        std::vector<std::string> failures =
            validate_pipeline_functor(big, small, *window_functor_);
        if (!failures.empty())
            throw std::invalid_argument("FmPipeline: window functor fails its hom-dimension "
                                        "checks: " +
                                        failures.front());
    }

    NormalObject apply(const NormalObject& x) const {
        NormalObject pulled = pullback_.apply_to_object(x);
        NormalObject tensored = tensor_complexes(*small_, *big_, pulled, kernel_);
        NormalObject through = hull_->map_object(tensored);
        return direct_image_.apply_to_object(through);
    }

    const AdditiveFunctorTable& pullback() const { return pullback_; }
    const AdditiveFunctorTable& direct_image() const { return direct_image_; }

private:
    const BaseCategory* source_line_;
    const BaseCategory* target_line_;
    const ProductWindow* small_;
    const ProductWindow* big_;
    NormalObject kernel_;
    std::shared_ptr<const TableFunctor> window_functor_;
    AdditiveFunctorTable pullback_;
    AdditiveFunctorTable direct_image_;
    std::shared_ptr<HullLift> hull_;
};

// ---------------------------------------------------------------------------
// The twist model on the plane
// ---------------------------------------------------------------------------

/// The tensoring-by-O(-1) model on the plane window: objects shift down by
/// one twist, the last generator resolves through the Koszul complex, and
/// the second-order data comes from the coboundary solver.
inline std::shared_ptr<TableFunctor> twist_by_line_bundle_model(const BaseCategory& b2) {
    NormalObject c = koszul_complex(b2);
    H0FunctorTable table;
    table.objects["O(0)"] = embed_object(b2, "O(-1)");
    table.objects["O(-1)"] = embed_object(b2, "O(-2)");
    table.objects["O(-2)"] = c;
    NormalObject om2 = embed_object(b2, "O(-2)");
    NormalObject om1 = embed_object(b2, "O(-1)");
    int id_om2 = b2.identity_id(b2.object_index("O(-2)"));
    for (int i = 0; i <= 2; ++i) {
        // multiplication by a coordinate on sections: x_i maps to y_i
        table.arrow_images["x" + std::to_string(i)] = Morphism::unit(
            b2, om2, om1,
            EntryKey{0, 0,
                     b2.resolve_from_source(b2.object_index("O(-2)"), "y" + std::to_string(i))});
        // on the resolution, multiplication by a coordinate is the
        // projection onto the complementary summand of the Koszul term
        Morphism z(b2, c, om2, 0);
        z.add_term(EntryKey{0, 2 - i, id_om2}, Scalar(1));
        table.arrow_images["y" + std::to_string(i)] = z;
    }
    return quiver_functor_lift(b2, b2, table);
}

}  // namespace pretr
